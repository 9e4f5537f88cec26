#include "aoi/analytic.hpp"

#include <cmath>
#include <string>

#include "aoi/builders.hpp"
#include "aoi/shs.hpp"

namespace aoi {

namespace {

void require_positive(double v, const char* what) {
  if (!std::isfinite(v) || !(v > 0.0)) {
    throw std::invalid_argument(std::string(what) + " must be positive and finite");
  }
}

void require_non_negative(double v, const char* what) {
  if (!std::isfinite(v) || v < 0.0) {
    throw std::invalid_argument(std::string(what) + " must be non-negative and finite");
  }
}

void require_share(double lambda_i, double lambda) {
  require_positive(lambda_i, "tracked source rate");
  require_positive(lambda, "total per-server rate");
  if (lambda_i > lambda * (1.0 + 1e-12)) {
    throw std::invalid_argument("tracked source rate exceeds the total per-server rate");
  }
}

}  // namespace

double aoi_lcfs_homogeneous(int servers, double lambda, double mu) {
  if (servers < 1) throw std::invalid_argument("server count must be at least 1");
  require_positive(lambda, "arrival rate");
  require_positive(mu, "service rate");
  const double n = servers;
  const double rho = lambda / mu;

  // prod_{i=1}^{j} rho (n-i+1) / (i + (n-i) rho), accumulated for j = 1..n-1.
  double product = 1.0;
  double sum = 0.0;
  for (int i = 1; i <= servers - 1; ++i) {
    product *= rho * (n - i + 1) / (i + (n - i) * rho);
    sum += product;
  }
  return (sum / (n * rho) + 1.0 / (n * rho) + product / (n * n)) / mu;
}

double aoi_multi_source_n2(double lambda_i, double lambda, double mu) {
  require_share(lambda_i, lambda);
  require_positive(mu, "service rate");
  return 1.0 / (2.0 * (lambda + mu)) + (lambda + mu) / (2.0 * mu * lambda_i);
}

double aoi_multi_source_n3(double lambda_i, double lambda, double mu) {
  require_share(lambda_i, lambda);
  require_positive(mu, "service rate");
  const double rho = lambda / mu;
  const double rho_i = lambda_i / mu;
  // Solution of the four-coordinate age system; reduces to the
  // single-source three-server value when rho_i == rho.
  const double s = 2.0 * (rho + 1.0) * (rho + 1.0);
  return (rho + 1.0) * (s + 5.0 * rho_i) / (rho_i * (s + rho_i)) / (3.0 * mu);
}

double aoi_hetero_n2(double lambda1, double lambda2, double mu1, double mu2) {
  require_non_negative(lambda1, "arrival rate");
  require_non_negative(lambda2, "arrival rate");
  require_positive(lambda1 + lambda2, "total arrival rate");
  require_positive(mu1, "service rate");
  require_positive(mu2, "service rate");
  const double mu = mu1 + mu2;
  const double lam = lambda1 + lambda2;
  return 1.0 / mu + 1.0 / lam +
         (mu1 * lambda2 / (lambda1 + mu2) + mu2 * lambda1 / (lambda2 + mu1)) / (mu * lam);
}

double aoi_hetero_n3(std::span<const double, 3> lambda, std::span<const double, 3> mu) {
  return solve_age(build_heterogeneous_single_source(lambda, mu)).aoi;
}

std::vector<double> closed_form_aoi(const NetworkConfig& config) {
  if (config.discipline != QueueDiscipline::LcfsPreemptService) {
    throw NoClosedForm("no analytic engine for " + std::string(to_string(config.discipline)) +
                       "; use simulate");
  }
  const int n = config.num_servers;
  switch (classify(config)) {
    case HomogeneityClass::HomogeneousSingleSource:
      return {aoi_lcfs_homogeneous(n, config.arrival_rates[0][0], config.service_rates[0])};
    case HomogeneityClass::HomogeneousMultiSource: {
      if (n != 2 && n != 3) {
        throw NoClosedForm("multi-source closed forms exist only for 2 or 3 servers");
      }
      double total = 0.0;
      for (const auto& row : config.arrival_rates) total += row[0];
      std::vector<double> out;
      for (const auto& row : config.arrival_rates) {
        out.push_back(n == 2 ? aoi_multi_source_n2(row[0], total, config.service_rates[0])
                             : aoi_multi_source_n3(row[0], total, config.service_rates[0]));
      }
      return out;
    }
    case HomogeneityClass::HeterogeneousSingleSource: {
      const auto& lam = config.arrival_rates[0];
      const auto& mu = config.service_rates;
      if (n == 2) return {aoi_hetero_n2(lam[0], lam[1], mu[0], mu[1])};
      if (n == 3) {
        return {aoi_hetero_n3(std::span<const double, 3>(lam.data(), 3),
                              std::span<const double, 3>(mu.data(), 3))};
      }
      throw NoClosedForm("heterogeneous closed forms exist only for 2 or 3 servers");
    }
    case HomogeneityClass::General:
      break;
  }
  throw NoClosedForm("no closed form for multi-source heterogeneous networks");
}

}  // namespace aoi
