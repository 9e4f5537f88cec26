#include "aoi/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "aoi/analytic.hpp"

namespace aoi {

double weighted_objective(std::span<const double> weights, std::span<const double> rates,
                          double mu) {
  double budget = 0.0;
  for (double r : rates) budget += r;
  double total = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    total += weights[i] * aoi_multi_source_n2(rates[i], budget, mu);
  }
  return total;
}

SplitResult optimal_weighted_split(std::span<const double> weights, double budget, double mu) {
  if (weights.empty()) throw std::invalid_argument("need at least one weight");
  if (!(budget > 0.0) || !std::isfinite(budget)) {
    throw std::invalid_argument("budget must be positive");
  }
  if (!(mu > 0.0) || !std::isfinite(mu)) throw std::invalid_argument("mu must be positive");
  double root_sum = 0.0;
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("weights must be positive");
    }
    root_sum += std::sqrt(w);
  }
  SplitResult out;
  for (double w : weights) out.rates.push_back(budget * std::sqrt(w) / root_sum);
  out.objective = weighted_objective(weights, out.rates, mu);
  out.boundary = weights.size() == 1;
  return out;
}

namespace {

// Optimal lambda1 when mu1 < mu2 (c < 1).
double slower_first_share(double budget, double mu1, double mu2) {
  const double c = mu1 * (budget + mu2) / (mu2 * (budget + mu1));
  const double product_sign = mu2 * mu2 - c * (budget + mu1) * (budget + mu1);
  if (product_sign >= 0.0) return 0.0;
  const double b = mu2 + c * (budget + mu1);
  const double root = std::sqrt(mu1 * (budget + mu2) *
                                (2.0 + mu2 / (budget + mu1) + (budget + mu1) / mu2));
  return (-b + root) / (1.0 - c);
}

}  // namespace

SplitResult optimal_hetero_split_n2(double budget, double mu1, double mu2) {
  if (!(budget > 0.0) || !std::isfinite(budget)) {
    throw std::invalid_argument("budget must be positive");
  }
  if (!(mu1 > 0.0) || !(mu2 > 0.0) || !std::isfinite(mu1) || !std::isfinite(mu2)) {
    throw std::invalid_argument("service rates must be positive");
  }
  const double c = mu1 * (budget + mu2) / (mu2 * (budget + mu1));
  double lambda1;
  if (std::abs(1.0 - c) < 1e-9) {
    lambda1 = budget / 2.0;
  } else if (mu1 < mu2) {
    lambda1 = slower_first_share(budget, mu1, mu2);
  } else {
    lambda1 = budget - slower_first_share(budget, mu2, mu1);
  }
  lambda1 = std::min(std::max(lambda1, 0.0), budget);

  SplitResult out;
  out.rates = {lambda1, budget - lambda1};
  out.objective = aoi_hetero_n2(out.rates[0], out.rates[1], mu1, mu2);
  out.boundary = lambda1 == 0.0 || lambda1 == budget;
  return out;
}

MinimizeResult grid_minimize(const std::function<double(double)>& objective, double lo,
                             double hi, double tol, int grid_points) {
  if (!(lo < hi)) throw std::invalid_argument("grid_minimize needs lo < hi");
  if (!(tol > 0.0)) throw std::invalid_argument("grid_minimize needs tol > 0");
  if (grid_points < 3) grid_points = 3;
  auto eval = [&](double x) {
    double f = objective(x);
    if (!std::isfinite(f)) throw std::domain_error("objective is not finite");
    return f;
  };

  const double step = (hi - lo) / (grid_points - 1);
  int best = 0;
  double best_f = eval(lo);
  for (int k = 1; k < grid_points; ++k) {
    double x = k == grid_points - 1 ? hi : lo + k * step;
    double f = eval(x);
    if (f < best_f) {
      best_f = f;
      best = k;
    }
  }
  double a = best == 0 ? lo : lo + (best - 1) * step;
  double b = best == grid_points - 1 ? hi : lo + (best + 1) * step;

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = eval(c), fd = eval(d);
  for (int iter = 0; b - a > tol && iter < 400; ++iter) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = eval(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = eval(d);
    }
  }

  MinimizeResult out{0.5 * (a + b), 0.0};
  out.min = eval(out.argmin);
  // Keep bracket endpoints in play so monotone objectives land on the boundary.
  for (double x : {a, b}) {
    double f = eval(x);
    if (f < out.min) out = {x, f};
  }
  if (best_f < out.min) out = {lo + best * step, best_f};
  return out;
}

}  // namespace aoi
