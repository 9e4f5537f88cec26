#include "aoi/builders.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace aoi {

namespace {

void require_positive(double v, const char* what) {
  if (!std::isfinite(v) || !(v > 0.0)) {
    throw std::invalid_argument(std::string(what) + " must be positive and finite");
  }
}

void require_servers(int n) {
  if (n < 1) throw std::invalid_argument("server count must be at least 1");
}

ShsModel single_state(int servers) {
  ShsModel m;
  m.num_states = 1;
  m.age_dim = static_cast<std::size_t>(servers) + 1;
  m.growth.assign(1, std::vector<int>(m.age_dim, 1));
  return m;
}

// Fresh arrival at virtual server `slot` (1-based): it becomes server 1 and
// servers 1..slot-1 shift one place staler.
ResetMap arrival_at_virtual(std::size_t dim, std::size_t slot) {
  ResetMap r = ResetMap::identity(dim);
  r.zero(1);
  for (std::size_t k = 2; k <= slot; ++k) r.copy(k, k - 1);
  return r;
}

// Delivery from virtual server `slot`: monitor takes its age and every
// server at that slot or staler is overwritten with it.
ResetMap delivery_from_virtual(std::size_t dim, std::size_t slot) {
  ResetMap r = ResetMap::identity(dim);
  r.copy(0, slot);
  for (std::size_t k = slot; k < dim; ++k) r.copy(k, slot);
  return r;
}

// Another source's update lands at virtual server `slot`: subsequent servers
// shift one place fresher and the last slot holds the monitor's age.
ResetMap foreign_arrival_at_virtual(std::size_t dim, std::size_t slot) {
  ResetMap r = ResetMap::identity(dim);
  for (std::size_t k = slot; k + 1 < dim; ++k) r.copy(k, k + 1);
  r.copy(dim - 1, 0);
  return r;
}

}  // namespace

ShsModel build_single_source_homogeneous(int servers, double lambda, double mu) {
  require_servers(servers);
  require_positive(lambda, "arrival rate");
  require_positive(mu, "service rate");
  ShsModel m = single_state(servers);
  const std::size_t n = static_cast<std::size_t>(servers);
  for (std::size_t l = 0; l < n; ++l) {
    m.transitions.push_back({lambda, 0, 0, arrival_at_virtual(m.age_dim, l + 1)});
  }
  for (std::size_t l = 0; l < n; ++l) {
    m.transitions.push_back({mu, 0, 0, delivery_from_virtual(m.age_dim, l + 1)});
  }
  return m;
}

ShsModel build_multi_source_homogeneous(int servers, std::size_t tracked_source,
                                        std::span<const double> per_source, double mu) {
  require_servers(servers);
  require_positive(mu, "service rate");
  if (per_source.empty()) throw std::invalid_argument("need at least one source");
  if (tracked_source >= per_source.size()) {
    throw std::invalid_argument("tracked source index out of range");
  }
  double others = 0.0;
  for (std::size_t i = 0; i < per_source.size(); ++i) {
    if (!std::isfinite(per_source[i]) || per_source[i] < 0.0) {
      throw std::invalid_argument("per-source arrival rates must be non-negative");
    }
    if (i != tracked_source) others += per_source[i];
  }
  const double own = per_source[tracked_source];
  require_positive(own, "tracked source arrival rate");

  ShsModel m = single_state(servers);
  const std::size_t n = static_cast<std::size_t>(servers);
  for (std::size_t l = 0; l < n; ++l) {
    m.transitions.push_back({own, 0, 0, arrival_at_virtual(m.age_dim, l + 1)});
  }
  if (others > 0.0) {
    for (std::size_t l = 0; l < n; ++l) {
      m.transitions.push_back({others, 0, 0, foreign_arrival_at_virtual(m.age_dim, l + 1)});
    }
  }
  for (std::size_t l = 0; l < n; ++l) {
    m.transitions.push_back({mu, 0, 0, delivery_from_virtual(m.age_dim, l + 1)});
  }
  return m;
}

std::vector<int> permutation_from_rank(std::size_t rank, int n) {
  std::vector<int> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  std::vector<std::size_t> fact(n + 1, 1);
  for (int k = 1; k <= n; ++k) fact[k] = fact[k - 1] * k;
  std::vector<int> perm;
  perm.reserve(n);
  for (int k = n; k >= 1; --k) {
    std::size_t pick = rank / fact[k - 1];
    rank %= fact[k - 1];
    perm.push_back(pool[pick]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  return perm;
}

std::size_t permutation_rank(std::span<const int> perm) {
  const std::size_t n = perm.size();
  std::size_t rank = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t smaller = 0;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (perm[j] < perm[i]) ++smaller;
    }
    rank = rank * (n - i) + smaller;
  }
  return rank;
}

ShsModel build_heterogeneous_single_source(std::span<const double> lambda,
                                           std::span<const double> mu) {
  if (lambda.size() != mu.size()) {
    throw std::invalid_argument("arrival and service rate vectors differ in length");
  }
  const int n = static_cast<int>(lambda.size());
  require_servers(n);
  if (n > kMaxHeterogeneousServers) {
    throw std::invalid_argument("heterogeneous builder supports at most " +
                                std::to_string(kMaxHeterogeneousServers) + " servers");
  }
  double total = 0.0;
  for (int j = 0; j < n; ++j) {
    if (!std::isfinite(lambda[j]) || lambda[j] < 0.0) {
      throw std::invalid_argument("arrival rates must be non-negative");
    }
    require_positive(mu[j], "service rate");
    total += lambda[j];
  }
  require_positive(total, "total arrival rate");

  std::size_t states = 1;
  for (int k = 2; k <= n; ++k) states *= static_cast<std::size_t>(k);

  ShsModel m;
  m.num_states = states;
  m.age_dim = static_cast<std::size_t>(n) + 1;
  m.growth.assign(states, std::vector<int>(m.age_dim, 1));
  m.transitions.reserve(states * 2 * static_cast<std::size_t>(n));

  std::vector<std::vector<int>> perms(states);
  for (std::size_t q = 0; q < states; ++q) perms[q] = permutation_from_rank(q, n);

  for (int j = 0; j < n; ++j) {
    if (lambda[j] == 0.0) continue;
    ResetMap reset = ResetMap::identity(m.age_dim);
    reset.zero(static_cast<std::size_t>(j) + 1);
    for (std::size_t q = 0; q < states; ++q) {
      std::vector<int> next{j};
      for (int s : perms[q]) {
        if (s != j) next.push_back(s);
      }
      m.transitions.push_back({lambda[j], q, permutation_rank(next), reset});
    }
  }
  for (int j = 0; j < n; ++j) {
    for (std::size_t q = 0; q < states; ++q) {
      const auto& order = perms[q];
      const std::size_t src = static_cast<std::size_t>(j) + 1;
      ResetMap reset = ResetMap::identity(m.age_dim);
      reset.copy(0, src);
      bool staler = false;
      for (int s : order) {
        if (s == j) staler = true;
        if (staler) reset.copy(static_cast<std::size_t>(s) + 1, src);
      }
      m.transitions.push_back({mu[j], q, q, reset});
    }
  }
  return m;
}

std::vector<double> shs_aoi(const NetworkConfig& config) {
  if (config.discipline != QueueDiscipline::LcfsPreemptService) {
    throw std::invalid_argument("SHS models cover only the lcfs-s discipline");
  }
  switch (classify(config)) {
    case HomogeneityClass::HomogeneousSingleSource:
      return {solve_age(build_single_source_homogeneous(
                            config.num_servers, config.arrival_rates[0][0],
                            config.service_rates[0]))
                  .aoi};
    case HomogeneityClass::HomogeneousMultiSource: {
      std::vector<double> per_source;
      for (const auto& row : config.arrival_rates) per_source.push_back(row[0]);
      std::vector<double> out;
      for (std::size_t i = 0; i < per_source.size(); ++i) {
        out.push_back(solve_age(build_multi_source_homogeneous(
                                    config.num_servers, i, per_source, config.service_rates[0]))
                          .aoi);
      }
      return out;
    }
    case HomogeneityClass::HeterogeneousSingleSource:
      return {solve_age(build_heterogeneous_single_source(config.arrival_rates[0],
                                                          config.service_rates))
                  .aoi};
    case HomogeneityClass::General:
      break;
  }
  throw std::invalid_argument("no SHS model for multi-source heterogeneous networks");
}

}  // namespace aoi
