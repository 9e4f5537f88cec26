#include "aoi/shs.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "aoi/linalg.hpp"

namespace aoi {

ResetMap ResetMap::identity(std::size_t dim) {
  ResetMap m;
  m.source_.resize(dim);
  for (std::size_t k = 0; k < dim; ++k) m.source_[k] = static_cast<int>(k);
  return m;
}

ResetMap ResetMap::from_matrix(const std::vector<std::vector<int>>& a) {
  const std::size_t dim = a.size();
  ResetMap m;
  m.source_.assign(dim, kZero);
  for (std::size_t r = 0; r < dim; ++r) {
    if (a[r].size() != dim) throw std::invalid_argument("reset matrix must be square");
    for (std::size_t c = 0; c < dim; ++c) {
      if (a[r][c] == 0) continue;
      if (a[r][c] != 1) throw std::invalid_argument("reset matrix entries must be 0 or 1");
      if (m.source_[c] != kZero) {
        throw std::invalid_argument("reset matrix column " + std::to_string(c) +
                                    " copies more than one coordinate");
      }
      m.source_[c] = static_cast<int>(r);
    }
  }
  return m;
}

std::vector<double> ResetMap::apply(std::span<const double> x) const {
  std::vector<double> out(source_.size(), 0.0);
  for (std::size_t k = 0; k < source_.size(); ++k) {
    if (source_[k] != kZero) out[k] = x[source_[k]];
  }
  return out;
}

std::vector<std::vector<int>> ResetMap::matrix() const {
  std::vector<std::vector<int>> a(source_.size(), std::vector<int>(source_.size(), 0));
  for (std::size_t k = 0; k < source_.size(); ++k) {
    if (source_[k] != kZero) a[source_[k]][k] = 1;
  }
  return a;
}

void check_model(const ShsModel& model) {
  if (model.num_states == 0) throw InvalidModel("model needs at least one state");
  if (model.age_dim == 0) throw InvalidModel("model needs at least one age coordinate");
  if (model.growth.size() != model.num_states) {
    throw InvalidModel("growth must have one vector per state");
  }
  for (const auto& b : model.growth) {
    if (b.size() != model.age_dim) throw InvalidModel("growth vector has wrong length");
    for (int g : b) {
      if (g != 0 && g != 1) throw InvalidModel("growth entries must be 0 or 1");
    }
  }
  for (std::size_t l = 0; l < model.transitions.size(); ++l) {
    const auto& t = model.transitions[l];
    if (t.from >= model.num_states || t.to >= model.num_states) {
      throw InvalidModel("transition " + std::to_string(l) + " has a state index out of range");
    }
    if (!std::isfinite(t.rate) || !(t.rate > 0.0)) {
      throw InvalidModel("transition " + std::to_string(l) + " has a non-positive rate");
    }
    if (t.reset.dim() != model.age_dim) {
      throw InvalidModel("transition " + std::to_string(l) + " reset has wrong dimension");
    }
    for (std::size_t k = 0; k < model.age_dim; ++k) {
      int s = t.reset.source(k);
      if (s != ResetMap::kZero && (s < 0 || static_cast<std::size_t>(s) >= model.age_dim)) {
        throw InvalidModel("transition " + std::to_string(l) + " reset source out of range");
      }
    }
  }
}

namespace {

std::size_t count_reachable(const std::vector<std::vector<std::size_t>>& adj) {
  std::vector<char> seen(adj.size(), 0);
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    std::size_t q = stack.back();
    stack.pop_back();
    for (std::size_t next : adj[q]) {
      if (!seen[next]) {
        seen[next] = 1;
        ++count;
        stack.push_back(next);
      }
    }
  }
  return count;
}

}  // namespace

bool is_irreducible(const ShsModel& model) {
  std::vector<std::vector<std::size_t>> fwd(model.num_states), bwd(model.num_states);
  for (const auto& t : model.transitions) {
    fwd[t.from].push_back(t.to);
    bwd[t.to].push_back(t.from);
  }
  return count_reachable(fwd) == model.num_states && count_reachable(bwd) == model.num_states;
}

std::vector<double> stationary_distribution(const ShsModel& model) {
  check_model(model);
  if (!is_irreducible(model)) throw NonErgodic("discrete chain is reducible");
  const std::size_t n = model.num_states;
  if (n == 1) return {1.0};

  // Row q: pi_q * out_rate(q) - sum_in rate * pi_from = 0; row 0 replaced by sum pi = 1.
  std::vector<linalg::Entry> entries;
  entries.reserve(2 * model.transitions.size() + n);
  for (const auto& t : model.transitions) {
    if (t.from == t.to) continue;
    if (t.from != 0) entries.push_back({t.from, t.from, t.rate});
    if (t.to != 0) entries.push_back({t.to, t.from, -t.rate});
  }
  for (std::size_t q = 0; q < n; ++q) entries.push_back({0, q, 1.0});
  std::vector<double> rhs(n, 0.0);
  rhs[0] = 1.0;

  auto pi = linalg::solve(n, entries, rhs);
  if (!pi) throw NonErgodic("balance equations are singular");
  for (double& p : *pi) {
    if (p < 0.0) {
      if (p < -kNegativeTol) throw NonErgodic("stationary distribution has a negative entry");
      p = 0.0;
    }
  }
  double res = balance_residual(model, *pi);
  if (!(res < kResidualTol)) {
    throw NonErgodic("balance residual " + std::to_string(res) + " exceeds tolerance");
  }
  return *pi;
}

ShsSolution solve_age(const ShsModel& model) {
  ShsSolution sol;
  sol.pi = stationary_distribution(model);
  sol.balance_residual = balance_residual(model, sol.pi);

  const std::size_t d = model.age_dim;
  const std::size_t unknowns = model.num_states * d;
  auto index = [d](std::size_t q, std::size_t k) { return q * d + k; };

  // A self-loop that keeps coordinate k contributes rate * v_qk to both sides;
  // it is left out rather than added and subtracted.
  std::vector<double> diag(unknowns, 0.0);
  std::vector<linalg::Entry> entries;
  entries.reserve(unknowns + model.transitions.size() * d);
  for (const auto& t : model.transitions) {
    for (std::size_t k = 0; k < d; ++k) {
      const int s = t.reset.source(k);
      if (t.from == t.to && s == static_cast<int>(k)) continue;
      diag[index(t.from, k)] += t.rate;
      if (s == ResetMap::kZero) continue;
      entries.push_back({index(t.to, k), index(t.from, static_cast<std::size_t>(s)), -t.rate});
    }
  }
  for (std::size_t u = 0; u < unknowns; ++u) entries.push_back({u, u, diag[u]});
  std::vector<double> rhs(unknowns);
  for (std::size_t q = 0; q < model.num_states; ++q) {
    for (std::size_t k = 0; k < d; ++k) rhs[index(q, k)] = model.growth[q][k] * sol.pi[q];
  }

  auto x = linalg::solve(unknowns, entries, rhs);
  if (!x) throw NonErgodic("age correlation system is singular");

  sol.v.assign(model.num_states, std::vector<double>(d));
  for (std::size_t q = 0; q < model.num_states; ++q) {
    for (std::size_t k = 0; k < d; ++k) sol.v[q][k] = (*x)[index(q, k)];
  }
  sol.age_residual = age_residual(model, sol.pi, sol.v);
  if (!(sol.age_residual < kResidualTol)) {
    throw NonErgodic("age residual " + std::to_string(sol.age_residual) + " exceeds tolerance");
  }
  for (auto& vq : sol.v) {
    for (double& e : vq) {
      if (e < -kNegativeTol) {
        throw NegativeSolution("age correlation entry " + std::to_string(e) + " is negative");
      }
      e = std::max(e, 0.0);
    }
  }
  sol.aoi = 0.0;
  for (const auto& vq : sol.v) sol.aoi += vq[0];
  if (!(sol.aoi > 0.0)) throw NegativeSolution("average age is not positive");
  return sol;
}

double balance_residual(const ShsModel& model, std::span<const double> pi) {
  std::vector<double> lhs(model.num_states, 0.0), rhs(model.num_states, 0.0);
  for (const auto& t : model.transitions) {
    lhs[t.from] += t.rate * pi[t.from];
    rhs[t.to] += t.rate * pi[t.from];
  }
  double worst = 0.0, scale = 0.0;
  for (std::size_t q = 0; q < model.num_states; ++q) {
    worst = std::max(worst, std::abs(lhs[q] - rhs[q]));
    scale = std::max(scale, lhs[q] + rhs[q]);
  }
  double sum = 0.0;
  for (double p : pi) sum += p;
  worst = scale > 0.0 ? worst / scale : worst;
  return std::max(worst, std::abs(sum - 1.0));
}

double age_residual(const ShsModel& model, std::span<const double> pi,
                    const std::vector<std::vector<double>>& v) {
  const std::size_t d = model.age_dim;
  std::vector<std::vector<double>> lhs(model.num_states, std::vector<double>(d, 0.0));
  std::vector<std::vector<double>> rhs(model.num_states, std::vector<double>(d, 0.0));
  std::vector<std::vector<double>> mag(model.num_states, std::vector<double>(d, 0.0));
  for (std::size_t q = 0; q < model.num_states; ++q) {
    for (std::size_t k = 0; k < d; ++k) {
      rhs[q][k] = model.growth[q][k] * pi[q];
      mag[q][k] = std::abs(rhs[q][k]);
    }
  }
  for (const auto& t : model.transitions) {
    auto moved = t.reset.apply(v[t.from]);
    for (std::size_t k = 0; k < d; ++k) {
      lhs[t.from][k] += t.rate * v[t.from][k];
      mag[t.from][k] += std::abs(t.rate * v[t.from][k]);
      rhs[t.to][k] += t.rate * moved[k];
      mag[t.to][k] += std::abs(t.rate * moved[k]);
    }
  }
  double worst = 0.0, scale = 0.0;
  for (std::size_t q = 0; q < model.num_states; ++q) {
    for (std::size_t k = 0; k < d; ++k) {
      worst = std::max(worst, std::abs(lhs[q][k] - rhs[q][k]));
      scale = std::max(scale, mag[q][k]);
    }
  }
  return scale > 0.0 ? worst / scale : worst;
}

}  // namespace aoi
