#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace aoi {

/// Linear reset x' = x A where every column of A holds at most one 1.
///
/// Stored as "output coordinate k copies input coordinate source(k)", or is
/// zeroed when source(k) == kZero.
class ResetMap {
 public:
  static constexpr int kZero = -1;

  ResetMap() = default;
  static ResetMap identity(std::size_t dim);
  /// From a dense 0/1 matrix in the x' = x A convention. Throws
  /// std::invalid_argument for non-binary entries or a column with two 1s.
  static ResetMap from_matrix(const std::vector<std::vector<int>>& a);

  std::size_t dim() const { return source_.size(); }
  int source(std::size_t out) const { return source_[out]; }
  ResetMap& copy(std::size_t out, std::size_t in) {
    source_.at(out) = static_cast<int>(in);
    return *this;
  }
  ResetMap& zero(std::size_t out) {
    source_.at(out) = kZero;
    return *this;
  }

  std::vector<double> apply(std::span<const double> x) const;
  std::vector<std::vector<int>> matrix() const;

  bool operator==(const ResetMap&) const = default;

 private:
  std::vector<int> source_;
};

struct ShsTransition {
  double rate = 0.0;
  std::size_t from = 0;
  std::size_t to = 0;
  ResetMap reset;
};

/// Discrete states with linear age resets. Coordinate 0 is the monitor.
struct ShsModel {
  std::size_t num_states = 1;
  std::size_t age_dim = 1;
  /// growth[q][k] in {0, 1}: rate at which coordinate k grows in state q.
  std::vector<std::vector<int>> growth;
  std::vector<ShsTransition> transitions;
};

struct ShsSolution {
  std::vector<double> pi;
  /// v[q][k] = E[x_k(t) 1{q(t) = q}] in steady state.
  std::vector<std::vector<double>> v;
  double aoi = 0.0;
  double balance_residual = 0.0;
  double age_residual = 0.0;
};

class InvalidModel : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Reducible chain, or a balance / age system that is singular.
class NonErgodic : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The age system produced a clearly negative correlation entry.
class NegativeSolution : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws InvalidModel on out-of-range indices, non-positive rates or shape errors.
void check_model(const ShsModel& model);

/// Graph reachability in both directions from state 0.
bool is_irreducible(const ShsModel& model);

std::vector<double> stationary_distribution(const ShsModel& model);

ShsSolution solve_age(const ShsModel& model);

/// Max relative residual of the balance equations, evaluated transition by transition.
double balance_residual(const ShsModel& model, std::span<const double> pi);

/// Max relative residual of
///   v_q sum_{out} rate = b_q pi_q + sum_{in} rate v_{from} A_l,
/// evaluated transition by transition.
double age_residual(const ShsModel& model, std::span<const double> pi,
                    const std::vector<std::vector<double>>& v);

/// Relative residual threshold asserted after each linear solve.
inline constexpr double kResidualTol = 1e-10;
inline constexpr double kNegativeTol = 1e-9;

}  // namespace aoi
