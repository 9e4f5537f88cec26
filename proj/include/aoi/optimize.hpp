#pragma once

#include <functional>
#include <span>
#include <vector>

namespace aoi {

/// Arrival-rate allocation under a fixed budget.
struct SplitResult {
  std::vector<double> rates;
  double objective = 0.0;
  /// Some rate sits exactly at 0 or at the full budget.
  bool boundary = false;
};

/// Minimizes sum_i w_i * AoI_i over source rates summing to `budget` on two
/// homogeneous servers: rates proportional to sqrt(w_i).
SplitResult optimal_weighted_split(std::span<const double> weights, double budget, double mu);

/// Weighted objective used by optimal_weighted_split, for arbitrary rates.
double weighted_objective(std::span<const double> weights, std::span<const double> rates,
                          double mu);

/// Best (lambda1, lambda2) with lambda1 + lambda2 = budget for one source on
/// two heterogeneous servers.
SplitResult optimal_hetero_split_n2(double budget, double mu1, double mu2);

struct MinimizeResult {
  double argmin = 0.0;
  double min = 0.0;
};

/// Coarse grid scan over [lo, hi] followed by golden-section refinement of
/// the best bracket down to width tol. Throws std::domain_error when the
/// objective returns a non-finite value.
MinimizeResult grid_minimize(const std::function<double(double)>& objective, double lo,
                             double hi, double tol, int grid_points = 201);

}  // namespace aoi
