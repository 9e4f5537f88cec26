#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace aoi::linalg {

/// Row-major square matrix.
class DenseMatrix {
 public:
  explicit DenseMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

  std::size_t size() const { return n_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * n_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * n_ + c]; }

 private:
  std::size_t n_;
  std::vector<double> data_;
};

struct Entry {
  std::size_t row;
  std::size_t col;
  double value;
};

/// Pivot magnitudes below this fraction of the largest initial row norm are
/// treated as singular.
inline constexpr double kSingularRelTol = 1e-13;

/// Gaussian elimination with partial pivoting. nullopt when singular.
std::optional<std::vector<double>> solve_dense(DenseMatrix a, std::vector<double> b);

/// Systems up to this many unknowns go through solve_dense.
inline constexpr std::size_t kDenseLimit = 1500;

/// Solves A x = b with A given as (possibly duplicated, summed) entries.
/// Uses solve_dense below kDenseLimit and a sparse LU factorization above it.
std::optional<std::vector<double>> solve(std::size_t n, std::span<const Entry> entries,
                                         std::span<const double> b);

/// ||A x - b||_inf / (||A||_inf ||x||_inf + ||b||_inf).
double relative_residual(std::size_t n, std::span<const Entry> entries,
                         std::span<const double> x, std::span<const double> b);

}  // namespace aoi::linalg
