#include "aoi/linalg.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

namespace aoi::linalg {

namespace {

constexpr int kRefinementSteps = 4;

// b - A x with the products accumulated in extended precision.
std::vector<double> residual(const DenseMatrix& a, const std::vector<double>& b,
                             const std::vector<double>& x) {
  const std::size_t n = a.size();
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) {
    long double s = b[i];
    for (std::size_t c = 0; c < n; ++c) {
      s -= static_cast<long double>(a(i, c)) * static_cast<long double>(x[c]);
    }
    r[i] = static_cast<double>(s);
  }
  return r;
}

// Refines x until the correction stops shrinking or falls below rounding level.
template <class Solve, class Residual>
void refine(std::vector<double>& x, Solve&& solve, Residual&& resid) {
  double prev = INFINITY;
  for (int step = 0; step < kRefinementSteps; ++step) {
    std::vector<double> d = solve(resid(x));
    double dmax = 0.0, xmax = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      dmax = std::max(dmax, std::abs(d[k]));
      xmax = std::max(xmax, std::abs(x[k]));
    }
    if (!std::isfinite(dmax) || dmax >= prev) break;
    for (std::size_t k = 0; k < x.size(); ++k) x[k] += d[k];
    prev = dmax;
    if (dmax <= 1e-17 * xmax) break;
  }
}

}  // namespace

std::optional<std::vector<double>> solve_dense(DenseMatrix a, std::vector<double> b) {
  const std::size_t n = a.size();
  const DenseMatrix original = a;
  double max_row = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < n; ++c) s += std::abs(a(r, c));
    max_row = std::max(max_row, s);
  }
  const double threshold = kSingularRelTol * max_row;

  // LU with partial pivoting; multipliers kept below the diagonal
  std::vector<std::size_t> perm(n);
  for (std::size_t k = 0; k < n; ++k) perm[k] = k;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    for (std::size_t r = k + 1; r < n; ++r) {
      if (std::abs(a(r, k)) > std::abs(a(pivot, k))) pivot = r;
    }
    if (!(std::abs(a(pivot, k)) >= threshold) || a(pivot, k) == 0.0) return std::nullopt;
    if (pivot != k) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a(k, c), a(pivot, c));
      std::swap(perm[k], perm[pivot]);
    }
    const double inv = 1.0 / a(k, k);
    for (std::size_t r = k + 1; r < n; ++r) {
      const double f = a(r, k) * inv;
      a(r, k) = f;
      if (f == 0.0) continue;
      for (std::size_t c = k + 1; c < n; ++c) a(r, c) -= f * a(k, c);
    }
  }

  auto lu_solve = [&](const std::vector<double>& rhs) {
    std::vector<double> y(n);
    for (std::size_t k = 0; k < n; ++k) {
      double s = rhs[perm[k]];
      for (std::size_t c = 0; c < k; ++c) s -= a(k, c) * y[c];
      y[k] = s;
    }
    for (std::size_t k = n; k-- > 0;) {
      double s = y[k];
      for (std::size_t c = k + 1; c < n; ++c) s -= a(k, c) * y[c];
      y[k] = s / a(k, k);
    }
    return y;
  };

  std::vector<double> x = lu_solve(b);
  refine(x, lu_solve, [&](const std::vector<double>& v) { return residual(original, b, v); });
  return x;
}

namespace {

std::optional<std::vector<double>> solve_sparse(std::size_t n, std::span<const Entry> entries,
                                                std::span<const double> b) {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(entries.size());
  for (const auto& e : entries) {
    triplets.emplace_back(static_cast<int>(e.row), static_cast<int>(e.col), e.value);
  }
  Eigen::SparseMatrix<double> a(static_cast<int>(n), static_cast<int>(n));
  a.setFromTriplets(triplets.begin(), triplets.end());
  a.makeCompressed();

  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(a);
  if (lu.info() != Eigen::Success) return std::nullopt;
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) rhs[static_cast<Eigen::Index>(k)] = b[k];
  Eigen::VectorXd x0 = lu.solve(rhs);
  if (lu.info() != Eigen::Success || !x0.allFinite()) return std::nullopt;
  std::vector<double> x(x0.data(), x0.data() + x0.size());

  auto sparse_solve = [&](const std::vector<double>& r) {
    Eigen::VectorXd v = lu.solve(Eigen::Map<const Eigen::VectorXd>(r.data(), r.size()));
    return std::vector<double>(v.data(), v.data() + v.size());
  };
  auto sparse_residual = [&](const std::vector<double>& v) {
    std::vector<long double> acc(b.begin(), b.end());
    for (const auto& e : entries) {
      acc[e.row] -= static_cast<long double>(e.value) * static_cast<long double>(v[e.col]);
    }
    return std::vector<double>(acc.begin(), acc.end());
  };
  refine(x, sparse_solve, sparse_residual);
  return x;
}

}  // namespace

std::optional<std::vector<double>> solve(std::size_t n, std::span<const Entry> entries,
                                         std::span<const double> b) {
  if (n > kDenseLimit) return solve_sparse(n, entries, b);
  DenseMatrix a(n);
  for (const auto& e : entries) a(e.row, e.col) += e.value;
  return solve_dense(std::move(a), std::vector<double>(b.begin(), b.end()));
}

double relative_residual(std::size_t n, std::span<const Entry> entries,
                         std::span<const double> x, std::span<const double> b) {
  std::vector<double> r(b.begin(), b.end());
  std::vector<double> row_norm(n, 0.0);
  for (auto& v : r) v = -v;
  for (const auto& e : entries) {
    r[e.row] += e.value * x[e.col];
    row_norm[e.row] += std::abs(e.value);
  }
  double rmax = 0.0, amax = 0.0, xmax = 0.0, bmax = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    rmax = std::max(rmax, std::abs(r[k]));
    amax = std::max(amax, row_norm[k]);
    xmax = std::max(xmax, std::abs(x[k]));
    bmax = std::max(bmax, std::abs(b[k]));
  }
  const double scale = amax * xmax + bmax;
  return scale > 0.0 ? rmax / scale : rmax;
}

}  // namespace aoi::linalg
