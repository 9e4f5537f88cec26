#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "aoi/model.hpp"

namespace aoi {

/// Raised when no closed form covers a configuration.
class NoClosedForm : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Single source, n homogeneous LCFS-S servers, per-server rate lambda.
double aoi_lcfs_homogeneous(int servers, double lambda, double mu);

/// Source with own per-server rate lambda_i among sources whose per-server
/// rates sum to lambda, on two homogeneous servers.
double aoi_multi_source_n2(double lambda_i, double lambda, double mu);

/// Same as aoi_multi_source_n2 for three servers.
double aoi_multi_source_n3(double lambda_i, double lambda, double mu);

/// Single source over two heterogeneous servers.
double aoi_hetero_n2(double lambda1, double lambda2, double mu1, double mu2);

/// Single source over three heterogeneous servers; solved through the
/// six-state permutation model.
double aoi_hetero_n3(std::span<const double, 3> lambda, std::span<const double, 3> mu);

/// Closed-form AoI per source when a formula covers the config; throws
/// NoClosedForm otherwise.
std::vector<double> closed_form_aoi(const NetworkConfig& config);

}  // namespace aoi
