#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "aoi/model.hpp"
#include "aoi/shs.hpp"

namespace aoi {

/// Single state, coordinates sorted freshest-first over n virtual servers.
/// Transitions 0..n-1 are arrivals (rate lambda) at virtual server l+1,
/// transitions n..2n-1 are deliveries (rate mu) from virtual server l+1-n
/// with fake update and fake preemption of every staler server.
ShsModel build_single_source_homogeneous(int servers, double lambda, double mu);

/// Tracks `tracked_source` (0-based) among per_source.size() sources.
/// Adds n transitions at the combined rate of the other sources: an update
/// from another source at virtual server l' drops that server's tracked
/// age and moves it to the stalest slot carrying the monitor's age.
/// Those transitions are omitted when the other sources have zero rate.
ShsModel build_multi_source_homogeneous(int servers, std::size_t tracked_source,
                                        std::span<const double> per_source, double mu);

/// Maximum server count accepted by the permutation-state builder.
inline constexpr int kMaxHeterogeneousServers = 8;

/// One state per freshness order of the physical servers (lexicographic
/// rank of the permutation, freshest first). Coordinate j+1 is server j.
/// Zero-rate arrival transitions are dropped.
ShsModel build_heterogeneous_single_source(std::span<const double> lambda,
                                           std::span<const double> mu);

/// The permutation of {0..n-1} with the given lexicographic rank.
std::vector<int> permutation_from_rank(std::size_t rank, int n);
std::size_t permutation_rank(std::span<const int> perm);

/// SHS average age per source for the config, routed by homogeneity class.
/// Throws std::invalid_argument when no SHS model covers the config.
std::vector<double> shs_aoi(const NetworkConfig& config);

}  // namespace aoi
