#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "aoi/model.hpp"

namespace aoi {

class SimulationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SimParams {
  NetworkConfig config;
  double horizon = 1e5;
  double warmup = 1e3;
  std::uint64_t seed = 1;
  int batches = 32;
};

/// Warmup at 1% of the horizon, 32 batches.
SimParams default_sim_params(NetworkConfig config, double horizon, std::uint64_t seed = 1);

/// Statistics over the window (warmup, horizon].
struct SimResult {
  std::vector<double> aoi;
  /// 95% half-width: batch means for a single run, across replications otherwise.
  std::vector<double> ci_half_width;
  /// Integral of the age over the window, per source.
  std::vector<double> integrated_age;
  std::uint64_t deliveries = 0;
  std::uint64_t useful_deliveries = 0;
  std::uint64_t discarded_stale = 0;
  std::uint64_t events = 0;
  double horizon = 0.0;
  double warmup = 0.0;
  std::uint64_t seed = 0;
  int replications = 1;
};

enum class EventKind { Arrival, Completion };

/// Called once per processed event with its timestamp.
using EventObserver = std::function<void(double time, EventKind kind)>;

/// Throws SimulationError for invalid configs, warmup >= horizon, or an
/// FCFS config with some server load >= its service rate.
void check_sim_params(const SimParams& params);

SimResult simulate(const SimParams& params, const EventObserver& observer = {});

/// Runs seeds seed, seed+1, ..., seed+replications-1 and pools the per-run
/// means. With one replication this is simulate(params).
SimResult replicate(const SimParams& params, int replications, unsigned threads = 1);

/// Two-sided 95% Student-t quantile with `dof` degrees of freedom.
double t_quantile_975(int dof);

}  // namespace aoi
