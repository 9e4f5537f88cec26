#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aoi/model.hpp"

namespace aoi {

inline constexpr std::string_view kToolVersion = "0.1.0";

enum class Engine { Analytic, Shs, Sim, Optimize };

/// What a sweep axis changes in the base config.
///  - Servers: server count; per-server rates and the first service rate are kept.
///  - PerServerArrival: every server receives `value` in total, split over
///    sources in the base proportions.
///  - TotalArrival: all arrival rates scaled so they sum to `value`.
///  - Mu1Share: two servers only; mu1 = value * (mu1 + mu2), mu2 gets the rest.
///  - TrackedSourceRate: source 1 arrives at every server at rate `value`.
enum class SweepParameter { Servers, PerServerArrival, TotalArrival, Mu1Share, TrackedSourceRate };

std::string_view to_string(Engine engine);
std::string_view to_string(SweepParameter parameter);
Engine parse_engine(std::string_view name);
SweepParameter parse_sweep_parameter(std::string_view name);

struct SweepAxis {
  SweepParameter parameter = SweepParameter::TotalArrival;
  std::vector<double> values;
};

struct SimSettings {
  double horizon = 1e5;
  /// Defaults to 1% of the horizon.
  std::optional<double> warmup;
  std::uint64_t seed = 1;
  int batches = 32;
  int replications = 1;
};

struct SweepSpec {
  NetworkConfig base;
  SweepAxis axis;
  /// Optional outer axis; each series value gets a full pass over `axis`.
  std::optional<SweepAxis> series;
  std::vector<Engine> engines;
  SimSettings sim;
};

struct SweepRow {
  std::optional<double> series;
  double param = 0.0;
  std::string engine;
  int source = 1;
  std::optional<double> aoi;
  std::optional<double> ci_half_width;
  std::string error;
};

struct SweepMetadata {
  std::uint64_t seed = 0;
  double horizon = 0.0;
  int replications = 1;
  std::string parameter;
  std::string series_parameter;
  std::string tool_version;
  /// UTC wall-clock time of the run; JSON output only.
  std::string timestamp;
};

struct SweepResult {
  bool has_series = false;
  std::vector<SweepRow> rows;
  SweepMetadata meta;

  bool ok() const;
};

/// Recipe document: the config schema plus
///   "sweep": {"parameter", "values", "engines", optional "series": {...},
///             optional "sim": {"horizon", "warmup", "seed", "batches", "replications"}}.
SweepSpec load_sweep_spec(std::string_view text);
SweepSpec load_sweep_spec_file(const std::string& path);

/// Throws ConfigError for an empty or non-increasing grid, no engines, or a
/// grid point that yields an invalid config.
void validate_sweep_spec(const SweepSpec& spec);

NetworkConfig apply_parameter(const NetworkConfig& base, SweepParameter parameter, double value);

/// Config at one grid point: servers is applied before any rate parameter.
NetworkConfig sweep_point(const SweepSpec& spec, std::optional<double> series, double value);

/// Rows ordered by (series, value, engine order, source) irrespective of
/// which worker finished first.
SweepResult run_sweep(const SweepSpec& spec, unsigned threads);

/// Header `param,engine,source,aoi,ci_half_width,error`, prefixed with
/// `series,` when the spec has a series axis.
std::string sweep_to_csv(const SweepResult& result);
std::string sweep_to_json(const SweepResult& result);

/// 12 significant digits, shortest form ("%.12g").
std::string format_real(double value);

}  // namespace aoi
