#pragma once

#include <string>
#include <vector>

#include "aoi/model.hpp"
#include "aoi/optimize.hpp"
#include "aoi/sim.hpp"
#include "aoi/sweep.hpp"

namespace aoi::cli {

enum class Format { Text, Csv, Json };
Format parse_format(const std::string& name);

struct EngineValue {
  std::string engine;
  int source = 1;
  double aoi = 0.0;
};

struct AnalyticReport {
  HomogeneityClass cls = HomogeneityClass::General;
  std::vector<EngineValue> values;
  /// Largest |a - b| / b over engine pairs for the same source.
  double max_rel_disagreement = 0.0;
};

/// Every applicable closed form and SHS value. Throws std::invalid_argument
/// ("no analytic engine; use simulate") when none applies.
AnalyticReport cmd_analytic(const NetworkConfig& config);
std::string render(const AnalyticReport& report, Format format);

std::string render(const SimResult& result, Format format);

/// Runs the sweep and writes it to `out` (stdout when empty).
SweepResult cmd_sweep(const SweepSpec& spec, const std::string& out, Format format,
                      unsigned threads);

enum class OptimizeKind { Weighted, HeteroN2 };

struct OptimizeRequest {
  OptimizeKind kind = OptimizeKind::Weighted;
  std::vector<double> weights;
  double budget = 1.0;
  double mu = 1.0;
  double mu1 = 1.0;
  double mu2 = 1.0;
};

struct OptimizeReport {
  OptimizeKind kind = OptimizeKind::Weighted;
  SplitResult split;
  /// Numerical minimizer of the same objective.
  std::vector<double> oracle_rates;
  double oracle_objective = 0.0;
  double max_rate_delta = 0.0;
  double objective_delta = 0.0;
};

OptimizeReport cmd_optimize(const OptimizeRequest& request);
std::string render(const OptimizeReport& report, Format format);

}  // namespace aoi::cli
