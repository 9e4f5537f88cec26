#include "aoi/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "aoi/analytic.hpp"
#include "aoi/builders.hpp"

namespace aoi::cli {

using nlohmann::ordered_json;

Format parse_format(const std::string& name) {
  if (name == "text") return Format::Text;
  if (name == "csv") return Format::Csv;
  if (name == "json") return Format::Json;
  throw std::invalid_argument("unknown format '" + name + "' (expected text, csv or json)");
}

AnalyticReport cmd_analytic(const NetworkConfig& config) {
  auto problems = validate(config);
  if (!problems.empty()) throw std::invalid_argument("invalid config: " + problems.front());
  if (config.discipline != QueueDiscipline::LcfsPreemptService) {
    throw std::invalid_argument("no analytic engine for " +
                                std::string(to_string(config.discipline)) + "; use simulate");
  }
  AnalyticReport report;
  report.cls = classify(config);

  std::vector<double> closed, shs;
  std::string closed_err, shs_err;
  try {
    closed = closed_form_aoi(config);
  } catch (const std::exception& e) {
    closed_err = e.what();
  }
  try {
    shs = shs_aoi(config);
  } catch (const std::exception& e) {
    shs_err = e.what();
  }
  if (closed.empty() && shs.empty()) {
    throw std::invalid_argument("no analytic engine; use simulate (" + closed_err + "; " +
                                shs_err + ")");
  }
  for (std::size_t i = 0; i < closed.size(); ++i) {
    report.values.push_back({"closed-form", static_cast<int>(i) + 1, closed[i]});
  }
  for (std::size_t i = 0; i < shs.size(); ++i) {
    report.values.push_back({"shs", static_cast<int>(i) + 1, shs[i]});
  }
  if (!closed.empty() && !shs.empty()) {
    for (std::size_t i = 0; i < closed.size(); ++i) {
      report.max_rel_disagreement =
          std::max(report.max_rel_disagreement, std::abs(closed[i] - shs[i]) / shs[i]);
    }
  }
  return report;
}

std::string render(const AnalyticReport& report, Format format) {
  if (format == Format::Json) {
    ordered_json doc;
    doc["class"] = std::string(to_string(report.cls));
    ordered_json values = ordered_json::array();
    for (const auto& v : report.values) {
      values.push_back({{"engine", v.engine}, {"source", v.source}, {"aoi", v.aoi}});
    }
    doc["values"] = std::move(values);
    doc["max_rel_disagreement"] = report.max_rel_disagreement;
    return doc.dump(2) + "\n";
  }
  std::ostringstream out;
  if (format == Format::Csv) {
    out << "engine,source,aoi\n";
    for (const auto& v : report.values) {
      out << v.engine << "," << v.source << "," << format_real(v.aoi) << "\n";
    }
    return out.str();
  }
  out << "class: " << to_string(report.cls) << "\n";
  for (const auto& v : report.values) {
    out << "  " << v.engine << "  source " << v.source << "  aoi " << format_real(v.aoi) << "\n";
  }
  out << "max relative disagreement: " << format_real(report.max_rel_disagreement) << "\n";
  return out.str();
}

std::string render(const SimResult& r, Format format) {
  if (format == Format::Json) {
    ordered_json doc;
    doc["seed"] = r.seed;
    doc["horizon"] = r.horizon;
    doc["warmup"] = r.warmup;
    doc["replications"] = r.replications;
    doc["aoi"] = r.aoi;
    ordered_json ci = ordered_json::array();
    for (double h : r.ci_half_width) {
      ci.push_back(std::isfinite(h) ? ordered_json(h) : ordered_json(nullptr));
    }
    doc["ci_half_width"] = std::move(ci);
    doc["deliveries"] = r.deliveries;
    doc["useful_deliveries"] = r.useful_deliveries;
    doc["discarded_stale"] = r.discarded_stale;
    doc["events"] = r.events;
    return doc.dump(2) + "\n";
  }
  std::ostringstream out;
  if (format == Format::Csv) {
    out << "source,aoi,ci_half_width\n";
    for (std::size_t i = 0; i < r.aoi.size(); ++i) {
      out << i + 1 << "," << format_real(r.aoi[i]) << "," << format_real(r.ci_half_width[i])
          << "\n";
    }
    return out.str();
  }
  out << "horizon " << format_real(r.horizon) << ", warmup " << format_real(r.warmup)
      << ", seed " << r.seed << ", replications " << r.replications << "\n";
  for (std::size_t i = 0; i < r.aoi.size(); ++i) {
    out << "  source " << i + 1 << "  aoi " << format_real(r.aoi[i]) << " +/- "
        << format_real(r.ci_half_width[i]) << "\n";
  }
  out << "deliveries " << r.deliveries << ", useful " << r.useful_deliveries << ", stale "
      << r.discarded_stale << ", events " << r.events << "\n";
  return out.str();
}

SweepResult cmd_sweep(const SweepSpec& spec, const std::string& out, Format format,
                      unsigned threads) {
  SweepResult result = run_sweep(spec, threads);
  const std::string text = format == Format::Json ? sweep_to_json(result) : sweep_to_csv(result);
  if (out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + out + "'");
    f << text;
    if (!f) throw std::runtime_error("failed writing '" + out + "'");
  }
  return result;
}

namespace {

// Pairwise coordinate descent over the simplex, each pair refined by grid_minimize.
std::vector<double> weighted_oracle(const std::vector<double>& weights, double budget,
                                    double mu) {
  const std::size_t m = weights.size();
  std::vector<double> rates(m, budget / static_cast<double>(m));
  if (m == 1) return rates;
  const int passes = m == 2 ? 1 : 40;
  for (int pass = 0; pass < passes; ++pass) {
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        const double pair = rates[i] + rates[j];
        auto f = [&](double x) {
          std::vector<double> r = rates;
          r[i] = x;
          r[j] = pair - x;
          return weighted_objective(weights, r, mu);
        };
        auto best = grid_minimize(f, pair * 1e-9, pair * (1.0 - 1e-9), budget * 1e-12);
        rates[i] = best.argmin;
        rates[j] = pair - best.argmin;
      }
    }
  }
  return rates;
}

}  // namespace

OptimizeReport cmd_optimize(const OptimizeRequest& request) {
  OptimizeReport report;
  report.kind = request.kind;
  if (request.kind == OptimizeKind::Weighted) {
    report.split = optimal_weighted_split(request.weights, request.budget, request.mu);
    report.oracle_rates = weighted_oracle(request.weights, request.budget, request.mu);
    report.oracle_objective = weighted_objective(request.weights, report.oracle_rates, request.mu);
  } else {
    report.split = optimal_hetero_split_n2(request.budget, request.mu1, request.mu2);
    auto f = [&](double x) {
      return aoi_hetero_n2(x, request.budget - x, request.mu1, request.mu2);
    };
    auto best = grid_minimize(f, 0.0, request.budget, request.budget * 1e-12);
    report.oracle_rates = {best.argmin, request.budget - best.argmin};
    report.oracle_objective = best.min;
  }
  for (std::size_t i = 0; i < report.split.rates.size(); ++i) {
    report.max_rate_delta = std::max(report.max_rate_delta,
                                     std::abs(report.split.rates[i] - report.oracle_rates[i]));
  }
  report.objective_delta = report.split.objective - report.oracle_objective;
  return report;
}

std::string render(const OptimizeReport& r, Format format) {
  const char* kind = r.kind == OptimizeKind::Weighted ? "weighted" : "hetero-n2";
  if (format == Format::Json) {
    ordered_json doc;
    doc["kind"] = kind;
    doc["rates"] = r.split.rates;
    doc["objective"] = r.split.objective;
    doc["boundary"] = r.split.boundary;
    doc["oracle_rates"] = r.oracle_rates;
    doc["oracle_objective"] = r.oracle_objective;
    doc["max_rate_delta"] = r.max_rate_delta;
    doc["objective_delta"] = r.objective_delta;
    return doc.dump(2) + "\n";
  }
  std::ostringstream out;
  if (format == Format::Csv) {
    out << "index,rate,oracle_rate\n";
    for (std::size_t i = 0; i < r.split.rates.size(); ++i) {
      out << i + 1 << "," << format_real(r.split.rates[i]) << ","
          << format_real(r.oracle_rates[i]) << "\n";
    }
    return out.str();
  }
  out << kind << " split:";
  for (double x : r.split.rates) out << " " << format_real(x);
  out << "\nobjective " << format_real(r.split.objective)
      << (r.split.boundary ? " (boundary solution)" : "") << "\n";
  out << "grid cross-check: max rate delta " << format_real(r.max_rate_delta)
      << ", objective delta " << format_real(r.objective_delta) << "\n";
  return out.str();
}

}  // namespace aoi::cli
