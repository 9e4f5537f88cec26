#include "aoi/sweep.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <exception>

#include "aoi/analytic.hpp"
#include "aoi/builders.hpp"
#include "aoi/optimize.hpp"
#include "aoi/parallel.hpp"
#include "aoi/sim.hpp"
#include "config_json.hpp"

namespace aoi {

using nlohmann::ordered_json;

std::string_view to_string(Engine engine) {
  switch (engine) {
    case Engine::Analytic: return "analytic";
    case Engine::Shs: return "shs";
    case Engine::Sim: return "sim";
    case Engine::Optimize: return "optimize";
  }
  return "?";
}

std::string_view to_string(SweepParameter parameter) {
  switch (parameter) {
    case SweepParameter::Servers: return "servers";
    case SweepParameter::PerServerArrival: return "per-server-arrival";
    case SweepParameter::TotalArrival: return "total-arrival";
    case SweepParameter::Mu1Share: return "mu1-share";
    case SweepParameter::TrackedSourceRate: return "tracked-source-rate";
  }
  return "?";
}

Engine parse_engine(std::string_view name) {
  for (Engine e : {Engine::Analytic, Engine::Shs, Engine::Sim, Engine::Optimize}) {
    if (to_string(e) == name) return e;
  }
  throw ConfigError("unknown engine '" + std::string(name) + "'");
}

SweepParameter parse_sweep_parameter(std::string_view name) {
  for (SweepParameter p : {SweepParameter::Servers, SweepParameter::PerServerArrival,
                           SweepParameter::TotalArrival, SweepParameter::Mu1Share,
                           SweepParameter::TrackedSourceRate}) {
    if (to_string(p) == name) return p;
  }
  throw ConfigError("unknown sweep parameter '" + std::string(name) + "'");
}

bool SweepResult::ok() const {
  for (const auto& r : rows) {
    if (!r.error.empty()) return false;
  }
  return true;
}

namespace {

SweepAxis axis_from_json(const ordered_json& obj, const std::string& where) {
  if (!obj.is_object()) throw ConfigError("field '" + where + "': expected an object");
  auto p = obj.find("parameter");
  if (p == obj.end() || !p->is_string()) {
    throw ConfigError("field '" + where + ".parameter': expected a string");
  }
  SweepAxis axis;
  axis.parameter = parse_sweep_parameter(p->get<std::string>());
  auto v = obj.find("values");
  if (v == obj.end() || !v->is_array()) {
    throw ConfigError("field '" + where + ".values': expected an array of numbers");
  }
  for (const auto& x : *v) {
    if (!x.is_number()) throw ConfigError("field '" + where + ".values': expected numbers");
    axis.values.push_back(x.get<double>());
  }
  return axis;
}

template <class T>
T read_optional(const ordered_json& obj, const char* key, T fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("field 'sweep.sim.") + key + "': wrong type");
  }
}

}  // namespace

SweepSpec load_sweep_spec(std::string_view text) {
  auto doc = detail::parse_document(text);
  SweepSpec spec;
  spec.base = detail::config_from_json(doc);
  auto sweep = doc.find("sweep");
  if (sweep == doc.end()) throw ConfigError("missing field 'sweep'");
  spec.axis = axis_from_json(*sweep, "sweep");
  if (auto s = sweep->find("series"); s != sweep->end()) {
    spec.series = axis_from_json(*s, "sweep.series");
  }
  auto engines = sweep->find("engines");
  if (engines == sweep->end() || !engines->is_array()) {
    throw ConfigError("field 'sweep.engines': expected an array of engine names");
  }
  for (const auto& e : *engines) {
    if (!e.is_string()) throw ConfigError("field 'sweep.engines': expected strings");
    spec.engines.push_back(parse_engine(e.get<std::string>()));
  }
  if (auto sim = sweep->find("sim"); sim != sweep->end()) {
    if (!sim->is_object()) throw ConfigError("field 'sweep.sim': expected an object");
    spec.sim.horizon = read_optional(*sim, "horizon", spec.sim.horizon);
    if (sim->contains("warmup")) spec.sim.warmup = read_optional(*sim, "warmup", 0.0);
    spec.sim.seed = read_optional<std::uint64_t>(*sim, "seed", spec.sim.seed);
    spec.sim.batches = read_optional(*sim, "batches", spec.sim.batches);
    spec.sim.replications = read_optional(*sim, "replications", spec.sim.replications);
  }
  validate_sweep_spec(spec);
  return spec;
}

SweepSpec load_sweep_spec_file(const std::string& path) {
  return load_sweep_spec(detail::read_file(path));
}

NetworkConfig apply_parameter(const NetworkConfig& base, SweepParameter parameter, double value) {
  NetworkConfig c = base;
  const int m = c.num_sources;
  const int n = c.num_servers;
  double total = 0.0;
  for (int i = 0; i < m; ++i) total += c.source_rate(i);

  switch (parameter) {
    case SweepParameter::Servers: {
      if (!(value >= 1.0) || value != std::floor(value)) {
        throw ConfigError("servers must be a positive integer");
      }
      const int count = static_cast<int>(value);
      for (auto& row : c.arrival_rates) row.assign(count, row.empty() ? 0.0 : row.front());
      c.service_rates.assign(count, base.service_rates.front());
      c.num_servers = count;
      break;
    }
    case SweepParameter::PerServerArrival:
      for (int i = 0; i < m; ++i) {
        const double share = base.source_rate(i) / total;
        c.arrival_rates[i].assign(n, value * share);
      }
      break;
    case SweepParameter::TotalArrival:
      for (auto& row : c.arrival_rates) {
        for (double& r : row) r *= value / total;
      }
      break;
    case SweepParameter::Mu1Share: {
      if (n != 2) throw ConfigError("mu1-share applies only to two-server networks");
      if (!(value > 0.0 && value < 1.0)) throw ConfigError("mu1-share must lie in (0, 1)");
      const double mu = base.service_rates[0] + base.service_rates[1];
      c.service_rates = {value * mu, (1.0 - value) * mu};
      break;
    }
    case SweepParameter::TrackedSourceRate:
      c.arrival_rates[0].assign(n, value);
      break;
  }
  return c;
}

NetworkConfig sweep_point(const SweepSpec& spec, std::optional<double> series, double value) {
  NetworkConfig c = spec.base;
  std::vector<std::pair<SweepParameter, double>> steps;
  if (spec.series && series) steps.emplace_back(spec.series->parameter, *series);
  steps.emplace_back(spec.axis.parameter, value);
  for (const auto& [p, v] : steps) {
    if (p == SweepParameter::Servers) c = apply_parameter(c, p, v);
  }
  for (const auto& [p, v] : steps) {
    if (p != SweepParameter::Servers) c = apply_parameter(c, p, v);
  }
  return c;
}

namespace {

void check_grid(const SweepAxis& axis, const char* what) {
  if (axis.values.empty()) throw ConfigError(std::string(what) + " grid is empty");
  for (std::size_t k = 0; k < axis.values.size(); ++k) {
    if (!std::isfinite(axis.values[k])) {
      throw ConfigError(std::string(what) + " grid has a non-finite value");
    }
    if (k > 0 && !(axis.values[k] > axis.values[k - 1])) {
      throw ConfigError(std::string(what) + " grid must be strictly increasing");
    }
  }
}

std::vector<std::optional<double>> series_values(const SweepSpec& spec) {
  if (!spec.series) return {std::nullopt};
  return {spec.series->values.begin(), spec.series->values.end()};
}

}  // namespace

void validate_sweep_spec(const SweepSpec& spec) {
  check_grid(spec.axis, "sweep");
  if (spec.series) {
    check_grid(*spec.series, "series");
    if (spec.series->parameter == spec.axis.parameter) {
      throw ConfigError("series and sweep parameters must differ");
    }
  }
  if (spec.engines.empty()) throw ConfigError("no engines selected");
  if (!(spec.sim.horizon > 0.0)) throw ConfigError("sim horizon must be positive");
  if (spec.sim.replications < 1) throw ConfigError("sim replications must be at least 1");
  if (spec.sim.batches < 1) throw ConfigError("sim batches must be at least 1");
  for (auto s : series_values(spec)) {
    for (double v : spec.axis.values) {
      auto problems = validate(sweep_point(spec, s, v));
      if (!problems.empty()) {
        throw ConfigError("sweep point " + format_real(v) + " is invalid: " + problems.front());
      }
    }
  }
}

namespace {

void add_engine_rows(std::vector<SweepRow>& out, const SweepRow& proto, const char* engine,
                     const std::vector<double>& aoi, const std::vector<double>* ci = nullptr) {
  for (std::size_t i = 0; i < aoi.size(); ++i) {
    SweepRow r = proto;
    r.engine = engine;
    r.source = static_cast<int>(i) + 1;
    r.aoi = aoi[i];
    if (ci) r.ci_half_width = (*ci)[i];
    out.push_back(std::move(r));
  }
}

void add_error_rows(std::vector<SweepRow>& out, const SweepRow& proto, std::string_view engine,
                    int sources, const std::string& message) {
  for (int i = 0; i < sources; ++i) {
    SweepRow r = proto;
    r.engine = std::string(engine);
    r.source = i + 1;
    r.error = message;
    out.push_back(std::move(r));
  }
}

std::vector<SweepRow> evaluate_point(const SweepSpec& spec, std::optional<double> series,
                                     double value) {
  std::vector<SweepRow> rows;
  SweepRow proto;
  proto.series = series;
  proto.param = value;
  const NetworkConfig c = sweep_point(spec, series, value);
  for (Engine engine : spec.engines) {
    try {
      switch (engine) {
        case Engine::Analytic:
          add_engine_rows(rows, proto, "analytic", closed_form_aoi(c));
          break;
        case Engine::Shs:
          add_engine_rows(rows, proto, "shs", shs_aoi(c));
          break;
        case Engine::Sim: {
          SimParams p = default_sim_params(c, spec.sim.horizon, spec.sim.seed);
          if (spec.sim.warmup) p.warmup = *spec.sim.warmup;
          p.batches = spec.sim.batches;
          SimResult r = replicate(p, spec.sim.replications, 1);
          add_engine_rows(rows, proto, "sim", r.aoi, &r.ci_half_width);
          break;
        }
        case Engine::Optimize: {
          if (c.num_sources != 1 || c.num_servers != 2) {
            throw std::invalid_argument("optimize engine needs one source and two servers");
          }
          SplitResult s =
              optimal_hetero_split_n2(c.source_rate(0), c.service_rates[0], c.service_rates[1]);
          add_engine_rows(rows, proto, "opt-rate", s.rates);
          add_engine_rows(rows, proto, "opt-aoi", {s.objective});
          break;
        }
      }
    } catch (const std::exception& e) {
      add_error_rows(rows, proto, to_string(engine), c.num_sources, e.what());
    }
  }
  return rows;
}

std::string utc_timestamp() {
  std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec, unsigned threads) {
  validate_sweep_spec(spec);
  std::vector<std::pair<std::optional<double>, double>> points;
  for (auto s : series_values(spec)) {
    for (double v : spec.axis.values) points.emplace_back(s, v);
  }
  std::vector<std::vector<SweepRow>> per_point(points.size());
  parallel_for(points.size(), threads, [&](std::size_t k) {
    per_point[k] = evaluate_point(spec, points[k].first, points[k].second);
  });

  SweepResult result;
  result.has_series = spec.series.has_value();
  for (auto& rows : per_point) {
    for (auto& r : rows) result.rows.push_back(std::move(r));
  }
  result.meta.seed = spec.sim.seed;
  result.meta.horizon = spec.sim.horizon;
  result.meta.replications = spec.sim.replications;
  result.meta.parameter = std::string(to_string(spec.axis.parameter));
  if (spec.series) result.meta.series_parameter = std::string(to_string(spec.series->parameter));
  result.meta.tool_version = std::string(kToolVersion);
  result.meta.timestamp = utc_timestamp();
  return result;
}

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

std::string sweep_to_csv(const SweepResult& result) {
  std::string out = result.has_series ? "series," : "";
  out += "param,engine,source,aoi,ci_half_width,error\n";
  for (const auto& r : result.rows) {
    if (result.has_series) out += (r.series ? format_real(*r.series) : "") + ",";
    out += format_real(r.param) + "," + csv_field(r.engine) + "," + std::to_string(r.source) +
           "," + (r.aoi ? format_real(*r.aoi) : "") + "," +
           (r.ci_half_width ? format_real(*r.ci_half_width) : "") + "," + csv_field(r.error) +
           "\n";
  }
  return out;
}

std::string sweep_to_json(const SweepResult& result) {
  auto real = [](std::optional<double> v) -> ordered_json {
    if (!v || !std::isfinite(*v)) return nullptr;
    return *v;
  };
  ordered_json doc;
  doc["meta"] = {{"seed", result.meta.seed},
                 {"horizon", result.meta.horizon},
                 {"replications", result.meta.replications},
                 {"parameter", result.meta.parameter},
                 {"series_parameter", result.meta.series_parameter},
                 {"tool_version", result.meta.tool_version},
                 {"timestamp", result.meta.timestamp}};
  ordered_json rows = ordered_json::array();
  for (const auto& r : result.rows) {
    ordered_json row;
    if (result.has_series) row["series"] = real(r.series);
    row["param"] = r.param;
    row["engine"] = r.engine;
    row["source"] = r.source;
    row["aoi"] = real(r.aoi);
    row["ci_half_width"] = real(r.ci_half_width);
    row["error"] = r.error;
    rows.push_back(std::move(row));
  }
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

}  // namespace aoi
