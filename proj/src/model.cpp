#include "aoi/model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "config_json.hpp"

namespace aoi {

using nlohmann::ordered_json;

double NetworkConfig::source_rate(int source) const {
  double total = 0.0;
  for (double r : arrival_rates.at(source)) total += r;
  return total;
}

double NetworkConfig::server_load(int server) const {
  double total = 0.0;
  for (const auto& row : arrival_rates) total += row.at(server);
  return total;
}

NetworkConfig make_single_source(std::vector<double> arrival, std::vector<double> service,
                                 QueueDiscipline discipline) {
  NetworkConfig c;
  c.num_sources = 1;
  c.num_servers = static_cast<int>(service.size());
  c.arrival_rates = {std::move(arrival)};
  c.service_rates = std::move(service);
  c.discipline = discipline;
  return c;
}

NetworkConfig make_homogeneous(int servers, std::vector<double> per_source, double mu,
                               QueueDiscipline discipline) {
  NetworkConfig c;
  c.num_sources = static_cast<int>(per_source.size());
  c.num_servers = servers;
  for (double r : per_source) c.arrival_rates.emplace_back(servers, r);
  c.service_rates.assign(servers, mu);
  c.discipline = discipline;
  return c;
}

std::vector<std::string> validate(const NetworkConfig& config) {
  std::vector<std::string> out;
  if (config.num_sources < 1) out.push_back("number of sources must be positive");
  if (config.num_servers < 1) out.push_back("number of servers must be positive");

  bool shape_ok = static_cast<int>(config.arrival_rates.size()) == config.num_sources &&
                  static_cast<int>(config.service_rates.size()) == config.num_servers;
  for (const auto& row : config.arrival_rates) {
    if (static_cast<int>(row.size()) != config.num_servers) shape_ok = false;
  }
  if (!shape_ok) {
    out.push_back("dimension mismatch: expected " + std::to_string(config.num_sources) + "x" +
                  std::to_string(config.num_servers) + " arrival rates and " +
                  std::to_string(config.num_servers) + " service rates");
  }

  for (std::size_t j = 0; j < config.service_rates.size(); ++j) {
    double mu = config.service_rates[j];
    if (!std::isfinite(mu) || !(mu > 0.0)) {
      out.push_back("service rate must be positive (server " + std::to_string(j + 1) + ")");
    }
  }
  for (std::size_t i = 0; i < config.arrival_rates.size(); ++i) {
    double total = 0.0;
    bool row_ok = true;
    for (std::size_t j = 0; j < config.arrival_rates[i].size(); ++j) {
      double r = config.arrival_rates[i][j];
      if (!std::isfinite(r) || r < 0.0) {
        out.push_back("arrival rate must be non-negative and finite (source " +
                      std::to_string(i + 1) + ", server " + std::to_string(j + 1) + ")");
        row_ok = false;
      } else {
        total += r;
      }
    }
    if (row_ok && !(total > 0.0)) {
      out.push_back("source " + std::to_string(i + 1) + " has zero total arrival rate");
    }
  }
  return out;
}

HomogeneityClass classify(const NetworkConfig& config) {
  bool homogeneous = true;
  for (double mu : config.service_rates) {
    if (mu != config.service_rates.front()) homogeneous = false;
  }
  for (const auto& row : config.arrival_rates) {
    for (double r : row) {
      if (r != row.front()) homogeneous = false;
    }
  }
  if (homogeneous) {
    return config.num_sources == 1 ? HomogeneityClass::HomogeneousSingleSource
                                   : HomogeneityClass::HomogeneousMultiSource;
  }
  return config.num_sources == 1 ? HomogeneityClass::HeterogeneousSingleSource
                                 : HomogeneityClass::General;
}

std::string_view to_string(QueueDiscipline discipline) {
  switch (discipline) {
    case QueueDiscipline::LcfsPreemptService: return "lcfs-s";
    case QueueDiscipline::LcfsPreemptWaiting: return "lcfs-w";
    case QueueDiscipline::Fcfs: return "fcfs";
  }
  return "?";
}

std::string_view to_string(HomogeneityClass cls) {
  switch (cls) {
    case HomogeneityClass::HomogeneousSingleSource: return "homogeneous-single-source";
    case HomogeneityClass::HomogeneousMultiSource: return "homogeneous-multi-source";
    case HomogeneityClass::HeterogeneousSingleSource: return "heterogeneous-single-source";
    case HomogeneityClass::General: return "general";
  }
  return "?";
}

QueueDiscipline parse_discipline(std::string_view name) {
  if (name == "lcfs-s") return QueueDiscipline::LcfsPreemptService;
  if (name == "lcfs-w") return QueueDiscipline::LcfsPreemptWaiting;
  if (name == "fcfs") return QueueDiscipline::Fcfs;
  throw ConfigError("unknown discipline '" + std::string(name) +
                    "' (expected lcfs-s, lcfs-w or fcfs)");
}

namespace detail {

ordered_json parse_document(std::string_view text) {
  try {
    return ordered_json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError("parse error at line " + std::to_string(line) + ", column " +
                      std::to_string(col) + ": " + e.what());
  }
}

namespace {

const ordered_json& require(const ordered_json& obj, const char* field) {
  auto it = obj.find(field);
  if (it == obj.end()) throw ConfigError(std::string("missing field '") + field + "'");
  return *it;
}

int read_count(const ordered_json& obj, const char* field) {
  const auto& v = require(obj, field);
  if (!v.is_number_integer()) {
    throw ConfigError(std::string("field '") + field + "': expected an integer");
  }
  return v.get<int>();
}

double read_real(const ordered_json& v, const std::string& where) {
  if (!v.is_number()) throw ConfigError("field '" + where + "': expected a number");
  return v.get<double>();
}

std::vector<double> read_reals(const ordered_json& v, const std::string& where) {
  if (!v.is_array()) throw ConfigError("field '" + where + "': expected an array of numbers");
  std::vector<double> out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    out.push_back(read_real(v[k], where + "[" + std::to_string(k) + "]"));
  }
  return out;
}

}  // namespace

NetworkConfig config_from_json(const ordered_json& obj) {
  if (!obj.is_object()) throw ConfigError("config document must be a JSON object");
  NetworkConfig c;
  c.num_sources = read_count(obj, "sources");
  c.num_servers = read_count(obj, "servers");

  const auto& rows = require(obj, "arrival_rates");
  if (!rows.is_array()) throw ConfigError("field 'arrival_rates': expected an array of arrays");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    c.arrival_rates.push_back(read_reals(rows[i], "arrival_rates[" + std::to_string(i) + "]"));
  }
  c.service_rates = read_reals(require(obj, "service_rates"), "service_rates");

  const auto& disc = require(obj, "discipline");
  if (!disc.is_string()) throw ConfigError("field 'discipline': expected a string");
  c.discipline = parse_discipline(disc.get<std::string>());

  auto problems = validate(c);
  if (!problems.empty()) {
    std::string msg = "invalid config:";
    for (const auto& p : problems) msg += " " + p + ";";
    msg.pop_back();
    throw ConfigError(msg);
  }
  return c;
}

ordered_json config_to_json(const NetworkConfig& config) {
  ordered_json obj;
  obj["sources"] = config.num_sources;
  obj["servers"] = config.num_servers;
  obj["arrival_rates"] = config.arrival_rates;
  obj["service_rates"] = config.service_rates;
  obj["discipline"] = std::string(to_string(config.discipline));
  return obj;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace detail

NetworkConfig load_config(std::string_view text) {
  return detail::config_from_json(detail::parse_document(text));
}

NetworkConfig load_config_file(const std::string& path) {
  return load_config(detail::read_file(path));
}

std::string dump_config(const NetworkConfig& config) {
  return detail::config_to_json(config).dump(2) + "\n";
}

}  // namespace aoi
