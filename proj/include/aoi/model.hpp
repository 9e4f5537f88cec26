#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace aoi {

/// Raised for malformed configuration documents and for configs that fail
/// validation when loaded.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class QueueDiscipline {
  LcfsPreemptService,  ///< new arrival replaces the update in service
  LcfsPreemptWaiting,  ///< in-service update completes, one waiting slot keeps the newest
  Fcfs,                ///< unbounded buffer, in-order service
};

enum class HomogeneityClass {
  HomogeneousSingleSource,
  HomogeneousMultiSource,
  HeterogeneousSingleSource,
  General,
};

/// m sources observed through n parallel servers feeding one monitor.
///
/// arrival_rates[i][j] is the Poisson rate at which updates of source i reach
/// server j; service_rates[j] is the exponential completion rate of server j.
struct NetworkConfig {
  int num_sources = 1;
  int num_servers = 1;
  std::vector<std::vector<double>> arrival_rates;
  std::vector<double> service_rates;
  QueueDiscipline discipline = QueueDiscipline::LcfsPreemptService;

  /// Sum over servers of source i's arrival rates.
  double source_rate(int source) const;
  /// Sum over sources of the arrival rates at server j.
  double server_load(int server) const;

  bool operator==(const NetworkConfig&) const = default;
};

/// Single-source config with per-server rates.
NetworkConfig make_single_source(std::vector<double> arrival, std::vector<double> service,
                                 QueueDiscipline discipline = QueueDiscipline::LcfsPreemptService);

/// Homogeneous config: every server sees source i at per_source[i], serves at mu.
NetworkConfig make_homogeneous(int servers, std::vector<double> per_source, double mu,
                               QueueDiscipline discipline = QueueDiscipline::LcfsPreemptService);

/// Every invariant violation, empty when the config is usable.
std::vector<std::string> validate(const NetworkConfig& config);

HomogeneityClass classify(const NetworkConfig& config);

std::string_view to_string(QueueDiscipline discipline);
std::string_view to_string(HomogeneityClass cls);
/// Accepts "lcfs-s", "lcfs-w", "fcfs".
QueueDiscipline parse_discipline(std::string_view name);

/// Parses the JSON config document and validates it. Throws ConfigError.
NetworkConfig load_config(std::string_view text);
NetworkConfig load_config_file(const std::string& path);
/// Canonical document: schema key order, two-space indent, trailing newline.
std::string dump_config(const NetworkConfig& config);

}  // namespace aoi
