// aoi: evaluate, simulate, sweep and optimize age-of-information models.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "aoi/commands.hpp"
#include "aoi/parallel.hpp"

namespace {

using aoi::cli::Format;

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = std::stod(item, &used);
    if (used != item.size()) throw std::invalid_argument("bad number '" + item + "'");
    out.push_back(v);
  }
  return out;
}

// Optimize requests may come from a JSON file; flags given on the command line win.
aoi::cli::OptimizeRequest load_optimize_config(const std::string& path) {
  aoi::cli::OptimizeRequest req;
  auto doc = nlohmann::json::parse(std::ifstream(path));
  if (doc.contains("kind")) {
    req.kind = doc["kind"] == "hetero-n2" ? aoi::cli::OptimizeKind::HeteroN2
                                          : aoi::cli::OptimizeKind::Weighted;
  }
  if (doc.contains("weights")) req.weights = doc["weights"].get<std::vector<double>>();
  if (doc.contains("budget")) req.budget = doc["budget"].get<double>();
  if (doc.contains("mu")) req.mu = doc["mu"].get<double>();
  if (doc.contains("mu1")) req.mu1 = doc["mu1"].get<double>();
  if (doc.contains("mu2")) req.mu2 = doc["mu2"].get<double>();
  return req;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Age of information: closed forms, SHS solver, simulation and rate optimization"};
  app.set_version_flag("--version", std::string(aoi::kToolVersion));
  app.require_subcommand(1);

  std::string config_path, out_path, format_name = "text";
  std::optional<std::uint64_t> seed;
  std::optional<double> horizon, warmup;
  std::optional<int> batches, replications;

  auto* analytic = app.add_subcommand("analytic", "closed-form and SHS average age");
  analytic->add_option("--config", config_path, "network config (JSON)")->required();
  analytic->add_option("--format", format_name, "text, csv or json");

  auto* simulate = app.add_subcommand("simulate", "discrete-event simulation");
  simulate->add_option("--config", config_path, "network config (JSON)")->required();
  simulate->add_option("--seed", seed, "base seed");
  simulate->add_option("--horizon", horizon, "simulated time");
  simulate->add_option("--warmup", warmup, "discarded initial time (default 1% of horizon)");
  simulate->add_option("--batches", batches, "batch count for batch-means CI");
  simulate->add_option("--replications", replications, "independent seeds to pool");
  simulate->add_option("--format", format_name, "text, csv or json");

  auto* sweep = app.add_subcommand("sweep", "parameter sweep to CSV/JSON");
  sweep->add_option("--config", config_path, "sweep recipe (JSON)")->required();
  sweep->add_option("--out", out_path, "output file (default stdout)");
  sweep->add_option("--seed", seed, "simulation seed");
  sweep->add_option("--horizon", horizon, "simulation horizon");
  sweep->add_option("--replications", replications, "simulation replications per point");
  std::string sweep_format = "csv";
  sweep->add_option("--format", sweep_format, "csv or json");

  auto* optimize = app.add_subcommand("optimize", "optimal arrival-rate split");
  std::string kind;
  std::string weights;
  std::optional<double> budget, mu, mu1, mu2;
  optimize->add_option("kind", kind, "weighted or hetero-n2")
      ->check(CLI::IsMember({"weighted", "hetero-n2"}));
  optimize->add_option("--config", config_path, "optimize request (JSON)");
  optimize->add_option("--weights", weights, "comma-separated source weights");
  optimize->add_option("--budget", budget, "total arrival rate");
  optimize->add_option("--mu", mu, "service rate (weighted)");
  optimize->add_option("--mu1", mu1, "service rate of server 1 (hetero-n2)");
  optimize->add_option("--mu2", mu2, "service rate of server 2 (hetero-n2)");
  optimize->add_option("--format", format_name, "text, csv or json");

  CLI11_PARSE(app, argc, argv);

  try {
    if (analytic->parsed()) {
      auto config = aoi::load_config_file(config_path);
      auto report = aoi::cli::cmd_analytic(config);
      std::cout << aoi::cli::render(report, aoi::cli::parse_format(format_name));
      return 0;
    }
    if (simulate->parsed()) {
      auto config = aoi::load_config_file(config_path);
      auto params = aoi::default_sim_params(config, horizon.value_or(1e5), seed.value_or(1));
      if (warmup) params.warmup = *warmup;
      if (batches) params.batches = *batches;
      auto result = aoi::replicate(params, replications.value_or(1), aoi::default_threads());
      std::cout << aoi::cli::render(result, aoi::cli::parse_format(format_name));
      return 0;
    }
    if (sweep->parsed()) {
      auto spec = aoi::load_sweep_spec_file(config_path);
      if (seed) spec.sim.seed = *seed;
      if (horizon) {
        spec.sim.horizon = *horizon;
        spec.sim.warmup.reset();
      }
      if (replications) spec.sim.replications = *replications;
      auto format = aoi::cli::parse_format(sweep_format);
      if (format == Format::Text) format = Format::Csv;
      auto result = aoi::cli::cmd_sweep(spec, out_path, format, aoi::default_threads());
      if (!result.ok()) {
        std::cerr << "aoi: some sweep rows carry errors\n";
        return 2;
      }
      return 0;
    }
    if (optimize->parsed()) {
      aoi::cli::OptimizeRequest req;
      if (!config_path.empty()) req = load_optimize_config(config_path);
      if (!kind.empty()) {
        req.kind = kind == "hetero-n2" ? aoi::cli::OptimizeKind::HeteroN2
                                       : aoi::cli::OptimizeKind::Weighted;
      } else if (config_path.empty()) {
        throw std::invalid_argument("optimize needs a kind (weighted or hetero-n2)");
      }
      if (!weights.empty()) req.weights = parse_list(weights);
      if (budget) req.budget = *budget;
      if (mu) req.mu = *mu;
      if (mu1) req.mu1 = *mu1;
      if (mu2) req.mu2 = *mu2;
      auto report = aoi::cli::cmd_optimize(req);
      std::cout << aoi::cli::render(report, aoi::cli::parse_format(format_name));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "aoi: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
