#include <doctest.h>

#include <string>

#include "aoi/commands.hpp"
#include "aoi/sweep.hpp"

using namespace aoi;

namespace {

const char* kRecipe = R"({
  "sources": 1, "servers": 2,
  "arrival_rates": [[1, 1]], "service_rates": [1, 1], "discipline": "lcfs-s",
  "sweep": {"parameter": "per-server-arrival", "values": [0.5, 1, 2],
            "engines": ["analytic", "shs", "sim"],
            "sim": {"horizon": 5000, "seed": 3, "replications": 2}}
})";

}  // namespace

TEST_CASE("recipe parsing") {
  auto spec = load_sweep_spec(kRecipe);
  CHECK(spec.axis.parameter == SweepParameter::PerServerArrival);
  CHECK(spec.axis.values == std::vector<double>{0.5, 1, 2});
  CHECK(spec.engines == std::vector<Engine>{Engine::Analytic, Engine::Shs, Engine::Sim});
  CHECK(spec.sim.horizon == 5000);
  CHECK(spec.sim.seed == 3);
  CHECK(spec.sim.replications == 2);
  CHECK_FALSE(spec.series);
  CHECK_THROWS_AS(load_sweep_spec(R"({"sources": 1})"), ConfigError);
  std::string bad = kRecipe;
  bad.replace(bad.find("\"shs\""), 5, "\"xyz\"");
  CHECK_THROWS_AS(load_sweep_spec(bad), ConfigError);
}

TEST_CASE("grids are checked") {
  auto spec = load_sweep_spec(kRecipe);
  spec.axis.values.clear();
  CHECK_THROWS_AS(validate_sweep_spec(spec), ConfigError);
  CHECK_THROWS_AS(run_sweep(spec, 1), ConfigError);
  spec.axis.values = {1, 1};
  CHECK_THROWS_AS(validate_sweep_spec(spec), ConfigError);
  spec.axis.values = {-1, 1};
  CHECK_THROWS_AS(validate_sweep_spec(spec), ConfigError);
  spec.axis.values = {1};
  spec.engines.clear();
  CHECK_THROWS_AS(validate_sweep_spec(spec), ConfigError);
}

TEST_CASE("parameters act on the base config") {
  auto base = make_homogeneous(2, {0.25, 0.75}, 2.0);
  auto c = apply_parameter(base, SweepParameter::PerServerArrival, 2.0);
  CHECK(c.arrival_rates[0] == std::vector<double>{0.5, 0.5});
  CHECK(c.arrival_rates[1] == std::vector<double>{1.5, 1.5});
  c = apply_parameter(base, SweepParameter::TotalArrival, 4.0);
  CHECK(c.source_rate(0) + c.source_rate(1) == doctest::Approx(4.0));
  CHECK(c.arrival_rates[0][0] == doctest::Approx(0.5));
  c = apply_parameter(base, SweepParameter::Servers, 5);
  CHECK(c.num_servers == 5);
  CHECK(c.service_rates == std::vector<double>(5, 2.0));
  CHECK(c.arrival_rates[1] == std::vector<double>(5, 0.75));
  c = apply_parameter(base, SweepParameter::TrackedSourceRate, 0.1);
  CHECK(c.arrival_rates[0] == std::vector<double>{0.1, 0.1});
  c = apply_parameter(make_single_source({10, 0}, {60, 40}), SweepParameter::Mu1Share, 0.25);
  CHECK(c.service_rates == std::vector<double>{25, 75});
  CHECK_THROWS_AS(apply_parameter(base, SweepParameter::Servers, 1.5), ConfigError);
  CHECK_THROWS_AS(apply_parameter(make_homogeneous(3, {1}, 1), SweepParameter::Mu1Share, 0.5),
                  ConfigError);
}

TEST_CASE("servers are applied before the total rate") {
  SweepSpec spec;
  spec.base = make_homogeneous(1, {1}, 1);
  spec.axis = {SweepParameter::Servers, {1, 2, 4}};
  spec.series = SweepAxis{SweepParameter::TotalArrival, {2}};
  spec.engines = {Engine::Analytic};
  auto c = sweep_point(spec, 2.0, 4.0);
  CHECK(c.num_servers == 4);
  CHECK(c.arrival_rates[0] == std::vector<double>(4, 0.5));
}

TEST_CASE("rows follow grid, engine and source order") {
  SweepSpec spec;
  spec.base = make_homogeneous(2, {0.5, 0.5}, 1);
  spec.axis = {SweepParameter::PerServerArrival, {0.5, 1.0, 1.5, 2.0}};
  spec.engines = {Engine::Shs, Engine::Analytic};
  auto r = run_sweep(spec, 3);
  REQUIRE(r.rows.size() == 4 * 2 * 2);
  CHECK(r.ok());
  for (std::size_t k = 0; k < r.rows.size(); ++k) {
    const auto& row = r.rows[k];
    CHECK(row.param == spec.axis.values[k / 4]);
    CHECK(row.engine == ((k / 2) % 2 == 0 ? "shs" : "analytic"));
    CHECK(row.source == static_cast<int>(k % 2) + 1);
  }
  CHECK(*r.rows[4 * 1].aoi == doctest::Approx(2.25));
}

TEST_CASE("engine failures become error rows") {
  SweepSpec spec;
  spec.base = make_homogeneous(4, {0.5, 0.5}, 1);
  spec.axis = {SweepParameter::PerServerArrival, {1.0}};
  spec.engines = {Engine::Analytic, Engine::Shs};
  auto r = run_sweep(spec, 1);
  REQUIRE(r.rows.size() == 4);
  CHECK_FALSE(r.ok());
  CHECK(r.rows[0].engine == "analytic");
  CHECK_FALSE(r.rows[0].aoi);
  CHECK_FALSE(r.rows[0].error.empty());
  CHECK(r.rows[2].error.empty());
  auto csv = sweep_to_csv(r);
  CHECK(csv.rfind("param,engine,source,aoi,ci_half_width,error\n", 0) == 0);
  CHECK(csv.find("\n1,analytic,1,,,") != std::string::npos);
}

TEST_CASE("optimize engine rows") {
  SweepSpec spec;
  spec.base = make_single_source({5, 5}, {50, 50});
  spec.axis = {SweepParameter::Mu1Share, {0.5, 0.95}};
  spec.engines = {Engine::Optimize};
  auto r = run_sweep(spec, 1);
  REQUIRE(r.rows.size() == 6);
  CHECK(r.rows[0].engine == "opt-rate");
  CHECK(*r.rows[0].aoi == doctest::Approx(5));
  CHECK(r.rows[2].engine == "opt-aoi");
  CHECK(*r.rows[3].aoi == doctest::Approx(10));
  CHECK(*r.rows[4].aoi == doctest::Approx(0).epsilon(1e-12));
}

TEST_CASE("CSV output is reproducible") {
  auto spec = load_sweep_spec(kRecipe);
  const auto a = sweep_to_csv(run_sweep(spec, 1));
  const auto b = sweep_to_csv(run_sweep(spec, 4));
  CHECK(a == b);
  CHECK(a.find("\n1,analytic,1,1.25,,\n") != std::string::npos);
  CHECK(a.find("T") == std::string::npos);
  const auto j = sweep_to_json(run_sweep(spec, 1));
  CHECK(j.find("\"timestamp\"") != std::string::npos);
  CHECK(j.find("\"tool_version\": \"0.1.0\"") != std::string::npos);
}

TEST_CASE("series column") {
  SweepSpec spec;
  spec.base = make_homogeneous(1, {1}, 1);
  spec.series = SweepAxis{SweepParameter::TotalArrival, {0.5, 1}};
  spec.axis = {SweepParameter::Servers, {1, 2}};
  spec.engines = {Engine::Analytic};
  auto csv = sweep_to_csv(run_sweep(spec, 1));
  CHECK(csv.rfind("series,param,engine,source,aoi,ci_half_width,error\n", 0) == 0);
  CHECK(csv.find("\n1,2,analytic,1,") != std::string::npos);
}

TEST_CASE("number formatting") {
  CHECK(format_real(1.25) == "1.25");
  CHECK(format_real(26.0 / 27.0) == "0.962962962963");
  CHECK(format_real(1e-20) == "1e-20");
}

TEST_CASE("analytic command") {
  auto report = cli::cmd_analytic(make_homogeneous(2, {1}, 1));
  CHECK(report.values.size() == 2);
  CHECK(report.max_rel_disagreement < 1e-9);
  auto het = cli::cmd_analytic(make_single_source({1, 2, 3}, {1, 1, 1}));
  CHECK(het.max_rel_disagreement < 1e-10);
  CHECK_THROWS_WITH_AS(cli::cmd_analytic(make_homogeneous(2, {0.3}, 1, QueueDiscipline::Fcfs)),
                       doctest::Contains("use simulate"), std::invalid_argument);
}

TEST_CASE("optimize command") {
  cli::OptimizeRequest w;
  w.weights = {1, 4};
  w.budget = 3;
  auto r = cli::cmd_optimize(w);
  CHECK(r.split.rates[0] == doctest::Approx(1));
  CHECK(r.max_rate_delta < 1e-4);
  CHECK(r.objective_delta <= 1e-12);

  cli::OptimizeRequest h;
  h.kind = cli::OptimizeKind::HeteroN2;
  h.budget = 10;
  h.mu1 = 95;
  h.mu2 = 5;
  auto b = cli::cmd_optimize(h);
  CHECK(b.split.boundary);
  CHECK(b.split.rates == std::vector<double>{10, 0});
  CHECK(cli::render(b, cli::Format::Text).find("boundary") != std::string::npos);
}
