// Acceptance checks: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "aoi/analytic.hpp"
#include "aoi/builders.hpp"
#include "aoi/optimize.hpp"
#include "aoi/parallel.hpp"
#include "aoi/sim.hpp"
#include "aoi/sweep.hpp"
#include "oracles.hpp"

using namespace aoi;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1. consistency identities on 100-point random grids
Outcome identities() {
  Outcome o;
  oracle::Rng rng(101);
  auto timed = [&](const char* name, const std::function<double(double, double)>& a,
                   const std::function<double(double, double)>& b) {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0;
    for (int k = 0; k < 100; ++k) {
      const double l = rng.log_uniform(0.01, 100), m = rng.log_uniform(0.01, 100);
      worst = std::max(worst, oracle::rel(a(l, m), b(l, m)));
    }
    const double secs = seconds_since(t0);
    o.require(worst < 1e-9, std::string(name) + fmt(": max rel %.3g", worst));
    o.require(secs < 1.0, std::string(name) + fmt(": %.2f s", secs));
    if (o.pass) o.detail += std::string(name) + fmt(" %.1e; ", worst);
  };
  timed("two-server multi-source at m=1",
        [](double l, double m) { return aoi_multi_source_n2(l, l, m); },
        [](double l, double m) { return aoi_lcfs_homogeneous(2, l, m); });
  timed("three-server multi-source at m=1",
        [](double l, double m) { return aoi_multi_source_n3(l, l, m); },
        [](double l, double m) { return aoi_lcfs_homogeneous(3, l, m); });
  timed("two heterogeneous servers, symmetric",
        [](double l, double m) { return aoi_hetero_n2(l, l, m, m); },
        [](double l, double m) { return aoi_lcfs_homogeneous(2, l, m); });
  timed("three heterogeneous servers (SHS), symmetric",
        [](double l, double m) {
          const std::array<double, 3> ls{l, l, l}, ms{m, m, m};
          return aoi_hetero_n3(ls, ms);
        },
        [](double l, double m) { return aoi_lcfs_homogeneous(3, l, m); });
  return o;
}

// 2. SHS solutions against the closed forms, 200 random tuples per model
Outcome shs_against_closed_forms() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  oracle::Rng rng(202);
  double worst_rel = 0, worst_res = 0;
  auto record = [&](const ShsSolution& s, double expect, const char* name) {
    const double r = oracle::rel(s.aoi, expect);
    worst_rel = std::max(worst_rel, r);
    worst_res = std::max({worst_res, s.balance_residual, s.age_residual});
    o.require(r < 1e-9, std::string(name) + fmt(": rel %.3g", r));
  };
  for (int k = 0; k < 200; ++k) {
    const int n = rng.integer(1, 10);
    const double l = rng.log_uniform(0.01, 100), m = rng.log_uniform(0.01, 100);
    record(solve_age(build_single_source_homogeneous(n, l, m)), aoi_lcfs_homogeneous(n, l, m),
           "homogeneous table");
  }
  for (int k = 0; k < 200; ++k) {
    const double l1 = rng.log_uniform(0.01, 100), l2 = rng.log_uniform(0.01, 100);
    const double m1 = rng.log_uniform(0.01, 100), m2 = rng.log_uniform(0.01, 100);
    record(solve_age(build_heterogeneous_single_source(std::vector<double>{l1, l2},
                                                       std::vector<double>{m1, m2})),
           aoi_hetero_n2(l1, l2, m1, m2), "two-state table");
  }
  for (int n : {2, 3}) {
    for (int k = 0; k < 200; ++k) {
      const int m = rng.integer(1, 4);
      std::vector<double> rates;
      double total = 0;
      for (int i = 0; i < m; ++i) {
        rates.push_back(rng.log_uniform(0.01, 50));
        total += rates.back();
      }
      const double mu = rng.log_uniform(0.01, 50);
      const std::size_t tracked = static_cast<std::size_t>(rng.integer(0, m - 1));
      const double expect = n == 2 ? aoi_multi_source_n2(rates[tracked], total, mu)
                                   : aoi_multi_source_n3(rates[tracked], total, mu);
      record(solve_age(build_multi_source_homogeneous(n, tracked, rates, mu)), expect,
             n == 2 ? "multi-source n=2" : "multi-source n=3");
    }
  }
  for (int k = 0; k < 200; ++k) {
    std::vector<double> lam, mu;
    for (int j = 0; j < 3; ++j) {
      lam.push_back(rng.log_uniform(0.01, 100));
      mu.push_back(rng.log_uniform(0.01, 100));
    }
    record(solve_age(build_heterogeneous_single_source(lam, mu)),
           oracle::hetero_permutation_age(lam, mu), "six-state model");
  }
  const double secs = seconds_since(t0);
  o.require(worst_res < 1e-10, fmt("residual %.3g", worst_res));
  o.require(secs < 10.0, fmt("%.2f s", secs));
  if (o.pass) o.detail = fmt("max rel %.2e, max residual %.2e, %.2f s", worst_rel, worst_res, secs);
  return o;
}

// 3. spot values
Outcome spot_values() {
  Outcome o;
  const double a = aoi_lcfs_homogeneous(1, 1, 1), b = aoi_lcfs_homogeneous(2, 1, 1);
  const double c = aoi_lcfs_homogeneous(3, 1, 1), d = aoi_multi_source_n2(0.5, 1, 1);
  o.require(oracle::rel(a, 2.0) < 1e-12, fmt("n=1 gives %.15g", a));
  o.require(oracle::rel(b, 1.25) < 1e-12, fmt("n=2 gives %.15g", b));
  o.require(oracle::rel(c, 26.0 / 27.0) < 1e-12, fmt("n=3 gives %.15g", c));
  o.require(oracle::rel(d, 2.25) < 1e-12, fmt("two sources give %.15g", d));
  if (o.pass) o.detail = fmt("%.12g, %.12g, %.12g, %.12g", a, b, c, d);
  return o;
}

// 4. simulation against the analytic engines
Outcome simulation_convergence() {
  Outcome o;
  struct Case {
    const char* name;
    NetworkConfig config;
  };
  const std::vector<Case> cases{
      {"hom n=1", make_homogeneous(1, {1}, 1)},
      {"hom n=2", make_homogeneous(2, {1}, 1)},
      {"hom n=3 rho=0.5", make_homogeneous(3, {0.5}, 1)},
      {"hom n=5", make_homogeneous(5, {0.3}, 2)},
      {"multi n=2 equal", make_homogeneous(2, {0.5, 0.5}, 1)},
      {"multi n=2 skewed", make_homogeneous(2, {0.2, 0.8}, 1)},
      {"multi n=3", make_homogeneous(3, {0.5, 0.5}, 1)},
      {"multi n=3 three sources", make_homogeneous(3, {0.2, 0.5, 0.3}, 1.5)},
      {"multi n=4", make_homogeneous(4, {0.3, 0.4}, 1)},
      {"het n=2", make_single_source({2, 1}, {1, 2})},
      {"het n=2 slow", make_single_source({0.5, 1.5}, {2, 0.7})},
      {"het n=3", make_single_source({1, 2, 3}, {1, 1, 1})},
      {"het n=4", make_single_source({0.5, 1, 0.25, 0.75}, {1, 0.5, 2, 1})},
  };
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<std::string> failures(cases.size());
  std::vector<double> worst(cases.size(), 0.0);
  parallel_for(cases.size(), default_threads(), [&](std::size_t k) {
    const auto& c = cases[k];
    const auto expect = shs_aoi(c.config);
    const auto sim = replicate(default_sim_params(c.config, 1e6, 7000 + 10 * k), 8, 1);
    for (std::size_t i = 0; i < expect.size(); ++i) {
      const double tol = std::max(3.0 * sim.ci_half_width[i], 0.02 * expect[i]);
      const double err = std::abs(sim.aoi[i] - expect[i]);
      worst[k] = std::max(worst[k], err / expect[i]);
      if (!(err <= tol)) {
        failures[k] = std::string(c.name) + fmt(": sim %.6g vs %.6g (tol %.3g)", sim.aoi[i],
                                                expect[i], tol);
      }
    }
  });
  double worst_all = 0;
  for (std::size_t k = 0; k < cases.size(); ++k) {
    o.require(failures[k].empty(), failures[k]);
    worst_all = std::max(worst_all, worst[k]);
  }
  if (o.pass) {
    o.detail = fmt("%.0f configs, worst rel deviation %.2e, %.0f s",
                   static_cast<double>(cases.size()), worst_all, seconds_since(t0));
  }
  return o;
}

// 5. age against server count at a fixed total rate
Outcome more_servers() {
  Outcome o;
  for (double total : {0.5, 1.0, 2.0, 5.0, 10.0}) {
    std::vector<double> a;
    for (int n = 1; n <= 10; ++n) a.push_back(aoi_lcfs_homogeneous(n, total / n, 1.0));
    for (int n = 1; n < 10; ++n) {
      o.require(a[n] <= a[n - 1], fmt("total %.3g: AoI rises from n=%.0f", total, n));
    }
    o.require(a[3] - a[9] < a[0] - a[3], fmt("total %.3g: gain 4->10 %.4g vs 1->4 %.4g", total,
                                              a[3] - a[9], a[0] - a[3]));
  }
  if (o.pass) o.detail = "non-increasing in n, 4->10 gain below 1->4 gain for all totals";
  return o;
}

// 6. discipline comparison on four servers, by simulation
Outcome discipline_comparison() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<double> grid;
  for (int k = 1; k <= 19; ++k) grid.push_back(0.05 * k);
  const std::array<QueueDiscipline, 3> discs{QueueDiscipline::LcfsPreemptService,
                                             QueueDiscipline::LcfsPreemptWaiting,
                                             QueueDiscipline::Fcfs};
  std::vector<SimResult> res(grid.size() * 3);
  parallel_for(res.size(), default_threads(), [&](std::size_t k) {
    const double lambda = grid[k / 3];
    auto p = default_sim_params(make_homogeneous(4, {lambda}, 1, discs[k % 3]), 2e5, 600 + k / 3);
    res[k] = replicate(p, 4, 1);
  });
  std::size_t fcfs_best = 0;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const auto& s = res[3 * g];
    const auto& w = res[3 * g + 1];
    const auto& f = res[3 * g + 2];
    o.require(s.aoi[0] <= w.aoi[0] + s.ci_half_width[0] + w.ci_half_width[0],
              fmt("lambda %.2f: LCFS-S %.5g above LCFS-W %.5g", grid[g], s.aoi[0], w.aoi[0]));
    o.require(s.aoi[0] <= f.aoi[0] + s.ci_half_width[0] + f.ci_half_width[0],
              fmt("lambda %.2f: LCFS-S %.5g above FCFS %.5g", grid[g], s.aoi[0], f.aoi[0]));
    if (f.aoi[0] < res[3 * fcfs_best + 2].aoi[0]) fcfs_best = g;
  }
  const double argmin = grid[fcfs_best];
  o.require(std::abs(argmin - 0.5) <= 0.05 + 1e-9, fmt("FCFS minimizer at %.2f", argmin));
  if (o.pass) {
    o.detail = fmt("ordering holds on 19 points, FCFS minimizer %.2f (AoI %.4g), %.0f s", argmin,
                   res[3 * fcfs_best + 2].aoi[0], seconds_since(t0));
  }
  return o;
}

// 7. weighted split
Outcome weighted_split() {
  Outcome o;
  oracle::Rng rng(707);
  int trials = 0;
  double worst_rate = 0;
  const std::vector<std::vector<double>> weight_sets{{1, 4}, {0.3, 2.0}, {1, 2, 3}, {5, 1, 1, 0.5}};
  for (const auto& w : weight_sets) {
    const double budget = 3.0, mu = 1.0;
    auto best = optimal_weighted_split(w, budget, mu);
    for (int k = 0; k < 10000; ++k, ++trials) {
      std::vector<double> r;
      double s = 0;
      for (std::size_t i = 0; i < w.size(); ++i) {
        r.push_back(-std::log(rng.uniform(1e-12, 1.0)));
        s += r.back();
      }
      for (double& x : r) x *= budget / s;
      const double f = weighted_objective(w, r, mu);
      if (!(best.objective <= f * (1 + 1e-12))) {
        o.require(false, fmt("random split beats closed form (%.10g < %.10g)", f, best.objective));
        break;
      }
    }
    // simplex search: coordinate descent over pairs, each refined by grid_minimize
    std::vector<double> r(w.size(), budget / w.size());
    for (int pass = 0; pass < 60; ++pass) {
      for (std::size_t i = 0; i < w.size(); ++i) {
        for (std::size_t j = i + 1; j < w.size(); ++j) {
          const double pair = r[i] + r[j];
          auto f = [&](double x) {
            auto t = r;
            t[i] = x;
            t[j] = pair - x;
            return weighted_objective(w, t, mu);
          };
          const double x = grid_minimize(f, pair * 1e-9, pair * (1 - 1e-9), 1e-12).argmin;
          r[i] = x;
          r[j] = pair - x;
        }
      }
    }
    for (std::size_t i = 0; i < w.size(); ++i) {
      worst_rate = std::max(worst_rate, std::abs(r[i] - best.rates[i]));
    }
  }
  o.require(worst_rate < 1e-4, fmt("simplex search differs by %.3g", worst_rate));
  for (std::size_t m : {2u, 3u, 5u}) {
    std::vector<double> w(m, 2.5);
    auto s = optimal_weighted_split(w, 6.0, 1.0);
    for (double x : s.rates) o.require(x == 6.0 / m, fmt("symmetric split gives %.17g", x));
  }
  if (o.pass) {
    o.detail = fmt("%.0f random splits beaten, simplex search max delta %.2e", trials, worst_rate);
  }
  return o;
}

// 8. heterogeneous split across the mu1-share sweep
Outcome hetero_split() {
  Outcome o;
  const double budget = 10.0, total = 100.0;
  double worst = 0;
  int boundary = 0;
  for (int k = 0; k < 50; ++k) {
    const double mu1 = 1.0 + 98.0 * k / 49.0, mu2 = total - mu1;
    auto s = optimal_hetero_split_n2(budget, mu1, mu2);
    auto f = [&](double x) { return aoi_hetero_n2(x, budget - x, mu1, mu2); };
    auto g = grid_minimize(f, 0.0, budget, budget * 1e-12);
    worst = std::max(worst, std::abs(s.rates[0] - g.argmin));
    o.require(std::abs(s.rates[0] - g.argmin) <= 1e-4 * budget,
              fmt("mu1 %.4g: closed form %.8g vs grid %.8g", mu1, s.rates[0], g.argmin));
    // boundary regimes against the stated conditions
    const bool zero = mu1 < mu2 && mu2 * mu2 - mu1 * (budget + mu1) * (budget + mu2) / mu2 >= 0;
    const bool all = mu1 > mu2 && mu1 * mu1 >= mu2 * (budget + mu1) * (budget + mu2) / mu1;
    if (zero || all) ++boundary;
    o.require(!zero || (s.rates[0] == 0.0 && s.boundary && g.argmin <= 1e-4 * budget),
              fmt("mu1 %.4g: expected (0, lambda)", mu1));
    o.require(!all || (s.rates[0] == budget && s.boundary && g.argmin >= budget * (1 - 1e-4)),
              fmt("mu1 %.4g: expected (lambda, 0)", mu1));
    o.require(zero || all || !s.boundary, fmt("mu1 %.4g: unexpected boundary", mu1));
  }
  auto eq = optimal_hetero_split_n2(budget, 50, 50);
  o.require(eq.rates[0] == budget / 2 && eq.rates[1] == budget / 2, "equal rates do not split evenly");
  if (o.pass) {
    o.detail = fmt("50 points, max |delta lambda1| %.2e, %.0f boundary points, equal split at 50/50",
                   worst, boundary);
  }
  return o;
}

// 9. reproducible CSV
Outcome determinism() {
  Outcome o;
  SweepSpec spec;
  spec.base = make_homogeneous(3, {0.4, 0.6}, 1);
  spec.axis = {SweepParameter::PerServerArrival, {0.5, 1.0, 2.0}};
  spec.engines = {Engine::Analytic, Engine::Shs, Engine::Sim};
  spec.sim.horizon = 2e4;
  spec.sim.seed = 42;
  spec.sim.replications = 3;
  const auto a = sweep_to_csv(run_sweep(spec, 1));
  const auto b = sweep_to_csv(run_sweep(spec, 1));
  const auto c = sweep_to_csv(run_sweep(spec, 4));
  o.require(a == b, "repeated runs differ");
  o.require(a == c, "thread count changes the output");
  spec.sim.seed = 43;
  o.require(sweep_to_csv(run_sweep(spec, 1)) != a, "seed has no effect");
  if (o.pass) o.detail = fmt("%.0f bytes identical across 3 runs", static_cast<double>(a.size()));
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"consistency identities", identities},
      {"SHS matches closed forms", shs_against_closed_forms},
      {"spot values", spot_values},
      {"simulation converges to analytic AoI", simulation_convergence},
      {"more servers at fixed total rate", more_servers},
      {"discipline ordering and FCFS optimum", discipline_comparison},
      {"weighted rate split", weighted_split},
      {"heterogeneous rate split", hetero_split},
      {"deterministic CSV", determinism},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] %zu. %s: %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first,
                o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
