#include <doctest.h>

#include "aoi/rng.hpp"
#include "aoi/sim.hpp"

using namespace aoi;

namespace {

SimParams base(double horizon, std::uint64_t seed = 1,
               QueueDiscipline d = QueueDiscipline::LcfsPreemptService) {
  return default_sim_params(make_homogeneous(2, {1}, 1, d), horizon, seed);
}

bool same(const SimResult& a, const SimResult& b) {
  return a.aoi == b.aoi && a.ci_half_width == b.ci_half_width &&
         a.integrated_age == b.integrated_age && a.deliveries == b.deliveries &&
         a.useful_deliveries == b.useful_deliveries && a.discarded_stale == b.discarded_stale &&
         a.events == b.events;
}

}  // namespace

TEST_CASE("counter generator streams") {
  auto a = CounterRng::stream(7, 1), b = CounterRng::stream(7, 1), c = CounterRng::stream(7, 2);
  for (int k = 0; k < 100; ++k) {
    const auto x = a();
    CHECK(x == b());
    CHECK(x != c());
  }
  auto u = CounterRng::stream(3, 0);
  double sum = 0;
  for (int k = 0; k < 100000; ++k) {
    const double e = u.exponential(2.0);
    CHECK(e > 0.0);
    sum += e;
  }
  CHECK(sum / 100000 == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("two LCFS servers converge to 1.25") {
  auto p = base(1e6);
  p.warmup = 1e3;
  auto r = simulate(p);
  REQUIRE(r.aoi.size() == 1);
  CHECK(std::abs(r.aoi[0] - 1.25) < 0.02 * 1.25);
  CHECK(r.ci_half_width[0] > 0.0);
  CHECK(r.ci_half_width[0] < 0.01);
  CHECK(r.useful_deliveries <= r.deliveries);
  CHECK(r.useful_deliveries + r.discarded_stale == r.deliveries);
}

TEST_CASE("invalid parameters") {
  auto p = base(0);
  p.warmup = 0;
  CHECK_THROWS_AS(simulate(p), SimulationError);
  p = base(100);
  p.warmup = 100;
  CHECK_THROWS_AS(simulate(p), SimulationError);
  p = base(100);
  p.batches = 0;
  CHECK_THROWS_AS(simulate(p), SimulationError);
  p = base(100);
  p.config.service_rates[1] = 0;
  CHECK_THROWS_AS(simulate(p), SimulationError);
  p = base(100, 1, QueueDiscipline::Fcfs);
  CHECK_THROWS_AS(simulate(p), SimulationError);
  p = default_sim_params(make_homogeneous(2, {0.9}, 1, QueueDiscipline::Fcfs), 100);
  CHECK_NOTHROW(simulate(p));
  CHECK_THROWS_AS(replicate(base(100), 0), SimulationError);
}

TEST_CASE("runs are deterministic given the seed") {
  auto a = simulate(base(2e4, 9));
  auto b = simulate(base(2e4, 9));
  CHECK(same(a, b));
  auto c = simulate(base(2e4, 10));
  CHECK(a.aoi != c.aoi);
  auto r1 = replicate(base(2e4, 9), 3, 1);
  auto r2 = replicate(base(2e4, 9), 3, 3);
  CHECK(same(r1, r2));
  CHECK(r1.replications == 3);
}

TEST_CASE("one replication is a plain simulation") {
  CHECK(same(replicate(base(1e4, 4), 1), simulate(base(1e4, 4))));
}

TEST_CASE("replication CI shrinks like the square root of the count") {
  // a single 4-run half-width has 3 degrees of freedom, so average over disjoint seed blocks
  double h4 = 0, h16 = 0;
  for (std::uint64_t block = 0; block < 8; ++block) {
    h4 += replicate(base(2e4, 1000 + 4 * block), 4, 1).ci_half_width[0];
    h16 += replicate(base(2e4, 2000 + 16 * block), 16, 1).ci_half_width[0];
  }
  CHECK(h16 / h4 >= 0.15);
  CHECK(h16 / h4 <= 0.45);
}

TEST_CASE("event clock increases and the age bookkeeping balances") {
  auto p = default_sim_params(make_homogeneous(3, {0.4, 0.7}, 1.2), 2e4, 5);
  double last = -1.0;
  bool increasing = true;
  std::uint64_t seen = 0;
  auto r = simulate(p, [&](double t, EventKind) {
    if (!(t > last)) increasing = false;
    last = t;
    ++seen;
  });
  CHECK(increasing);
  CHECK(seen == r.events);
  CHECK(last <= p.horizon);
  for (std::size_t i = 0; i < r.aoi.size(); ++i) {
    CHECK(r.integrated_age[i] == doctest::Approx(r.aoi[i] * (p.horizon - p.warmup)).epsilon(1e-12));
    CHECK(r.aoi[i] > 0.0);
  }
}

TEST_CASE("preemption in service gives the lowest age at n = 4") {
  for (double lambda : {0.2, 0.5, 0.8}) {
    CAPTURE(lambda);
    auto run = [&](QueueDiscipline d) {
      return replicate(default_sim_params(make_homogeneous(4, {lambda}, 1, d), 1e5, 17), 4);
    };
    auto s = run(QueueDiscipline::LcfsPreemptService);
    auto w = run(QueueDiscipline::LcfsPreemptWaiting);
    auto f = run(QueueDiscipline::Fcfs);
    CHECK(s.aoi[0] <= w.aoi[0] + s.ci_half_width[0] + w.ci_half_width[0]);
    CHECK(s.aoi[0] <= f.aoi[0] + s.ci_half_width[0] + f.ci_half_width[0]);
  }
}

TEST_CASE("one FCFS server matches the M/M/1 age") {
  // 1/mu (1 + 1/rho + rho^2 / (1 - rho)) at rho = 0.5
  auto p = default_sim_params(make_homogeneous(1, {0.5}, 1, QueueDiscipline::Fcfs), 1e6, 3);
  auto r = simulate(p);
  CHECK(r.aoi[0] == doctest::Approx(3.5).epsilon(0.02));
  CHECK(r.discarded_stale == 0);
}

TEST_CASE("one LCFS-W server matches the single-buffer age") {
  // three-state age model of one server with a newest-wins waiting slot, at lambda = mu = 1
  auto w = simulate(default_sim_params(
      make_homogeneous(1, {1}, 1, QueueDiscipline::LcfsPreemptWaiting), 1e6, 3));
  CHECK(w.aoi[0] == doctest::Approx(29.0 / 12.0).epsilon(0.02));
  auto s = simulate(default_sim_params(make_homogeneous(1, {1}, 1), 1e6, 3));
  CHECK(s.aoi[0] == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("t quantiles") {
  CHECK(t_quantile_975(1) == doctest::Approx(12.7062047).epsilon(1e-7));
  CHECK(t_quantile_975(31) == doctest::Approx(2.0395134).epsilon(1e-7));
  CHECK(t_quantile_975(1000000) == doctest::Approx(1.959964).epsilon(1e-5));
}
