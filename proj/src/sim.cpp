#include "aoi/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <limits>
#include <optional>
#include <queue>
#include <string>

#include <boost/math/distributions/students_t.hpp>

#include "aoi/parallel.hpp"
#include "aoi/rng.hpp"

namespace aoi {

unsigned default_threads() {
  if (const char* env = std::getenv("AOI_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

SimParams default_sim_params(NetworkConfig config, double horizon, std::uint64_t seed) {
  SimParams p;
  p.config = std::move(config);
  p.horizon = horizon;
  p.warmup = 0.01 * horizon;
  p.seed = seed;
  p.batches = 32;
  return p;
}

double t_quantile_975(int dof) {
  if (dof < 1) return std::numeric_limits<double>::infinity();
  boost::math::students_t dist(static_cast<double>(dof));
  return boost::math::quantile(dist, 0.975);
}

void check_sim_params(const SimParams& p) {
  auto problems = validate(p.config);
  if (!problems.empty()) throw SimulationError("invalid config: " + problems.front());
  if (!std::isfinite(p.horizon) || !(p.horizon > 0.0)) {
    throw SimulationError("horizon must be positive");
  }
  if (!std::isfinite(p.warmup) || p.warmup < 0.0 || p.warmup >= p.horizon) {
    throw SimulationError("warmup must lie in [0, horizon)");
  }
  if (p.batches < 1) throw SimulationError("batches must be at least 1");
  if (p.config.discipline == QueueDiscipline::Fcfs) {
    for (int j = 0; j < p.config.num_servers; ++j) {
      if (p.config.server_load(j) >= p.config.service_rates[j]) {
        throw SimulationError("fcfs server " + std::to_string(j + 1) +
                              " is unstable (arrival rate >= service rate)");
      }
    }
  }
}

namespace {

struct Update {
  int source;
  double generated;
};

struct Event {
  double time;
  std::uint64_t seq;
  EventKind kind;
  int index;  // arrival stream or server
  std::uint64_t version;
};

struct EventLater {
  bool operator()(const Event& a, const Event& b) const {
    if (a.time != b.time) return a.time > b.time;
    return a.seq > b.seq;
  }
};

struct Server {
  std::optional<Update> in_service;
  std::optional<Update> waiting;
  std::deque<Update> fifo;
  std::uint64_t version = 0;
};

constexpr std::uint64_t kServiceStreamBase = 1ULL << 32;

class Simulation {
 public:
  Simulation(const SimParams& p, const EventObserver& observer)
      : p_(p),
        cfg_(p.config),
        observer_(observer),
        m_(cfg_.num_sources),
        n_(cfg_.num_servers),
        servers_(n_),
        freshest_(m_, 0.0),
        batch_area_(static_cast<std::size_t>(p.batches), std::vector<double>(m_, 0.0)),
        total_area_(m_, 0.0),
        batch_len_((p.horizon - p.warmup) / p.batches) {
    for (int i = 0; i < m_; ++i) {
      for (int j = 0; j < n_; ++j) {
        arrival_rng_.push_back(CounterRng::stream(p.seed, 1 + static_cast<std::uint64_t>(i * n_ + j)));
      }
    }
    for (int j = 0; j < n_; ++j) {
      service_rng_.push_back(CounterRng::stream(p.seed, kServiceStreamBase + j));
    }
  }

  SimResult run() {
    for (int s = 0; s < m_ * n_; ++s) schedule_arrival(s, 0.0);
    while (!events_.empty() && events_.top().time <= p_.horizon) {
      Event e = events_.top();
      events_.pop();
      if (e.kind == EventKind::Completion && e.version != servers_[e.index].version) continue;
      integrate(now_, e.time);
      now_ = e.time;
      ++processed_;
      if (observer_) observer_(e.time, e.kind);
      if (e.kind == EventKind::Arrival) {
        on_arrival(e.index);
      } else {
        on_completion(e.index);
      }
    }
    integrate(now_, p_.horizon);
    return finish();
  }

 private:
  void push(double time, EventKind kind, int index, std::uint64_t version = 0) {
    events_.push({time, seq_++, kind, index, version});
  }

  void schedule_arrival(int stream, double from) {
    const int i = stream / n_, j = stream % n_;
    const double rate = cfg_.arrival_rates[i][j];
    if (rate <= 0.0) return;
    push(from + arrival_rng_[stream].exponential(rate), EventKind::Arrival, stream);
  }

  void start_service(int j, Update u) {
    Server& s = servers_[j];
    s.in_service = u;
    ++s.version;
    push(now_ + service_rng_[j].exponential(cfg_.service_rates[j]), EventKind::Completion, j,
         s.version);
  }

  void on_arrival(int stream) {
    const int i = stream / n_, j = stream % n_;
    Update u{i, now_};
    Server& s = servers_[j];
    switch (cfg_.discipline) {
      case QueueDiscipline::LcfsPreemptService:
        start_service(j, u);
        break;
      case QueueDiscipline::LcfsPreemptWaiting:
        if (s.in_service) {
          s.waiting = u;
        } else {
          start_service(j, u);
        }
        break;
      case QueueDiscipline::Fcfs:
        if (s.in_service) {
          s.fifo.push_back(u);
        } else {
          start_service(j, u);
        }
        break;
    }
    schedule_arrival(stream, now_);
  }

  void on_completion(int j) {
    Server& s = servers_[j];
    Update done = *s.in_service;
    s.in_service.reset();
    ++s.version;
    deliver(done);
    if (s.waiting) {
      Update next = *s.waiting;
      s.waiting.reset();
      start_service(j, next);
    } else if (!s.fifo.empty()) {
      Update next = s.fifo.front();
      s.fifo.pop_front();
      start_service(j, next);
    }
  }

  void deliver(const Update& u) {
    const bool counted = now_ > p_.warmup;
    if (counted) ++deliveries_;
    if (u.generated > freshest_[u.source]) {
      freshest_[u.source] = u.generated;
      if (counted) ++useful_;
    } else if (counted) {
      ++stale_;
    }
  }

  double batch_end(std::size_t k) const {
    return k + 1 == batch_area_.size() ? p_.horizon
                                       : p_.warmup + static_cast<double>(k + 1) * batch_len_;
  }

  // Age of source i is t - freshest_[i]; exact trapezoid over each piece.
  void integrate(double a, double b) {
    a = std::max(a, p_.warmup);
    b = std::min(b, p_.horizon);
    while (a < b) {
      while (a >= batch_end(batch_) && batch_ + 1 < batch_area_.size()) ++batch_;
      const double e = batch_ + 1 == batch_area_.size() ? b : std::min(b, batch_end(batch_));
      for (int i = 0; i < m_; ++i) {
        const double area = (e - a) * 0.5 * ((a - freshest_[i]) + (e - freshest_[i]));
        batch_area_[batch_][i] += area;
        total_area_[i] += area;
      }
      a = e;
    }
  }

  SimResult finish() const {
    SimResult r;
    const double window = p_.horizon - p_.warmup;
    const int batches = p_.batches;
    const double t = t_quantile_975(batches - 1);
    for (int i = 0; i < m_; ++i) {
      r.aoi.push_back(total_area_[i] / window);
      r.integrated_age.push_back(total_area_[i]);
      if (batches < 2) {
        r.ci_half_width.push_back(std::numeric_limits<double>::infinity());
        continue;
      }
      double mean = 0.0;
      for (int k = 0; k < batches; ++k) mean += batch_area_[k][i] / batch_len_;
      mean /= batches;
      double ss = 0.0;
      for (int k = 0; k < batches; ++k) {
        const double d = batch_area_[k][i] / batch_len_ - mean;
        ss += d * d;
      }
      r.ci_half_width.push_back(t * std::sqrt(ss / (batches - 1) / batches));
    }
    r.deliveries = deliveries_;
    r.useful_deliveries = useful_;
    r.discarded_stale = stale_;
    r.events = processed_;
    r.horizon = p_.horizon;
    r.warmup = p_.warmup;
    r.seed = p_.seed;
    r.replications = 1;
    return r;
  }

  const SimParams& p_;
  const NetworkConfig& cfg_;
  const EventObserver& observer_;
  const int m_;
  const int n_;
  std::vector<Server> servers_;
  std::vector<CounterRng> arrival_rng_;
  std::vector<CounterRng> service_rng_;
  std::priority_queue<Event, std::vector<Event>, EventLater> events_;
  std::uint64_t seq_ = 0;
  double now_ = 0.0;
  std::vector<double> freshest_;
  std::vector<std::vector<double>> batch_area_;
  std::vector<double> total_area_;
  const double batch_len_;
  std::size_t batch_ = 0;
  std::uint64_t deliveries_ = 0;
  std::uint64_t useful_ = 0;
  std::uint64_t stale_ = 0;
  std::uint64_t processed_ = 0;
};

}  // namespace

SimResult simulate(const SimParams& params, const EventObserver& observer) {
  check_sim_params(params);
  return Simulation(params, observer).run();
}

SimResult replicate(const SimParams& params, int replications, unsigned threads) {
  if (replications < 1) throw SimulationError("replications must be at least 1");
  check_sim_params(params);
  if (replications == 1) return simulate(params);

  std::vector<SimResult> runs(static_cast<std::size_t>(replications));
  parallel_for(runs.size(), threads, [&](std::size_t k) {
    SimParams p = params;
    p.seed = params.seed + k;
    runs[k] = simulate(p);
  });

  const std::size_t m = runs.front().aoi.size();
  const double r = replications;
  const double t = t_quantile_975(replications - 1);
  SimResult out;
  out.horizon = params.horizon;
  out.warmup = params.warmup;
  out.seed = params.seed;
  out.replications = replications;
  for (std::size_t i = 0; i < m; ++i) {
    double mean = 0.0, area = 0.0;
    for (const auto& run : runs) {
      mean += run.aoi[i];
      area += run.integrated_age[i];
    }
    mean /= r;
    double ss = 0.0;
    for (const auto& run : runs) ss += (run.aoi[i] - mean) * (run.aoi[i] - mean);
    out.aoi.push_back(mean);
    out.integrated_age.push_back(area / r);
    out.ci_half_width.push_back(t * std::sqrt(ss / (r - 1.0) / r));
  }
  for (const auto& run : runs) {
    out.deliveries += run.deliveries;
    out.useful_deliveries += run.useful_deliveries;
    out.discarded_stale += run.discarded_stale;
    out.events += run.events;
  }
  return out;
}

}  // namespace aoi
