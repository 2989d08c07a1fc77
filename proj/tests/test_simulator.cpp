#include <catch2/catch_amalgamated.hpp>

#include "fdsched/experiments.hpp"
#include "fdsched/simulator.hpp"
#include "oracles.hpp"

using namespace fdsched;

namespace {

const PolicyFn kGreedy = policy_from_name("greedy");
const PolicyFn kHalfDuplex = policy_from_name("halfduplex");

}  // namespace

TEST_CASE("step leaves queues alone when nothing arrives or departs") {
  const SystemConfig cfg(4, 2, {1, 2});
  const QueueState q({3, 5});
  const PolicyFn idle = [](const QueueState&, const SystemConfig& c) {
    return ScheduleResult{Schedule::all_dummy(c.k_minislots()), 0,
                          PolicyTag::NaiveLQF};
  };
  const StepResult s = step(q, idle, {0, 0}, cfg);
  CHECK(s.next == q);
  CHECK(s.delivered == std::vector<int>{0, 0});
}

TEST_CASE("step clamps at zero when offered rate exceeds the backlog") {
  const SystemConfig cfg(6, 1, {1});
  const QueueState q({1});
  const PolicyFn serve = [](const QueueState& qs, const SystemConfig& c) {
    Schedule f = Schedule::all_dummy(c.k_minislots());
    f.slots[0] = 1;
    return ScheduleResult{f, weight(f, qs, c), PolicyTag::NaiveLQF};
  };
  const StepResult s = step(q, serve, {0}, cfg);  // offered 5, backlog 1
  CHECK(s.offered == std::vector<int>{5});
  CHECK(s.delivered == std::vector<int>{1});
  CHECK(s.next == QueueState({0}));
}

TEST_CASE("step applies the queue recursion componentwise") {
  // Q = (3, 0), A = (0, 4), R = (2, 1) -> Q' = (1, 3)
  const SystemConfig cfg(4, 2, {1, 2});
  const QueueState q({3, 0});
  // schedule (0, 1, 2, 0) offers R = (2, 1)
  const PolicyFn shifted = [](const QueueState& qs, const SystemConfig& c) {
    Schedule f = Schedule::all_dummy(c.k_minislots());
    f.slots[1] = 1;
    f.slots[2] = 2;
    return ScheduleResult{f, weight(f, qs, c), PolicyTag::NaiveLQF};
  };
  const StepResult s = step(q, shifted, {0, 4}, cfg);
  CHECK(s.offered == std::vector<int>{2, 1});
  CHECK(s.next == QueueState({1, 3}));
}

TEST_CASE("step validates arrivals and the policy's schedule") {
  const SystemConfig cfg(3, 1, {1});
  const QueueState q({1});
  CHECK_THROWS_AS(step(q, kGreedy, {-1}, cfg), InvalidInputError);
  CHECK_THROWS_AS(step(q, kGreedy, {1, 2}, cfg), InvalidInputError);
  const PolicyFn broken = [](const QueueState&, const SystemConfig&) {
    return ScheduleResult{Schedule{{7, 7, 7}}, 0, PolicyTag::NaiveLQF};
  };
  CHECK_THROWS_AS(step(q, broken, {0}, cfg), InvalidScheduleError);
}

TEST_CASE("arrival generator respects degenerate rates") {
  const SystemConfig cfg(5, 1, {1, 1, 1});
  ArrivalGenerator none(ArrivalSpec::uniform(3, 0.0, 5), 42);
  ArrivalGenerator all(ArrivalSpec::uniform(3, 1.0, 5), 42);
  for (int t = 0; t < 50; ++t) {
    CHECK(generate_arrivals(none) == std::vector<QueueLen>{0, 0, 0});
    CHECK(generate_arrivals(all) == std::vector<QueueLen>{5, 5, 5});
  }
}

TEST_CASE("arrival empirical mean matches lambda * batch") {
  // lambda = 0.5, batch 15: mean arrival per slot within 7.5 +- 0.15 over 1e5
  // slots (3-sigma of the Bernoulli batch).
  ArrivalGenerator gen(ArrivalSpec::uniform(1, 0.5, 15), 7);
  const std::int64_t slots = 100000;
  std::int64_t sum = 0;
  std::vector<QueueLen> out;
  for (std::int64_t t = 0; t < slots; ++t) {
    gen.generate(t, out);
    sum += out[0];
  }
  const double mean = static_cast<double>(sum) / static_cast<double>(slots);
  CHECK(mean > 7.35);
  CHECK(mean < 7.65);
}

TEST_CASE("run over one idle slot") {
  const SystemConfig cfg(4, 2, {1, 2});
  const SimulationTrace t =
      run(cfg, kGreedy, ArrivalSpec::uniform(2, 0.0, 4), 1, 3);
  CHECK(t.mean_queue == 0.0);
  CHECK(t.total_queue == std::vector<std::int64_t>{0});
}

TEST_CASE("same seed reproduces the trace bit for bit") {
  const SystemConfig cfg = make_regime_config(3);
  const ArrivalSpec spec = ArrivalSpec::uniform(cfg.n_users(), 0.4, 15);
  RunOptions opts;
  opts.record_full = true;
  const SimulationTrace a = run(cfg, kGreedy, spec, 2000, 99, opts);
  const SimulationTrace b = run(cfg, kGreedy, spec, 2000, 99, opts);
  CHECK(a.total_queue == b.total_queue);
  CHECK(a.mean_queue == b.mean_queue);
  CHECK(a.queues == b.queues);
  CHECK(a.arrivals == b.arrivals);
  CHECK(a.delivered == b.delivered);
  REQUIRE(a.schedules.size() == b.schedules.size());
  for (std::size_t i = 0; i < a.schedules.size(); ++i)
    CHECK(a.schedules[i] == b.schedules[i]);

  const SimulationTrace c = run(cfg, kGreedy, spec, 2000, 100, opts);
  CHECK(a.total_queue != c.total_queue);  // different seed, different draws
}

TEST_CASE("queue evolution conserves packets") {
  oracles::InstanceGen igen(0xACC0);
  for (int it = 0; it < 5; ++it) {
    const SystemConfig cfg = igen.config(8, 8, 4);
    const ArrivalSpec spec = ArrivalSpec::uniform(cfg.n_users(), 0.3, cfg.k_minislots());
    RunOptions opts;
    opts.record_full = true;
    const SimulationTrace t = run(cfg, kGreedy, spec, 500, 17 + it, opts);
    for (std::int64_t s = 0; s < t.horizon; ++s) {
      const auto& before = t.queues[static_cast<std::size_t>(s)];
      const auto& after = t.queues[static_cast<std::size_t>(s + 1)];
      const auto& a = t.arrivals[static_cast<std::size_t>(s)];
      const auto& r = t.offered[static_cast<std::size_t>(s)];
      const auto& d = t.delivered[static_cast<std::size_t>(s)];
      for (std::size_t u = 0; u < before.size(); ++u) {
        CHECK(after[u] >= 0);
        CHECK(d[u] == std::min<QueueLen>(r[u], before[u] + a[u]));
        CHECK(after[u] - before[u] == a[u] - d[u]);
        // max-clamp form of the recursion
        CHECK(after[u] == std::max<QueueLen>(before[u] + a[u] - r[u], 0));
      }
    }
  }
}

TEST_CASE("a run inside the parallel driver equals a serial run") {
  const SystemConfig cfg = make_regime_config(3);
  const ArrivalSpec spec = ArrivalSpec::uniform(cfg.n_users(), 0.5, 15);
  const SimulationTrace serial = run(cfg, kGreedy, spec, 3000, 5);
  std::vector<SimulationTrace> results(4);
  parallel_for(4, [&](std::int64_t i) {
    results[static_cast<std::size_t>(i)] = run(cfg, kGreedy, spec, 3000, 5);
  });
  for (const SimulationTrace& t : results) {
    CHECK(t.total_queue == serial.total_queue);
    CHECK(t.mean_queue == serial.mean_queue);
  }
}

TEST_CASE("well-inside-capacity load keeps the backlog flat") {
  // Four singleton groups, K = 15: capacity is 12.5 packets/slot/user, so a
  // scaled rate of 0.3 (4.5 packets/slot) sits well inside.
  const SystemConfig cfg = make_regime_config(3);
  const ArrivalSpec spec = ArrivalSpec::uniform(cfg.n_users(), 0.3, 15);
  const SimulationTrace t = run(cfg, kGreedy, spec, 30000, 11);
  const double slope = queue_growth_slope(t.total_queue, 0.5);
  CHECK(slope < default_stability_criterion(cfg).slope_threshold);
}

TEST_CASE("raising every arrival rate does not lower the mean backlog") {
  // ensemble comparison, not per-seed
  const SystemConfig cfg = make_regime_config(3);
  double low_sum = 0, high_sum = 0;
  const int seeds = 12;
  for (int s = 0; s < seeds; ++s) {
    low_sum += run(cfg, kGreedy, ArrivalSpec::uniform(4, 0.55, 15), 8000,
                   derive_seed(2024, 1, static_cast<std::uint64_t>(s)))
                   .mean_queue;
    high_sum += run(cfg, kGreedy, ArrivalSpec::uniform(4, 0.75, 15), 8000,
                    derive_seed(2024, 1, static_cast<std::uint64_t>(s)))
                    .mean_queue;
  }
  CHECK(high_sum >= low_sum);
}

TEST_CASE("capacity estimation rejects an invalid bracket") {
  const SystemConfig cfg = make_regime_config(3);
  CapacityEstimateOptions opts;
  opts.lambda_lo = 0.95;  // far above capacity: entry check must fail
  opts.lambda_hi = 0.99;
  opts.horizon = 4000;
  CHECK_THROWS_AS(estimate_capacity(cfg, kHalfDuplex, opts, 3),
                  BracketInvalidError);
  CapacityEstimateOptions inverted;
  inverted.lambda_lo = 0.5;
  inverted.lambda_hi = 0.2;
  CHECK_THROWS_AS(estimate_capacity(cfg, kHalfDuplex, inverted, 3),
                  InvalidInputError);
}

TEST_CASE("full batch arrivals on more users than slots are unstable") {
  // N > K with lambda = 1: arrivals N*K per slot exceed any service.
  const SystemConfig cfg = SystemConfig::from_group_sizes(3, {2, 2});
  const ArrivalSpec spec = ArrivalSpec::uniform(4, 1.0, 3);
  const SimulationTrace t = run(cfg, kGreedy, spec, 4000, 1);
  const double slope = queue_growth_slope(t.total_queue, 0.5);
  CHECK(slope > default_stability_criterion(cfg).slope_threshold);
}

TEST_CASE("capacity estimate is seed-robust and brackets the boundary") {
  const SystemConfig cfg = make_regime_config(3);
  CapacityEstimateOptions opts;
  opts.horizon = 30000;
  opts.tolerance = 1.0 / 64;
  const StabilityEstimate a = estimate_capacity(cfg, kHalfDuplex, opts, 21);
  const StabilityEstimate b = estimate_capacity(cfg, kHalfDuplex, opts, 22);
  CHECK(a.boundary > opts.lambda_lo);
  CHECK(a.boundary < opts.lambda_hi);
  CHECK(std::abs(a.boundary - b.boundary) <= 2 * opts.tolerance);
  // half-duplex capacity here is 11 packets/slot/user = lambda 0.733
  CHECK(a.boundary > 0.6);
  CHECK(a.boundary < 0.85);
}

TEST_CASE("maxweight capacity on regime 2 is consistent across seeds") {
  const SystemConfig cfg = make_regime_config(2);
  const PolicyFn mw = policy_from_name("maxweight");
  CapacityEstimateOptions opts;
  opts.horizon = 30000;
  opts.tolerance = 1.0 / 64;
  const StabilityEstimate a = estimate_capacity(cfg, mw, opts, 101);
  const StabilityEstimate b = estimate_capacity(cfg, mw, opts, 202);
  CHECK(std::abs(a.boundary - b.boundary) <= 2 * opts.tolerance);
}

TEST_CASE("arrival spec validation") {
  const SystemConfig cfg(4, 1, {1});
  CHECK_THROWS_AS(run(cfg, kGreedy, ArrivalSpec{{1.5}, 4}, 10, 1),
                  InvalidInputError);
  CHECK_THROWS_AS(run(cfg, kGreedy, ArrivalSpec{{0.5}, 0}, 10, 1),
                  InvalidInputError);
  CHECK_THROWS_AS(run(cfg, kGreedy, ArrivalSpec{{0.5, 0.5}, 4}, 10, 1),
                  InvalidInputError);
  CHECK_THROWS_AS(run(cfg, kGreedy, ArrivalSpec::uniform(1, 0.5, 4), 0, 1),
                  InvalidInputError);
}

TEST_CASE("greedy capacity dominates half-duplex capacity") {
  const SystemConfig cfg = make_regime_config(3);
  CapacityEstimateOptions opts;
  opts.horizon = 30000;
  opts.tolerance = 1.0 / 64;
  const double greedy = estimate_capacity(cfg, kGreedy, opts, 33).boundary;
  const double hd = estimate_capacity(cfg, kHalfDuplex, opts, 33).boundary;
  CHECK(greedy >= hd - 2 * opts.tolerance);
}
