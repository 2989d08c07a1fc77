#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "fdsched/rng.hpp"
#include "fdsched/schedulers.hpp"

namespace fdsched {

// I.i.d. batch arrivals: user u receives batch_size packets with probability
// per_user_rate[u-1] in each slot, 0 otherwise.
struct ArrivalSpec {
  std::vector<double> per_user_rate;
  int batch_size = 1;

  static ArrivalSpec uniform(int n_users, double lambda, int batch) {
    return ArrivalSpec{
        std::vector<double>(static_cast<std::size_t>(n_users), lambda), batch};
  }

  void validate(const SystemConfig& cfg) const {
    if (static_cast<int>(per_user_rate.size()) != cfg.n_users())
      throw InvalidInputError("arrival spec covers " +
                              std::to_string(per_user_rate.size()) +
                              " users, config has " +
                              std::to_string(cfg.n_users()));
    for (double r : per_user_rate)
      if (!(r >= 0.0 && r <= 1.0))
        throw InvalidInputError("arrival rates must lie in [0, 1]");
    if (batch_size < 1) throw InvalidInputError("batch_size must be >= 1");
  }
};

// Deterministic arrival stream. Draw (u, t) depends only on (seed, u, t);
// generate_next() walks the slot counter like a conventional stateful RNG.
class ArrivalGenerator {
 public:
  ArrivalGenerator(ArrivalSpec spec, std::uint64_t seed)
      : spec_(std::move(spec)), seed_(derive_seed(seed, streams::kArrivals)) {}

  void generate(std::int64_t slot, std::vector<QueueLen>& out) const {
    out.resize(spec_.per_user_rate.size());
    for (std::size_t u = 0; u < out.size(); ++u) {
      const double x = uniform01(
          counter_draw(seed_, u + 1, static_cast<std::uint64_t>(slot)));
      out[u] = x < spec_.per_user_rate[u] ? spec_.batch_size : 0;
    }
  }

  std::vector<QueueLen> generate_next() {
    std::vector<QueueLen> out;
    generate(next_slot_++, out);
    return out;
  }

  const ArrivalSpec& spec() const { return spec_; }

 private:
  ArrivalSpec spec_;
  std::uint64_t seed_;
  std::int64_t next_slot_ = 0;
};

inline std::vector<QueueLen> generate_arrivals(ArrivalGenerator& gen) {
  return gen.generate_next();
}

struct StepResult {
  QueueState next;
  Schedule schedule;
  std::vector<int> offered;    // R_u under the policy's service model
  std::vector<int> delivered;  // min(R_u, Q_u + A_u): cannot serve packets that are not there
};

// One slot of queue evolution: the policy sees Q[t] before arrivals, then
// Q[t+1]_u = max(Q_u + A_u - R_u, 0) componentwise.
inline StepResult step(const QueueState& q, const PolicyFn& policy,
                       const std::vector<QueueLen>& arrivals,
                       const SystemConfig& cfg) {
  check_dims(q, cfg);
  if (arrivals.size() != q.values().size())
    throw InvalidInputError("arrival vector length mismatch");
  for (QueueLen a : arrivals)
    if (a < 0) throw InvalidInputError("arrivals must be nonnegative");

  ScheduleResult r = policy(q, cfg);
  std::vector<int> offered = realized_rates(r, cfg);

  std::vector<QueueLen> next(q.values());
  std::vector<int> delivered(offered.size());
  for (std::size_t i = 0; i < next.size(); ++i) {
    const QueueLen avail = next[i] + arrivals[i];
    delivered[i] = static_cast<int>(std::min<QueueLen>(offered[i], avail));
    next[i] = avail - delivered[i];
  }
  return StepResult{QueueState(std::move(next)), std::move(r.schedule),
                    std::move(offered), std::move(delivered)};
}

struct RunOptions {
  // Fraction of the horizon, at the end, over which mean_queue is averaged.
  double measure_fraction = 0.5;
  // Record per-slot queues/arrivals/rates/schedules (memory ~ horizon * N).
  bool record_full = false;
  // Starting backlog; empty = all zeros.
  std::vector<QueueLen> initial_queues;
};

struct SimulationTrace {
  std::int64_t horizon = 0;
  std::uint64_t rng_seed = 0;
  std::int64_t measure_begin = 0;        // first slot of the averaging window
  std::vector<std::int64_t> total_queue; // sum_u Q_u[t] at slot start, t = 0..horizon-1
  double mean_queue = 0.0;               // time average of total backlog over the window

  // Filled only when RunOptions::record_full is set.
  std::vector<std::vector<QueueLen>> queues;  // Q[t], t = 0..horizon (includes final state)
  std::vector<std::vector<QueueLen>> arrivals;
  std::vector<Schedule> schedules;
  std::vector<std::vector<int>> offered;
  std::vector<std::vector<int>> delivered;
};

// Discrete-time simulation of the downlink under `policy`. Deterministic in
// (config, policy, spec, horizon, seed): same inputs give bit-identical
// traces.
inline SimulationTrace run(const SystemConfig& cfg, const PolicyFn& policy,
                           const ArrivalSpec& spec, std::int64_t horizon,
                           std::uint64_t seed, const RunOptions& opts = {}) {
  spec.validate(cfg);
  if (horizon < 1) throw InvalidInputError("horizon must be >= 1");

  SimulationTrace trace;
  trace.horizon = horizon;
  trace.rng_seed = seed;
  trace.measure_begin =
      horizon - static_cast<std::int64_t>(
                    static_cast<double>(horizon) * opts.measure_fraction);
  if (trace.measure_begin >= horizon) trace.measure_begin = horizon - 1;
  trace.total_queue.reserve(static_cast<std::size_t>(horizon));

  std::vector<QueueLen> q = opts.initial_queues.empty()
                                ? std::vector<QueueLen>(
                                      static_cast<std::size_t>(cfg.n_users()), 0)
                                : opts.initial_queues;
  if (static_cast<int>(q.size()) != cfg.n_users())
    throw InvalidInputError("initial queue vector length mismatch");

  ArrivalGenerator gen(spec, seed);
  std::vector<QueueLen> arrivals;
  std::int64_t window_sum = 0;

  if (opts.record_full) trace.queues.push_back(q);

  for (std::int64_t t = 0; t < horizon; ++t) {
    QueueState state(q);
    std::int64_t total = state.total();
    trace.total_queue.push_back(total);
    if (t >= trace.measure_begin) window_sum += total;

    gen.generate(t, arrivals);
    StepResult s = step(state, policy, arrivals, cfg);
    q = s.next.values();

    if (opts.record_full) {
      trace.arrivals.push_back(arrivals);
      trace.schedules.push_back(std::move(s.schedule));
      trace.offered.push_back(std::move(s.offered));
      trace.delivered.push_back(std::move(s.delivered));
      trace.queues.push_back(q);
    }
  }
  trace.mean_queue = static_cast<double>(window_sum) /
                     static_cast<double>(horizon - trace.measure_begin);
  return trace;
}

// Least-squares slope of total backlog vs. time over the trailing
// measure_fraction of the series, in packets per slot.
inline double queue_growth_slope(const std::vector<std::int64_t>& total_queue,
                                 double measure_fraction) {
  const std::size_t n = total_queue.size();
  std::size_t begin = n - static_cast<std::size_t>(
                              static_cast<double>(n) * measure_fraction);
  if (begin >= n) begin = n - 1;
  const std::size_t len = n - begin;
  if (len < 2) return 0.0;

  long double sum_t = 0, sum_q = 0;
  for (std::size_t i = begin; i < n; ++i) {
    sum_t += static_cast<long double>(i);
    sum_q += static_cast<long double>(total_queue[i]);
  }
  const long double mean_t = sum_t / static_cast<long double>(len);
  const long double mean_q = sum_q / static_cast<long double>(len);
  long double cov = 0, var = 0;
  for (std::size_t i = begin; i < n; ++i) {
    const long double dt = static_cast<long double>(i) - mean_t;
    cov += dt * (static_cast<long double>(total_queue[i]) - mean_q);
    var += dt * dt;
  }
  return static_cast<double>(cov / var);
}

// Stability verdict: a run counts as stable iff the least-squares growth
// slope of its total backlog stays below the threshold. Finite-horizon proxy
// for positive recurrence; the threshold is an artifact choice recorded in
// every output.
struct StabilityCriterion {
  double slope_threshold;  // packets per slot
  double measure_fraction = 0.5;
};

inline StabilityCriterion default_stability_criterion(const SystemConfig& cfg) {
  return StabilityCriterion{0.01 * cfg.k_minislots(), 0.5};
}

struct ProbeOutcome {
  double lambda;
  double slope;
  double mean_queue;
  bool stable;
};

struct StabilityEstimate {
  double lambda_lo = 0.0;  // initial bracket, verified stable at entry
  double lambda_hi = 0.0;  // initial bracket, verified unstable at entry
  double boundary = 0.0;   // estimated largest stable lambda
  StabilityCriterion criterion{0.0, 0.5};
  std::int64_t horizon = 0;
  int batch_size = 0;
  std::uint64_t seed = 0;
  std::vector<ProbeOutcome> probes;
};

struct CapacityEstimateOptions {
  double lambda_lo = 0.02;
  double lambda_hi = 0.98;
  double tolerance = 1.0 / 256;
  std::int64_t horizon = 200000;
  int batch_size = 0;            // 0 = use K
  double slope_threshold = -1.0; // < 0 = 0.01 * K
  double measure_fraction = 0.5;
};

// Bisection on the symmetric arrival probability lambda for the largest
// stable point under `policy`. All probes reuse the same seed, so raising
// lambda only adds arrival events (coupled draws) and the verdict map stays
// monotone along the bisection path.
inline StabilityEstimate estimate_capacity(const SystemConfig& cfg,
                                           const PolicyFn& policy,
                                           const CapacityEstimateOptions& opts,
                                           std::uint64_t seed) {
  if (!(opts.tolerance > 0)) throw InvalidInputError("tolerance must be > 0");
  if (!(opts.lambda_lo < opts.lambda_hi))
    throw InvalidInputError("bracket must satisfy lambda_lo < lambda_hi");

  StabilityEstimate est;
  est.lambda_lo = opts.lambda_lo;
  est.lambda_hi = opts.lambda_hi;
  est.horizon = opts.horizon;
  est.batch_size = opts.batch_size > 0 ? opts.batch_size : cfg.k_minislots();
  est.seed = seed;
  est.criterion.slope_threshold = opts.slope_threshold >= 0
                                      ? opts.slope_threshold
                                      : 0.01 * cfg.k_minislots();
  est.criterion.measure_fraction = opts.measure_fraction;

  RunOptions run_opts;
  run_opts.measure_fraction = opts.measure_fraction;

  auto probe = [&](double lambda) {
    const ArrivalSpec spec =
        ArrivalSpec::uniform(cfg.n_users(), lambda, est.batch_size);
    SimulationTrace trace = run(cfg, policy, spec, opts.horizon, seed, run_opts);
    const double slope =
        queue_growth_slope(trace.total_queue, opts.measure_fraction);
    const bool stable = slope < est.criterion.slope_threshold;
    est.probes.push_back(ProbeOutcome{lambda, slope, trace.mean_queue, stable});
    return stable;
  };

  if (!probe(opts.lambda_lo))
    throw BracketInvalidError("lambda_lo verified unstable at entry");
  if (probe(opts.lambda_hi))
    throw BracketInvalidError("lambda_hi verified stable at entry");

  double lo = opts.lambda_lo;
  double hi = opts.lambda_hi;
  while (hi - lo > opts.tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (probe(mid))
      lo = mid;
    else
      hi = mid;
  }
  est.boundary = 0.5 * (lo + hi);
  return est;
}

}  // namespace fdsched
