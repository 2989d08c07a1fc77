#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "fdsched/analytics.hpp"
#include "fdsched/simulator.hpp"

namespace fdsched {

// Index-parallel map: thread j handles indices j, j+T, j+2T, ... Results are
// written by index, so output never depends on completion order. The first
// worker exception is rethrown on the calling thread after the join.
template <class Fn>
void parallel_for(std::int64_t n, Fn fn, unsigned threads = 0) {
  if (threads == 0) threads = std::thread::hardware_concurrency();
  if (threads <= 1 || n <= 1) {
    for (std::int64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const unsigned t_count = static_cast<unsigned>(
      std::min<std::int64_t>(n, static_cast<std::int64_t>(threads)));
  std::vector<std::thread> pool;
  pool.reserve(t_count);
  std::exception_ptr error;
  std::mutex error_mutex;
  for (unsigned t = 0; t < t_count; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::int64_t i = t; i < n; i += t_count) fn(i);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

// Reference group layouts for the throughput experiments: four groups,
// K = 15, spanning the many-user, moderate and few-user operating points.
struct RegimeSpec {
  int id;
  std::vector<int> group_sizes;
  int k_minislots;
};

inline RegimeSpec regime_spec(int id) {
  switch (id) {
    case 1: return RegimeSpec{1, {8, 5, 6, 1}, 15};
    case 2: return RegimeSpec{2, {3, 2, 2, 3}, 15};
    case 3: return RegimeSpec{3, {1, 1, 1, 1}, 15};
    default: throw InvalidInputError("regime id must be 1, 2 or 3");
  }
}

inline SystemConfig make_regime_config(int id) {
  const RegimeSpec spec = regime_spec(id);
  return SystemConfig::from_group_sizes(spec.k_minislots, spec.group_sizes);
}

// Uniform independent group assignment; empty groups can and do occur.
inline SystemConfig random_group_config(int n_users, int n_groups,
                                        int k_minislots, std::uint64_t seed) {
  const std::uint64_t s = derive_seed(seed, streams::kGroupAssignment);
  std::vector<GroupId> assignment(static_cast<std::size_t>(n_users));
  for (std::size_t u = 0; u < assignment.size(); ++u) {
    const std::uint64_t bits = counter_draw(s, 1, u);
    assignment[u] = static_cast<GroupId>(
        bits % static_cast<std::uint64_t>(n_groups) + 1);
  }
  return SystemConfig(k_minislots, n_groups, std::move(assignment));
}

// Worst-case family for the greedy policy: K = 2^r mini-slots, K - 1 groups
// with K unit-queue users each. The selection search serves one user per
// group for a weight of K(K-1)/2, while the greedy policy packs K/2 users
// from the first group, K/4 from the second, ... for (K^2-1)/3.
struct TightnessRow {
  int k;
  Weight optimal;
  Weight greedy;
  Rational ratio;  // greedy / optimal = 2(K+1) / 3K
};

inline SystemConfig tightness_config(int k) {
  return SystemConfig::from_group_sizes(k, std::vector<int>(
                                               static_cast<std::size_t>(k - 1), k));
}

inline TightnessRow tightness_row(int r) {
  if (r < 1 || r > 10)
    throw InvalidInputError("tightness exponent r must lie in 1..10");
  const int k = 1 << r;
  const SystemConfig cfg = tightness_config(k);
  const QueueState q(std::vector<QueueLen>(
      static_cast<std::size_t>(cfg.n_users()), 1));
  const ScheduleResult greedy = greedy_mgg(q, cfg);
  const Weight optimal = static_cast<Weight>(k) * (k - 1) / 2;
  return TightnessRow{k, optimal, greedy.weight,
                      Rational(greedy.weight, optimal)};
}

inline std::vector<TightnessRow> tightness_table(int max_r) {
  if (max_r > 10) throw InstanceTooLargeError("tightness table capped at r = 10");
  std::vector<TightnessRow> rows;
  for (int r = 2; r <= max_r; ++r) rows.push_back(tightness_row(r));
  return rows;
}

// Mean backlog and stability verdict across an arrival grid for one policy.
struct SweepPoint {
  double lambda;
  double mean_queue;
  double slope;
  bool stable;
};

struct SweepOptions {
  std::int64_t horizon = 20000;
  int batch_size = 0;  // 0 = use K
  double slope_threshold = -1.0;
  double measure_fraction = 0.5;
  unsigned threads = 0;
};

inline std::vector<SweepPoint> lambda_sweep(const SystemConfig& cfg,
                                            const PolicyFn& policy,
                                            const std::vector<double>& grid,
                                            const SweepOptions& opts,
                                            std::uint64_t seed) {
  const int batch = opts.batch_size > 0 ? opts.batch_size : cfg.k_minislots();
  const double threshold = opts.slope_threshold >= 0
                               ? opts.slope_threshold
                               : 0.01 * cfg.k_minislots();
  std::vector<SweepPoint> points(grid.size());
  RunOptions run_opts;
  run_opts.measure_fraction = opts.measure_fraction;
  parallel_for(
      static_cast<std::int64_t>(grid.size()),
      [&](std::int64_t i) {
        const double lambda = grid[static_cast<std::size_t>(i)];
        const ArrivalSpec spec = ArrivalSpec::uniform(cfg.n_users(), lambda, batch);
        SimulationTrace trace = run(cfg, policy, spec, opts.horizon, seed, run_opts);
        const double slope =
            queue_growth_slope(trace.total_queue, opts.measure_fraction);
        points[static_cast<std::size_t>(i)] =
            SweepPoint{lambda, trace.mean_queue, slope, slope < threshold};
      },
      opts.threads);
  return points;
}

// Capacity-gain distribution over random group assignments: per sample,
// bisect the capacity boundary of the chosen full-duplex policy and of the
// half-duplex baseline (same seed, coupled arrival draws) and record the
// ratio.
struct CdfParams {
  int n_users = 10;
  int n_groups = 4;
  int k_minislots = 15;
  int samples = 200;
  std::string fd_policy = "maxweight";
  CapacityEstimateOptions estimate;
  std::uint64_t seed = 1;
  unsigned threads = 0;
};

struct CdfSample {
  std::vector<int> group_sizes;
  double fd_boundary;
  double hd_boundary;
  double gain;
};

struct CdfResult {
  std::vector<CdfSample> samples;       // in sample order
  std::vector<double> sorted_gains;     // ascending; CDF_i = (i+1)/n
  double median = 0.0;
  double fraction_at_least(double g) const {
    const auto it =
        std::lower_bound(sorted_gains.begin(), sorted_gains.end(), g);
    return static_cast<double>(sorted_gains.end() - it) /
           static_cast<double>(sorted_gains.size());
  }
};

inline CdfResult gain_cdf(const CdfParams& params) {
  if (params.samples < 1) throw InvalidInputError("samples must be >= 1");
  const PolicyFn fd = policy_from_name(params.fd_policy);
  const PolicyFn hd = policy_from_name("halfduplex");

  CdfResult result;
  result.samples.resize(static_cast<std::size_t>(params.samples));
  parallel_for(
      params.samples,
      [&](std::int64_t s) {
        const std::uint64_t sample_seed =
            derive_seed(params.seed, streams::kCdfSample, static_cast<std::uint64_t>(s));
        const SystemConfig cfg =
            random_group_config(params.n_users, params.n_groups,
                                params.k_minislots, sample_seed);
        const StabilityEstimate fd_est =
            estimate_capacity(cfg, fd, params.estimate, sample_seed);
        const StabilityEstimate hd_est =
            estimate_capacity(cfg, hd, params.estimate, sample_seed);
        CdfSample& out = result.samples[static_cast<std::size_t>(s)];
        out.group_sizes.resize(static_cast<std::size_t>(params.n_groups));
        for (int g = 1; g <= params.n_groups; ++g)
          out.group_sizes[static_cast<std::size_t>(g - 1)] = cfg.group_size(g);
        out.fd_boundary = fd_est.boundary;
        out.hd_boundary = hd_est.boundary;
        out.gain = fd_est.boundary / hd_est.boundary;
      },
      params.threads);

  result.sorted_gains.reserve(result.samples.size());
  for (const CdfSample& s : result.samples)
    result.sorted_gains.push_back(s.gain);
  std::sort(result.sorted_gains.begin(), result.sorted_gains.end());
  const std::size_t n = result.sorted_gains.size();
  result.median = n % 2 == 1
                      ? result.sorted_gains[n / 2]
                      : 0.5 * (result.sorted_gains[n / 2 - 1] +
                               result.sorted_gains[n / 2]);
  return result;
}

// Capacity boundaries per policy for one regime, averaged over seeds.
struct RegimeCapacity {
  int regime;
  std::vector<double> maxweight;   // one boundary per seed
  std::vector<double> greedy;
  std::vector<double> halfduplex;
  double maxweight_mean = 0.0;
  double greedy_mean = 0.0;
  double halfduplex_mean = 0.0;
  double fd_hd_ratio = 0.0;        // maxweight_mean / halfduplex_mean
  double greedy_mw_gap = 0.0;      // |greedy - maxweight| / maxweight
};

inline RegimeCapacity regime_capacity(int regime_id,
                                      const CapacityEstimateOptions& opts,
                                      const std::vector<std::uint64_t>& seeds,
                                      unsigned threads = 0) {
  const SystemConfig cfg = make_regime_config(regime_id);
  const char* names[3] = {"maxweight", "greedy", "halfduplex"};
  RegimeCapacity out;
  out.regime = regime_id;
  out.maxweight.resize(seeds.size());
  out.greedy.resize(seeds.size());
  out.halfduplex.resize(seeds.size());

  const std::int64_t jobs = static_cast<std::int64_t>(seeds.size()) * 3;
  parallel_for(
      jobs,
      [&](std::int64_t j) {
        const std::size_t seed_idx = static_cast<std::size_t>(j / 3);
        const int policy_idx = static_cast<int>(j % 3);
        const PolicyFn policy = policy_from_name(names[policy_idx]);
        const StabilityEstimate est =
            estimate_capacity(cfg, policy, opts, seeds[seed_idx]);
        if (policy_idx == 0)
          out.maxweight[seed_idx] = est.boundary;
        else if (policy_idx == 1)
          out.greedy[seed_idx] = est.boundary;
        else
          out.halfduplex[seed_idx] = est.boundary;
      },
      threads);

  auto mean = [](const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  out.maxweight_mean = mean(out.maxweight);
  out.greedy_mean = mean(out.greedy);
  out.halfduplex_mean = mean(out.halfduplex);
  out.fd_hd_ratio = out.maxweight_mean / out.halfduplex_mean;
  out.greedy_mw_gap =
      std::abs(out.greedy_mean - out.maxweight_mean) / out.maxweight_mean;
  return out;
}

// Gain-curve tables behind the CSV emitters.
struct GainCurvePoint {
  Rational alpha;
  std::int64_t n_groups;
  CapacityPoint point;
};

inline std::vector<GainCurvePoint> gain_curve_over_alpha(
    const std::vector<Rational>& alphas, std::int64_t n_groups) {
  std::vector<GainCurvePoint> out;
  out.reserve(alphas.size());
  for (const Rational& a : alphas)
    out.push_back(GainCurvePoint{a, n_groups, fd_gain(GainParams{a, n_groups})});
  return out;
}

inline std::vector<GainCurvePoint> gain_curve_over_groups(
    const Rational& alpha, std::int64_t i_lo, std::int64_t i_hi) {
  if (i_lo < 1 || i_hi < i_lo)
    throw InvalidInputError("group range must satisfy 1 <= i_lo <= i_hi");
  std::vector<GainCurvePoint> out;
  out.reserve(static_cast<std::size_t>(i_hi - i_lo + 1));
  for (std::int64_t i = i_lo; i <= i_hi; ++i)
    out.push_back(GainCurvePoint{alpha, i, fd_gain(GainParams{alpha, i})});
  return out;
}

}  // namespace fdsched
