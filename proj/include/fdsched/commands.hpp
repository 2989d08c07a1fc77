#pragma once

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fdsched/config.hpp"
#include "fdsched/csv.hpp"
#include "fdsched/experiments.hpp"
#include "fdsched/version.hpp"

namespace fdsched {

// Flag-level overrides applied on top of the config file.
struct CliOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> horizon;
  std::optional<std::int64_t> samples;
  std::optional<std::string> out;
  bool paper_scale = false;
  unsigned threads = 0;
};

namespace detail {

// System definition shared by the experiment configs: either `regime = 1..3`,
// or `group_sizes = [...]` + `k_minislots`, or an explicit per-user
// `groups = [...]` + `k_minislots` (+ optional `n_groups`).
inline SystemConfig parse_system(ConfigFile& cfg) {
  if (cfg.has("regime"))
    return make_regime_config(static_cast<int>(cfg.get_int("regime")));
  if (cfg.has("group_sizes")) {
    const std::vector<std::int64_t> sizes = cfg.get_int_list("group_sizes");
    std::vector<int> s(sizes.begin(), sizes.end());
    return SystemConfig::from_group_sizes(
        static_cast<int>(cfg.get_int("k_minislots")), s);
  }
  if (cfg.has("groups")) {
    const std::vector<std::int64_t> groups = cfg.get_int_list("groups");
    std::vector<GroupId> assignment(groups.begin(), groups.end());
    std::int64_t max_g = 1;
    for (std::int64_t g : groups) max_g = std::max(max_g, g);
    const int n_groups =
        static_cast<int>(cfg.get_int_or("n_groups", max_g));
    return SystemConfig(static_cast<int>(cfg.get_int("k_minislots")), n_groups,
                        std::move(assignment));
  }
  throw ConfigError(cfg.source() +
                    ": define the system via 'regime', 'group_sizes' or 'groups'");
}

inline void check_kind(ConfigFile& cfg, const std::string& command) {
  if (!cfg.has("kind")) return;
  const std::string kind = cfg.get_string("kind");
  if (kind != command)
    throw ConfigError(cfg.source() + ": config kind '" + kind +
                      "' does not match command '" + command + "'");
}

inline std::string group_sizes_string(const SystemConfig& cfg) {
  std::string out;
  for (int g = 1; g <= cfg.n_groups(); ++g) {
    if (g > 1) out += '|';
    out += std::to_string(cfg.group_size(g));
  }
  return out;
}

// Data sink: file when a path is configured, otherwise the fallback stream.
class OutputSink {
 public:
  OutputSink(const std::string& path, std::ostream& fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw ConfigError("cannot open output file '" + path + "'");
    } else {
      stream_ = &fallback;
    }
  }
  std::ostream& stream() { return file_ ? *file_ : *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_ = nullptr;
};

inline std::string resolve_out(ConfigFile& cfg, const CliOverrides& over) {
  if (over.out) return *over.out;
  return cfg.get_string_or("out", "");
}

inline CapacityEstimateOptions parse_estimate_options(ConfigFile& cfg,
                                                      const CliOverrides& over,
                                                      std::int64_t dflt_horizon,
                                                      double dflt_tolerance) {
  CapacityEstimateOptions est;
  est.lambda_lo = cfg.get_double_or("bracket_lo", est.lambda_lo);
  est.lambda_hi = cfg.get_double_or("bracket_hi", est.lambda_hi);
  est.tolerance = cfg.get_double_or("tolerance", dflt_tolerance);
  est.horizon = cfg.get_int_or("horizon", dflt_horizon);
  if (over.horizon) est.horizon = *over.horizon;
  est.batch_size = static_cast<int>(cfg.get_int_or("batch", 0));
  est.slope_threshold = cfg.get_double_or("slope_threshold", -1.0);
  est.measure_fraction = cfg.get_double_or("measure_fraction", 0.5);
  return est;
}

}  // namespace detail

// One-shot scheduler comparison on an explicit queue vector. Prints a table
// with per-policy schedules and weights plus the greedy/maxweight ratio; the
// same rows go to the CSV sink when an output path is configured.
inline int cmd_schedule(ConfigFile cfg, const CliOverrides& over,
                        std::ostream& out, std::ostream& diag) {
  detail::check_kind(cfg, "schedule");
  const SystemConfig sys = detail::parse_system(cfg);
  const std::vector<std::int64_t> q_raw = cfg.get_int_list("queues");
  const QueueState q(std::vector<QueueLen>(q_raw.begin(), q_raw.end()));

  std::vector<std::string> names = {"maxweight", "greedy", "halfduplex", "lqf"};
  if (cfg.has("policies")) names = cfg.get_string_list("policies");
  const std::string out_path = detail::resolve_out(cfg, over);
  cfg.reject_unknown();

  std::vector<ScheduleResult> results;
  for (const std::string& name : names)
    results.push_back(policy_from_name(name)(q, sys));

  std::optional<double> w_max;
  std::optional<double> w_greedy;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == "maxweight") w_max = static_cast<double>(results[i].weight);
    if (names[i] == "greedy") w_greedy = static_cast<double>(results[i].weight);
  }

  for (std::size_t i = 0; i < names.size(); ++i) {
    diag << names[i] << ": schedule=" << schedule_to_string(results[i].schedule)
         << " weight=" << results[i].weight << "\n";
  }
  if (w_max && w_greedy && *w_max > 0)
    diag << "ratio greedy/maxweight = " << format_double(*w_greedy / *w_max)
         << "\n";

  detail::OutputSink sink(out_path, out);
  CsvWriter csv(sink.stream(),
                {"policy", "schedule", "weight", "weight_vs_maxweight"});
  csv.metadata("version", kVersion);
  csv.metadata("command", "schedule");
  csv.metadata("n_users", sys.n_users());
  csv.metadata("k_minislots", sys.k_minislots());
  csv.metadata("n_groups", sys.n_groups());
  for (std::size_t i = 0; i < names.size(); ++i) {
    const std::string ratio =
        (w_max && *w_max > 0)
            ? format_double(static_cast<double>(results[i].weight) / *w_max)
            : "";
    csv.row_of(names[i], schedule_to_string(results[i].schedule),
               static_cast<std::int64_t>(results[i].weight), ratio);
  }
  return 0;
}

// Single raw run with full trace export: per slot, the schedule, the backlog
// the scheduler saw, arrivals, offered rates and delivered packets.
inline int cmd_simulate(ConfigFile cfg, const CliOverrides& over,
                        std::ostream& out, std::ostream& diag) {
  detail::check_kind(cfg, "simulate");
  const SystemConfig sys = detail::parse_system(cfg);
  const std::string policy_name = cfg.get_string_or("policy", "greedy");
  const PolicyFn policy = policy_from_name(policy_name);

  ArrivalSpec spec;
  spec.batch_size = static_cast<int>(cfg.get_int_or("batch", sys.k_minislots()));
  if (cfg.has("lambdas")) {
    for (const Rational& r : cfg.get_rational_grid("lambdas"))
      spec.per_user_rate.push_back(to_double(r));
  } else {
    spec.per_user_rate.assign(static_cast<std::size_t>(sys.n_users()),
                              cfg.get_double("lambda"));
  }

  std::int64_t horizon = cfg.get_int_or("horizon", 10000);
  if (over.horizon) horizon = *over.horizon;
  std::uint64_t seed = cfg.get_u64_or("seed", 1);
  if (over.seed) seed = *over.seed;
  const double measure_fraction = cfg.get_double_or("measure_fraction", 0.5);
  const std::string out_path = detail::resolve_out(cfg, over);
  cfg.reject_unknown();

  RunOptions opts;
  opts.record_full = true;
  opts.measure_fraction = measure_fraction;
  const SimulationTrace trace = run(sys, policy, spec, horizon, seed, opts);
  diag << "mean total backlog over last " << format_double(measure_fraction * 100)
       << "% of horizon: " << format_double(trace.mean_queue) << "\n";

  std::vector<std::string> columns = {"slot", "schedule"};
  const int n = sys.n_users();
  for (int u = 1; u <= n; ++u) columns.push_back("q_" + std::to_string(u));
  for (int u = 1; u <= n; ++u) columns.push_back("a_" + std::to_string(u));
  for (int u = 1; u <= n; ++u) columns.push_back("r_" + std::to_string(u));
  for (int u = 1; u <= n; ++u) columns.push_back("d_" + std::to_string(u));

  detail::OutputSink sink(out_path, out);
  CsvWriter csv(sink.stream(), columns);
  csv.metadata("version", kVersion);
  csv.metadata("command", "simulate");
  csv.metadata("policy", policy_name);
  csv.metadata("seed", seed);
  csv.metadata("horizon", horizon);
  csv.metadata("batch", spec.batch_size);
  csv.metadata("measure_fraction", measure_fraction);
  csv.metadata("mean_queue", trace.mean_queue);
  csv.metadata("group_sizes", detail::group_sizes_string(sys));

  std::vector<std::string> fields;
  for (std::int64_t t = 0; t < horizon; ++t) {
    fields.clear();
    fields.push_back(std::to_string(t));
    fields.push_back(schedule_to_string(trace.schedules[static_cast<std::size_t>(t)]));
    const auto& qs = trace.queues[static_cast<std::size_t>(t)];
    const auto& as = trace.arrivals[static_cast<std::size_t>(t)];
    const auto& rs = trace.offered[static_cast<std::size_t>(t)];
    const auto& ds = trace.delivered[static_cast<std::size_t>(t)];
    for (int u = 0; u < n; ++u) fields.push_back(std::to_string(qs[static_cast<std::size_t>(u)]));
    for (int u = 0; u < n; ++u) fields.push_back(std::to_string(as[static_cast<std::size_t>(u)]));
    for (int u = 0; u < n; ++u) fields.push_back(std::to_string(rs[static_cast<std::size_t>(u)]));
    for (int u = 0; u < n; ++u) fields.push_back(std::to_string(ds[static_cast<std::size_t>(u)]));
    csv.row(fields);
  }
  return 0;
}

// Mean backlog and stability verdict across an arrival-probability grid for
// one policy.
inline int cmd_sweep(ConfigFile cfg, const CliOverrides& over,
                     std::ostream& out, std::ostream& diag) {
  detail::check_kind(cfg, "sweep");
  const SystemConfig sys = detail::parse_system(cfg);
  const std::string policy_name = cfg.get_string_or("policy", "greedy");
  const PolicyFn policy = policy_from_name(policy_name);
  const std::vector<double> grid = cfg.get_double_grid("lambda_grid");

  SweepOptions opts;
  opts.horizon = cfg.get_int_or("horizon", 20000);
  if (over.horizon) opts.horizon = *over.horizon;
  opts.batch_size = static_cast<int>(cfg.get_int_or("batch", 0));
  opts.slope_threshold = cfg.get_double_or("slope_threshold", -1.0);
  opts.measure_fraction = cfg.get_double_or("measure_fraction", 0.5);
  opts.threads = over.threads;
  std::uint64_t seed = cfg.get_u64_or("seed", 1);
  if (over.seed) seed = *over.seed;
  const std::string out_path = detail::resolve_out(cfg, over);
  cfg.reject_unknown();

  const std::vector<SweepPoint> points = lambda_sweep(sys, policy, grid, opts, seed);
  diag << "swept " << points.size() << " arrival rates\n";

  detail::OutputSink sink(out_path, out);
  CsvWriter csv(sink.stream(), {"lambda", "mean_queue", "slope", "stable"});
  csv.metadata("version", kVersion);
  csv.metadata("command", "sweep");
  csv.metadata("policy", policy_name);
  csv.metadata("seed", seed);
  csv.metadata("horizon", opts.horizon);
  csv.metadata("batch", opts.batch_size > 0 ? opts.batch_size : sys.k_minislots());
  csv.metadata("slope_threshold",
               opts.slope_threshold >= 0 ? opts.slope_threshold
                                         : 0.01 * sys.k_minislots());
  csv.metadata("measure_fraction", opts.measure_fraction);
  csv.metadata("group_sizes", detail::group_sizes_string(sys));
  for (const SweepPoint& p : points)
    csv.row_of(p.lambda, p.mean_queue, p.slope, p.stable);
  return 0;
}

// Mean backlog vs arrival probability for the three reference policies on a
// regime layout; optionally also bisects per-policy capacity boundaries and
// reports their ratios.
inline int cmd_regimes(ConfigFile cfg, const CliOverrides& over,
                       std::ostream& out, std::ostream& diag) {
  detail::check_kind(cfg, "regimes");
  const int regime_id = static_cast<int>(cfg.get_int_or("regime", 0));
  const SystemConfig sys =
      regime_id > 0 ? make_regime_config(regime_id) : detail::parse_system(cfg);
  std::vector<std::string> names = {"maxweight", "greedy", "halfduplex"};
  if (cfg.has("policies")) names = cfg.get_string_list("policies");
  const std::vector<double> grid = cfg.get_double_grid("lambda_grid");

  SweepOptions opts;
  opts.horizon = cfg.get_int_or("horizon", 20000);
  if (over.horizon) opts.horizon = *over.horizon;
  opts.batch_size = static_cast<int>(cfg.get_int_or("batch", 0));
  opts.slope_threshold = cfg.get_double_or("slope_threshold", -1.0);
  opts.measure_fraction = cfg.get_double_or("measure_fraction", 0.5);
  opts.threads = over.threads;
  std::uint64_t seed = cfg.get_u64_or("seed", 1);
  if (over.seed) seed = *over.seed;

  const bool estimate = cfg.get_bool_or("estimate_capacity", false);
  std::string capacity_out;
  CapacityEstimateOptions est_opts;
  std::int64_t capacity_seeds = 3;
  if (estimate) {
    capacity_out = cfg.get_string_or("capacity_out", "");
    est_opts = detail::parse_estimate_options(cfg, over, opts.horizon,
                                              1.0 / 256);
    capacity_seeds = cfg.get_int_or("capacity_seeds", 3);
  }
  const std::string out_path = detail::resolve_out(cfg, over);
  cfg.reject_unknown();

  {
    detail::OutputSink sink(out_path, out);
    CsvWriter csv(sink.stream(),
                  {"policy", "lambda", "mean_queue", "slope", "stable"});
    csv.metadata("version", kVersion);
    csv.metadata("command", "regimes");
    if (regime_id > 0) csv.metadata("regime", regime_id);
    csv.metadata("group_sizes", detail::group_sizes_string(sys));
    csv.metadata("k_minislots", sys.k_minislots());
    csv.metadata("seed", seed);
    csv.metadata("horizon", opts.horizon);
    csv.metadata("slope_threshold",
                 opts.slope_threshold >= 0 ? opts.slope_threshold
                                           : 0.01 * sys.k_minislots());
    csv.metadata("measure_fraction", opts.measure_fraction);
    for (const std::string& name : names) {
      const std::vector<SweepPoint> points =
          lambda_sweep(sys, policy_from_name(name), grid, opts, seed);
      for (const SweepPoint& p : points)
        csv.row_of(name, p.lambda, p.mean_queue, p.slope, p.stable);
      diag << name << ": swept " << points.size() << " rates\n";
    }
  }

  if (estimate) {
    std::vector<std::uint64_t> seeds;
    for (std::int64_t i = 0; i < capacity_seeds; ++i)
      seeds.push_back(derive_seed(seed, streams::kSeedSequence,
                                  static_cast<std::uint64_t>(i)));
    std::vector<std::vector<double>> boundaries(names.size());
    const std::int64_t jobs =
        static_cast<std::int64_t>(names.size()) * capacity_seeds;
    for (auto& b : boundaries) b.resize(static_cast<std::size_t>(capacity_seeds));
    parallel_for(
        jobs,
        [&](std::int64_t j) {
          const std::size_t p = static_cast<std::size_t>(j) % names.size();
          const std::size_t s = static_cast<std::size_t>(j) / names.size();
          boundaries[p][s] = estimate_capacity(sys, policy_from_name(names[p]),
                                               est_opts, seeds[s])
                                 .boundary;
        },
        over.threads);

    detail::OutputSink sink(capacity_out, out);
    CsvWriter csv(sink.stream(), {"policy", "seed_index", "boundary"});
    csv.metadata("version", kVersion);
    csv.metadata("command", "regimes.capacity");
    if (regime_id > 0) csv.metadata("regime", regime_id);
    csv.metadata("group_sizes", detail::group_sizes_string(sys));
    csv.metadata("seed", seed);
    csv.metadata("capacity_seeds", capacity_seeds);
    csv.metadata("horizon", est_opts.horizon);
    csv.metadata("tolerance", est_opts.tolerance);
    csv.metadata("bracket_lo", est_opts.lambda_lo);
    csv.metadata("bracket_hi", est_opts.lambda_hi);

    std::vector<double> means(names.size(), 0.0);
    for (std::size_t p = 0; p < names.size(); ++p) {
      for (double b : boundaries[p]) means[p] += b;
      means[p] /= static_cast<double>(capacity_seeds);
    }
    for (std::size_t p = 0; p < names.size(); ++p) {
      if (names[p] == "halfduplex" && means[p] > 0) {
        for (std::size_t q = 0; q < names.size(); ++q) {
          if (q == p) continue;
          csv.metadata("ratio_" + names[q] + "_vs_halfduplex",
                       means[q] / means[p]);
          diag << "capacity ratio " << names[q]
               << "/halfduplex = " << format_double(means[q] / means[p]) << "\n";
        }
      }
    }
    for (std::size_t p = 0; p < names.size(); ++p)
      for (std::size_t s = 0; s < boundaries[p].size(); ++s)
        csv.row_of(names[p], static_cast<std::int64_t>(s), boundaries[p][s]);
  }
  return 0;
}

// Empirical CDF of the full-duplex capacity gain over random group
// assignments.
inline int cmd_cdf(ConfigFile cfg, const CliOverrides& over, std::ostream& out,
                   std::ostream& diag) {
  detail::check_kind(cfg, "cdf");
  CdfParams params;
  params.n_users = static_cast<int>(cfg.get_int_or("n_users", 10));
  params.n_groups = static_cast<int>(cfg.get_int_or("n_groups", 4));
  params.k_minislots = static_cast<int>(cfg.get_int_or("k_minislots", 15));
  params.samples = static_cast<int>(cfg.get_int_or("samples", 200));
  params.fd_policy = cfg.get_string_or("policy", "maxweight");
  params.seed = cfg.get_u64_or("seed", 1);
  params.threads = over.threads;
  params.estimate =
      detail::parse_estimate_options(cfg, over, 60000, 1.0 / 256);
  const std::string samples_out = cfg.get_string_or("samples_out", "");
  if (over.paper_scale) {
    params.samples = 10000;
    params.estimate.horizon = 200000;
  }
  // explicit flags beat --paper-scale
  if (over.samples) params.samples = static_cast<int>(*over.samples);
  if (over.horizon) params.estimate.horizon = *over.horizon;
  if (over.seed) params.seed = *over.seed;
  const std::string out_path = detail::resolve_out(cfg, over);
  cfg.reject_unknown();

  const CdfResult result = gain_cdf(params);
  diag << "median gain = " << format_double(result.median) << ", "
       << format_double(100 * result.fraction_at_least(1.44))
       << "% of samples >= 1.44\n";

  auto write_common_metadata = [&](CsvWriter& csv, const char* command) {
    csv.metadata("version", kVersion);
    csv.metadata("command", command);
    csv.metadata("policy", params.fd_policy);
    csv.metadata("n_users", params.n_users);
    csv.metadata("n_groups", params.n_groups);
    csv.metadata("k_minislots", params.k_minislots);
    csv.metadata("samples", params.samples);
    csv.metadata("seed", params.seed);
    csv.metadata("horizon", params.estimate.horizon);
    csv.metadata("tolerance", params.estimate.tolerance);
    csv.metadata("bracket_lo", params.estimate.lambda_lo);
    csv.metadata("bracket_hi", params.estimate.lambda_hi);
    csv.metadata("median_gain", result.median);
  };

  {
    detail::OutputSink sink(out_path, out);
    CsvWriter csv(sink.stream(), {"gain", "cdf"});
    write_common_metadata(csv, "cdf");
    const std::size_t n = result.sorted_gains.size();
    for (std::size_t i = 0; i < n; ++i)
      csv.row_of(result.sorted_gains[i],
                 static_cast<double>(i + 1) / static_cast<double>(n));
  }
  if (!samples_out.empty()) {
    detail::OutputSink sink(samples_out, out);
    CsvWriter csv(sink.stream(),
                  {"sample", "group_sizes", "fd_boundary", "hd_boundary", "gain"});
    write_common_metadata(csv, "cdf.samples");
    for (std::size_t s = 0; s < result.samples.size(); ++s) {
      const CdfSample& smp = result.samples[s];
      std::string sizes;
      for (std::size_t g = 0; g < smp.group_sizes.size(); ++g) {
        if (g) sizes += '|';
        sizes += std::to_string(smp.group_sizes[g]);
      }
      csv.row_of(static_cast<std::int64_t>(s), sizes, smp.fd_boundary,
                 smp.hd_boundary, smp.gain);
    }
  }
  return 0;
}

// Exact-rational gain curves: gain vs alpha for fixed group counts and gain
// vs group count for fixed alphas.
inline int cmd_gain_curves(ConfigFile cfg, const CliOverrides& over,
                           std::ostream& out, std::ostream& diag) {
  detail::check_kind(cfg, "gain-curves");
  std::vector<Rational> alpha_grid{};
  if (cfg.has("alpha_grid"))
    alpha_grid = cfg.get_rational_grid("alpha_grid");
  else
    for (Rational a(1, 10); a <= 10; a += Rational(1, 10)) alpha_grid.push_back(a);

  std::vector<std::int64_t> i_values = {10};
  if (cfg.has("i_values")) i_values = cfg.get_int_list("i_values");

  std::vector<Rational> alpha_values = {Rational(1), Rational(3, 2), Rational(3)};
  if (cfg.has("alpha_values"))
    alpha_values = cfg.get_rational_grid("alpha_values");
  const std::int64_t i_lo = cfg.get_int_or("i_lo", 2);
  const std::int64_t i_hi = cfg.get_int_or("i_hi", 15);
  const std::string out_path = detail::resolve_out(cfg, over);
  cfg.reject_unknown();

  detail::OutputSink sink(out_path, out);
  CsvWriter csv(sink.stream(), {"curve", "n_groups", "alpha", "alpha_exact",
                                "nu_hd", "nu_fd", "gain", "gain_exact",
                                "branch"});
  csv.metadata("version", kVersion);
  csv.metadata("command", "gain-curves");

  std::size_t rows = 0;
  for (std::int64_t i : i_values) {
    for (const GainCurvePoint& p : gain_curve_over_alpha(alpha_grid, i)) {
      csv.row_of("gain_vs_alpha", p.n_groups, to_double(p.alpha),
                 to_string(p.alpha), to_double(p.point.nu_hd),
                 to_double(p.point.nu_fd), to_double(p.point.gain),
                 to_string(p.point.gain), to_string(p.point.branch));
      ++rows;
    }
  }
  for (const Rational& a : alpha_values) {
    for (const GainCurvePoint& p : gain_curve_over_groups(a, i_lo, i_hi)) {
      csv.row_of("gain_vs_groups", p.n_groups, to_double(p.alpha),
                 to_string(p.alpha), to_double(p.point.nu_hd),
                 to_double(p.point.nu_fd), to_double(p.point.gain),
                 to_string(p.point.gain), to_string(p.point.branch));
      ++rows;
    }
  }
  diag << "emitted " << rows << " gain-curve points\n";
  return 0;
}

// Worst-case family for the greedy policy: K = 2^r for r = 2..max_r.
inline int cmd_tightness(ConfigFile cfg, const CliOverrides& over,
                         std::ostream& out, std::ostream& diag) {
  detail::check_kind(cfg, "tightness");
  const int max_r = static_cast<int>(cfg.get_int_or("max_r", 7));
  const std::string out_path = detail::resolve_out(cfg, over);
  cfg.reject_unknown();

  const std::vector<TightnessRow> rows = tightness_table(max_r);
  detail::OutputSink sink(out_path, out);
  CsvWriter csv(sink.stream(),
                {"k", "optimal_weight", "greedy_weight", "ratio", "ratio_exact"});
  csv.metadata("version", kVersion);
  csv.metadata("command", "tightness");
  csv.metadata("max_r", max_r);
  for (const TightnessRow& r : rows) {
    csv.row_of(r.k, r.optimal, r.greedy, to_double(r.ratio), to_string(r.ratio));
    diag << "K=" << r.k << ": optimal=" << r.optimal << " greedy=" << r.greedy
         << " ratio=" << format_double(to_double(r.ratio)) << "\n";
  }
  return 0;
}

// Dispatch + exception-to-exit-code mapping. Exit codes: 0 success, 2 config
// or input error, 3 instance too large, 4 invalid bisection bracket.
inline int run_command(const std::string& command,
                       const std::string& config_path, const CliOverrides& over,
                       std::ostream& out, std::ostream& diag) {
  try {
    ConfigFile cfg = config_path.empty() ? ConfigFile::empty()
                                         : ConfigFile::parse_file(config_path);
    if (command == "schedule") return cmd_schedule(std::move(cfg), over, out, diag);
    if (command == "simulate") return cmd_simulate(std::move(cfg), over, out, diag);
    if (command == "sweep") return cmd_sweep(std::move(cfg), over, out, diag);
    if (command == "regimes") return cmd_regimes(std::move(cfg), over, out, diag);
    if (command == "cdf") return cmd_cdf(std::move(cfg), over, out, diag);
    if (command == "gain-curves")
      return cmd_gain_curves(std::move(cfg), over, out, diag);
    if (command == "tightness")
      return cmd_tightness(std::move(cfg), over, out, diag);
    throw ConfigError("unknown command '" + command + "'");
  } catch (const InstanceTooLargeError& e) {
    diag << "error: " << e.what() << "\n";
    return 3;
  } catch (const BracketInvalidError& e) {
    diag << "error: " << e.what() << "\n";
    return 4;
  } catch (const ConfigError& e) {
    diag << "error: " << e.what() << "\n";
    return 2;
  } catch (const InvalidScheduleError& e) {
    diag << "error: " << e.what() << "\n";
    return 2;
  } catch (const InvalidInputError& e) {
    diag << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    diag << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace fdsched
