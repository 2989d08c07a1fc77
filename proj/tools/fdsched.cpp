// Command-line front end for the full-duplex probing scheduler library:
// one-shot scheduler comparisons, queueing simulations, capacity sweeps and
// the gain experiments, all emitting CSV.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fdsched/commands.hpp"
#include "fdsched/version.hpp"

namespace {

struct SubcommandArgs {
  std::string config_path;
  bool config_required = false;
  fdsched::CliOverrides overrides;
};

void add_common_flags(CLI::App* sub, SubcommandArgs& args, bool config_required) {
  sub->add_option("--config", args.config_path,
                  config_required ? "experiment config file (required)"
                                  : "experiment config file");
  args.config_required = config_required;

  sub->add_option_function<std::uint64_t>(
      "--seed", [&args](std::uint64_t v) { args.overrides.seed = v; },
      "override the config seed");
  sub->add_option_function<std::int64_t>(
      "--horizon", [&args](std::int64_t v) { args.overrides.horizon = v; },
      "override the simulation horizon (slots)");
  sub->add_option_function<std::int64_t>(
      "--samples", [&args](std::int64_t v) { args.overrides.samples = v; },
      "override the sample count");
  sub->add_option_function<std::string>(
      "--out", [&args](const std::string& v) { args.overrides.out = v; },
      "output CSV path (default: stdout)");
  sub->add_flag("--paper-scale", args.overrides.paper_scale,
                "use full-scale experiment sizes");
  sub->add_option("--threads", args.overrides.threads,
                  "worker threads (0 = hardware concurrency)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scheduling and queueing experiments for full-duplex downlink "
               "systems with concurrent channel probing and data transmission"};
  app.set_version_flag("--version", fdsched::kVersion);
  app.require_subcommand(1);

  struct Cmd {
    const char* name;
    const char* help;
    bool config_required;
  };
  const Cmd cmds[] = {
      {"schedule", "compare scheduling policies on one queue vector", true},
      {"simulate", "run one simulation and export the full trace", true},
      {"sweep", "mean backlog across an arrival-probability grid", true},
      {"regimes", "reference-regime backlog curves and capacity ratios", true},
      {"cdf", "capacity-gain CDF over random group assignments", false},
      {"gain-curves", "closed-form gain tables over alpha and group count", false},
      {"tightness", "greedy worst-case family, K = 2^r", false},
  };

  SubcommandArgs args[std::size(cmds)];
  for (std::size_t i = 0; i < std::size(cmds); ++i) {
    CLI::App* sub = app.add_subcommand(cmds[i].name, cmds[i].help);
    add_common_flags(sub, args[i], cmds[i].config_required);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  for (std::size_t i = 0; i < std::size(cmds); ++i) {
    if (app.got_subcommand(cmds[i].name)) {
      if (args[i].config_required && args[i].config_path.empty()) {
        std::cerr << "error: " << cmds[i].name << " requires --config PATH\n";
        return 2;
      }
      return fdsched::run_command(cmds[i].name, args[i].config_path,
                                  args[i].overrides, std::cout, std::cerr);
    }
  }
  return 2;
}
