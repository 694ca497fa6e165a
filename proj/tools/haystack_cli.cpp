#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "haystack/config.hpp"
#include "haystack/experiments.hpp"
#include "haystack/version.hpp"

namespace {

int run_kind(const std::string& kind, const haystack::Config& config) {
  const std::filesystem::path out_dir = haystack::resolve_out_dir(config);
  std::vector<std::filesystem::path> files;
  bool ok = true;
  if (kind == "figure3") {
    files = haystack::run_figure3(config, out_dir);
  } else if (kind == "bounds") {
    files = haystack::run_bounds_curve(config, out_dir);
  } else if (kind == "tails") {
    files = haystack::run_tails_curve(config, out_dir);
  } else if (kind == "benchmark") {
    files = haystack::run_benchmark_curve(config, out_dir);
  } else if (kind == "simulate") {
    files = haystack::run_simulate(config, out_dir);
  } else {
    const haystack::InvariantReport report =
        haystack::run_invariant_suite(config, out_dir);
    for (const haystack::InvariantCheck& check : report.checks) {
      std::cout << (check.pass ? "pass" : "FAIL") << "  " << check.name
                << '\n';
    }
    files.push_back(report.path);
    ok = report.all_pass;
  }
  for (const std::filesystem::path& file : files) {
    std::cout << file.string() << '\n';
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for budgeted screen-then-verify search"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(haystack::kVersion));

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  std::int64_t replications = 0;
  int threads = 0;
  app.add_option("--config", config_path, "Run configuration file");
  auto* seed_opt = app.add_option("--seed", seed, "Master seed override");
  auto* out_opt = app.add_option("--out", out_dir, "Output directory");
  auto* reps_opt =
      app.add_option("--replications", replications, "Replication count");
  auto* threads_opt = app.add_option("--threads", threads, "Worker threads");

  app.add_subcommand("bounds",
                     "Emit normalized gain curves and their breakpoints");
  app.add_subcommand("tails",
                     "Emit upper-tail means versus the oversampling ratio");
  app.add_subcommand("benchmark",
                     "Emit the exact selection boundary along a budget grid");
  app.add_subcommand("simulate", "Compare selection policies at fixed budgets");
  app.add_subcommand("figure3",
                     "Emit gain versus budget across screening strengths");
  app.add_subcommand("check", "Run the cross-module invariant suite");

  CLI11_PARSE(app, argc, argv);

  try {
    haystack::Config config = config_path.empty()
                                  ? haystack::Config{}
                                  : haystack::Config::from_file(config_path);
    if (seed_opt->count() > 0) {
      config.set("run.master_seed", std::to_string(seed));
    }
    if (reps_opt->count() > 0) {
      config.set("run.replications", std::to_string(replications));
    }
    if (threads_opt->count() > 0) {
      config.set("run.threads", std::to_string(threads));
    }
    if (out_opt->count() > 0) {
      config.set("run.out_dir", out_dir);
    }
    const std::string kind = app.get_subcommands().front()->get_name();
    return run_kind(kind, config);
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << '\n';
    return 1;
  }
}
