#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "haystack/benchmark.hpp"
#include "haystack/bounds.hpp"
#include "haystack/config.hpp"
#include "haystack/csv.hpp"
#include "haystack/manifest.hpp"
#include "haystack/rng.hpp"
#include "haystack/screening.hpp"
#include "haystack/simulate.hpp"
#include "haystack/tails.hpp"

namespace haystack {

// Every runner works off an empty config; keys override the defaults, which
// are the published-figure settings.  CLI flags land in the same keys, so
// flag > file > built-in without extra plumbing.

inline ScoreDistribution score_law_from_config(const Config& config) {
  const std::string family = config.get_string("model.score_family", "normal");
  if (family == "normal") return ScoreDistribution::standard_normal();
  if (family == "pareto") {
    return ScoreDistribution::standardized_pareto(
        config.get_real("model.pareto_nu", 4.0));
  }
  throw std::runtime_error("config: unknown score family '" + family + "'");
}

inline ScreeningModel model_from_config(const Config& config) {
  const double p = config.get_real("model.p", 0.01);
  ScoreDistribution law = score_law_from_config(config);
  if (config.has("model.target_auc") && !config.has("model.epsilon")) {
    const double epsilon =
        epsilon_for_auc(p, config.get_real("model.target_auc"), law);
    return ScreeningModel(p, epsilon, std::move(law));
  }
  return ScreeningModel(p, config.get_real("model.epsilon", 0.1),
                        std::move(law));
}

struct RunSettings {
  std::int64_t replications = 400;
  std::uint64_t master_seed = 20260822ull;
  int threads = 1;
};

inline RunSettings run_settings_from_config(const Config& config) {
  RunSettings settings;
  settings.replications =
      config.get_int("run.replications", settings.replications);
  settings.master_seed = config.get_u64("run.master_seed", settings.master_seed);
  settings.threads =
      static_cast<int>(config.get_int("run.threads", settings.threads));
  return settings;
}

// Output directory precedence: run.out_dir (CLI --out writes this key) over
// the HAYSTACK_OUT_DIR environment variable over ./haystack_out.
inline std::filesystem::path resolve_out_dir(const Config& config) {
  std::string dir = config.get_string("run.out_dir", "");
  if (dir.empty()) {
    if (const char* env = std::getenv("HAYSTACK_OUT_DIR")) dir = env;
  }
  if (dir.empty()) dir = "haystack_out";
  const std::filesystem::path path(dir);
  std::filesystem::create_directories(path);
  return path;
}

namespace detail {

inline std::vector<std::int64_t> b_grid_from_config(
    const Config& config, const char* key, std::vector<std::int64_t> fallback) {
  if (!config.has(key)) return fallback;
  std::vector<std::int64_t> grid = config.get_int_list(key);
  if (grid.empty()) {
    throw std::runtime_error(std::string("config: '") + key +
                             "' must not be empty");
  }
  return grid;
}

// "3.01" -> "3p01": keeps the shape readable in a header without a second
// dot confusing downstream tools.
inline std::string numeric_tag(double nu) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%g", nu);
  std::string tag(buffer);
  std::replace(tag.begin(), tag.end(), '.', 'p');
  return tag;
}

}  // namespace detail

// One screening strength of the gain-versus-budget sweep.  Strengths are
// specified either by target AUC (epsilon solved numerically) or by an
// explicit epsilon list; the label is always the computed AUC.
struct StrengthSpec {
  double epsilon = 0.0;
  double auc = 0.5;
  std::optional<double> auc_target;
};

inline std::vector<StrengthSpec> figure3_strengths(
    const Config& config, double p, const ScoreDistribution& law) {
  std::vector<StrengthSpec> specs;
  if (config.has("figure3.epsilons")) {
    for (const double epsilon : config.get_real_list("figure3.epsilons")) {
      const ScreeningModel model(p, epsilon, law);
      specs.push_back({epsilon, screening_auc(model), std::nullopt});
    }
  } else {
    std::vector<double> targets = {0.55, 0.70, 0.79, 0.90};
    if (config.has("figure3.auc_targets")) {
      targets = config.get_real_list("figure3.auc_targets");
    }
    for (const double target : targets) {
      const double epsilon = epsilon_for_auc(p, target, law);
      const ScreeningModel model(p, epsilon, law);
      specs.push_back({epsilon, screening_auc(model), target});
    }
  }
  if (specs.empty()) {
    throw std::runtime_error("figure3: no screening strengths configured");
  }
  return specs;
}

// Gain versus verification budget, one CSV per screening strength:
// simulated TopB gain with its standard error next to the exact-boundary
// estimate, the sqrt-law approximation, the converse, and the finite-pool
// oracle.  The empirical column is asserted against the capped converse
// row-wise; a violation aborts the run.
inline std::vector<std::filesystem::path> run_figure3(
    const Config& config, const std::filesystem::path& out_dir) {
  const double p = config.get_real("model.p", 0.01);
  const ScoreDistribution law = score_law_from_config(config);
  const RunSettings run = run_settings_from_config(config);
  const std::int64_t k = config.get_int("budgets.k", 10000);
  const std::vector<std::int64_t> b_grid = detail::b_grid_from_config(
      config, "budgets.b_grid", {10, 20, 50, 100, 200, 500, 1000});
  const VerificationChannel channel(config.get_real("channel.rho", 0.1));
  const double i_ver = channel.information();

  const std::vector<StrengthSpec> strengths = figure3_strengths(config, p, law);
  std::vector<std::filesystem::path> files;
  std::set<std::string> used_names;

  for (std::size_t s = 0; s < strengths.size(); ++s) {
    const StrengthSpec& strength = strengths[s];
    const ScreeningModel model(p, strength.epsilon, law);
    const InfoParams params{p, screening_information(model), i_ver,
                            VerificationChannel::claim_entropy()};
    const double rate = marginal_rate(model);

    char label[32];
    std::snprintf(label, sizeof label, "figure3_auc%02d",
                  static_cast<int>(std::lround(strength.auc * 100.0)));
    std::string name(label);
    if (!used_names.insert(name).second) {
      name += "_" + std::to_string(s + 1);
      used_names.insert(name);
    }

    CsvWriter writer(out_dir / (name + ".csv"),
                     {"b", "empirical_gain", "empirical_se", "benchmark_gain",
                      "weak_law_gain", "converse_gain", "converse_capped",
                      "oracle_gain"});
    const std::uint64_t strength_seed = derive_seed(run.master_seed, s);
    for (std::size_t j = 0; j < b_grid.size(); ++j) {
      const Budgets budgets{k, b_grid[j]};
      const std::uint64_t point_seed = derive_seed(strength_seed, j);
      const SimResult sim =
          run_experiment(model, Policy::kTopB, budgets, channel,
                         run.replications, point_seed, run.threads);
      const BenchmarkBoundary bench =
          benchmark_risk(model, k, budgets.b, channel, run.replications,
                         point_seed, run.threads);
      const double m_alpha = tail_mean(law, budgets.alpha());
      const double weak = achievable_gain_weak(params, budgets, m_alpha);
      const double converse = converse_gain(params, budgets);
      const double capped =
          std::min(converse, i_ver * static_cast<double>(budgets.b));
      const double oracle = oracle_ceiling(
          params, budgets, expected_min_binomial(k, rate, budgets.b));
      if (sim.mean_gain_bits > capped + 3.0 * sim.se_gain_bits) {
        throw std::runtime_error(
            "figure3: empirical gain exceeds the capped converse at b=" +
            std::to_string(budgets.b));
      }
      writer.write_row(std::array{static_cast<double>(budgets.b),
                                  sim.mean_gain_bits, sim.se_gain_bits,
                                  bench.gain_bits, weak, converse, capped,
                                  oracle});
    }
    writer.close();

    RunManifest manifest = make_manifest(
        config, run.master_seed,
        {{"b", Provenance::kClosedForm},
         {"empirical_gain", Provenance::kEmpirical},
         {"empirical_se", Provenance::kEmpirical},
         {"benchmark_gain", Provenance::kEmpirical},
         {"weak_law_gain", Provenance::kClosedForm},
         {"converse_gain", Provenance::kClosedForm},
         {"converse_capped", Provenance::kClosedForm},
         {"oracle_gain", Provenance::kClosedForm}});
    manifest.parameters["p"] = p;
    manifest.parameters["epsilon"] = strength.epsilon;
    manifest.parameters["auc"] = strength.auc;
    if (strength.auc_target) {
      manifest.parameters["auc_target"] = *strength.auc_target;
      manifest.notes.push_back(
          "epsilon solved numerically from the target auc");
    }
    manifest.parameters["rho"] = channel.rho();
    manifest.parameters["verification_info_bits"] = i_ver;
    manifest.parameters["screening_info_bits"] = params.screening_info;
    manifest.parameters["marginal_rate"] = rate;
    manifest.parameters["k"] = static_cast<double>(k);
    manifest.parameters["replications"] =
        static_cast<double>(run.replications);
    write_manifest(manifest, writer.path());
    files.push_back(writer.path());
  }
  return files;
}

// Normalized gain curves (gain divided by the per-verification information)
// against the budget, one curve per J*K value, plus the breakpoint table.
inline std::vector<std::filesystem::path> run_bounds_curve(
    const Config& config, const std::filesystem::path& out_dir) {
  const double p = config.get_real("bounds.p", 0.05);
  const double c = config.get_real("bounds.c", 0.45);
  std::vector<double> jk_grid = {10.0, 100.0, 200.0, 400.0};
  if (config.has("bounds.jk_grid")) {
    jk_grid = config.get_real_list("bounds.jk_grid");
  }
  const std::int64_t b_max = config.get_int("bounds.b_max", 200);
  if (b_max < 1) throw std::runtime_error("bounds: b_max must be positive");

  std::vector<std::int64_t> b_grid(static_cast<std::size_t>(b_max));
  std::iota(b_grid.begin(), b_grid.end(), std::int64_t{1});

  std::vector<std::string> columns = {"b", "random", "oracle"};
  std::vector<ColumnProvenance> provenance = {
      {"b", Provenance::kClosedForm},
      {"random", Provenance::kClosedForm},
      {"oracle", Provenance::kClosedForm}};
  std::vector<std::vector<double>> curves;
  for (const double jk : jk_grid) {
    // Normalization trick: verification_info = 1 makes sqrt_law_curve emit
    // gain over I_ver directly; k only enters through J*k, so pin k = b_max.
    const InfoParams params{p, jk / static_cast<double>(b_max), 1.0, 1.0};
    curves.push_back(
        sqrt_law_curve(params, static_cast<double>(b_max), b_grid, c));
    const std::string column = "sqrt_law_jk" + detail::numeric_tag(jk);
    columns.push_back(column);
    provenance.push_back({column, Provenance::kClosedForm});
  }

  CsvWriter writer(out_dir / "bounds_curves.csv", columns);
  std::vector<double> row(columns.size());
  for (std::size_t j = 0; j < b_grid.size(); ++j) {
    const double b = static_cast<double>(b_grid[j]);
    row[0] = b;
    row[1] = p * b;
    row[2] = b;
    for (std::size_t i = 0; i < curves.size(); ++i) row[3 + i] = curves[i][j];
    writer.write_row(row);
  }
  writer.close();

  const RunSettings run = run_settings_from_config(config);
  RunManifest manifest = make_manifest(config, run.master_seed, provenance);
  manifest.parameters["p"] = p;
  manifest.parameters["c"] = c;
  write_manifest(manifest, writer.path());

  CsvWriter breakpoints(out_dir / "bounds_breakpoints.csv", {"jk", "b_star"});
  for (const double jk : jk_grid) {
    breakpoints.write_row(std::array{jk, sqrt_law_breakpoint(p, jk, c)});
  }
  breakpoints.close();
  RunManifest break_manifest =
      make_manifest(config, run.master_seed,
                    {{"jk", Provenance::kClosedForm},
                     {"b_star", Provenance::kClosedForm}});
  break_manifest.parameters["p"] = p;
  break_manifest.parameters["c"] = c;
  write_manifest(break_manifest, breakpoints.path());

  return {writer.path(), breakpoints.path()};
}

// Upper-tail means against the oversampling ratio K/B for the normal score
// law and a family of Pareto shapes, exact next to asymptotic.
inline std::vector<std::filesystem::path> run_tails_curve(
    const Config& config, const std::filesystem::path& out_dir) {
  const std::int64_t points = config.get_int("tails.points", 41);
  if (points < 2) throw std::runtime_error("tails: need at least 2 points");
  const double log10_min = config.get_real("tails.log10_min", 1.0);
  const double log10_max = config.get_real("tails.log10_max", 5.0);
  if (!(log10_max > log10_min)) {
    throw std::runtime_error("tails: log10_max must exceed log10_min");
  }
  std::vector<double> nu_grid = {3.0, 4.0, 5.0};
  if (config.has("tails.nu_grid")) {
    nu_grid = config.get_real_list("tails.nu_grid");
  }

  std::vector<std::string> columns = {"k_over_b", "gaussian_exact",
                                      "gaussian_asym"};
  std::vector<double> nu_effective;
  std::vector<std::string> notes;
  for (const double nu : nu_grid) {
    double effective = nu;
    if (nu <= 3.0) {
      // The exact functional needs a finite third moment; the conventional
      // boundary shape is displayed via a shape just inside the family.
      effective = 3.01;
      char note[96];
      std::snprintf(note, sizeof note,
                    "nu=%g is outside the finite-third-moment family; "
                    "substituted nu=%g",
                    nu, effective);
      notes.push_back(note);
    }
    nu_effective.push_back(effective);
    const std::string tag = detail::numeric_tag(effective);
    columns.push_back("pareto_exact_nu" + tag);
    columns.push_back("pareto_asym_nu" + tag);
  }

  CsvWriter writer(out_dir / "tail_leverage.csv", columns);
  std::vector<double> row(columns.size());
  for (std::int64_t i = 0; i < points; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(points - 1);
    const double k_over_b =
        std::pow(10.0, log10_min + (log10_max - log10_min) * t);
    const double alpha = 1.0 / k_over_b;
    row[0] = k_over_b;
    row[1] = gaussian_tail_mean(alpha);
    row[2] = gaussian_tail_mean_asymptotic(alpha);
    for (std::size_t n = 0; n < nu_effective.size(); ++n) {
      row[3 + 2 * n] = pareto_tail_mean(nu_effective[n], alpha);
      row[4 + 2 * n] = pareto_tail_mean_asymptotic(nu_effective[n], alpha);
    }
    writer.write_row(row);
  }
  writer.close();

  std::vector<ColumnProvenance> provenance;
  provenance.reserve(columns.size());
  for (const std::string& column : columns) {
    provenance.push_back({column, Provenance::kClosedForm});
  }
  const RunSettings run = run_settings_from_config(config);
  RunManifest manifest = make_manifest(config, run.master_seed, provenance);
  manifest.notes = std::move(notes);
  write_manifest(manifest, writer.path());
  return {writer.path()};
}

// The exact selection boundary along a budget grid: Monte Carlo top-B score
// sums with their large-K quadrature limit and the implied risk and gain.
// The gain column is asserted against the converse row-wise.
inline std::vector<std::filesystem::path> run_benchmark_curve(
    const Config& config, const std::filesystem::path& out_dir) {
  const ScreeningModel model = model_from_config(config);
  const RunSettings run = run_settings_from_config(config);
  const std::int64_t k = config.get_int("budgets.k", 10000);
  const std::vector<std::int64_t> b_grid = detail::b_grid_from_config(
      config, "budgets.b_grid", {10, 20, 50, 100, 200, 500, 1000});
  const VerificationChannel channel(config.get_real("channel.rho", 0.1));
  const InfoParams params{model.p(), screening_information(model),
                          channel.information(),
                          VerificationChannel::claim_entropy()};

  CsvWriter writer(out_dir / "benchmark_boundary.csv",
                   {"b", "expected_top_sum", "expected_top_sum_se",
                    "single_letter_sum", "risk_bits", "gain_bits",
                    "converse_gain"});
  for (std::size_t j = 0; j < b_grid.size(); ++j) {
    const Budgets budgets{k, b_grid[j]};
    budgets.validate();
    const BenchmarkBoundary bench =
        benchmark_risk(model, k, budgets.b, channel, run.replications,
                       derive_seed(run.master_seed, j), run.threads);
    const double limit_sum =
        static_cast<double>(k) *
        single_letter_top_fraction(model, budgets.alpha());
    const double converse = converse_gain(params, budgets);
    const double se_gain = channel.information() * bench.expected_top_sum_se;
    if (bench.gain_bits > converse + 3.0 * se_gain) {
      throw std::runtime_error(
          "benchmark: boundary gain exceeds the converse at b=" +
          std::to_string(budgets.b));
    }
    writer.write_row(std::array{static_cast<double>(budgets.b),
                                bench.expected_top_sum,
                                bench.expected_top_sum_se, limit_sum,
                                bench.risk_bits, bench.gain_bits, converse});
  }
  writer.close();

  RunManifest manifest = make_manifest(
      config, run.master_seed,
      {{"b", Provenance::kClosedForm},
       {"expected_top_sum", Provenance::kEmpirical},
       {"expected_top_sum_se", Provenance::kEmpirical},
       {"single_letter_sum", Provenance::kQuadrature},
       {"risk_bits", Provenance::kEmpirical},
       {"gain_bits", Provenance::kEmpirical},
       {"converse_gain", Provenance::kClosedForm}});
  manifest.parameters["p"] = model.p();
  manifest.parameters["epsilon"] = model.epsilon();
  manifest.parameters["rho"] = channel.rho();
  manifest.parameters["k"] = static_cast<double>(k);
  manifest.parameters["replications"] = static_cast<double>(run.replications);
  write_manifest(manifest, writer.path());
  return {writer.path()};
}

// Policy comparison at fixed budgets: hits, gain, and selected hit rate for
// the rank-by-score policy against the random and clairvoyant baselines.
inline std::vector<std::filesystem::path> run_simulate(
    const Config& config, const std::filesystem::path& out_dir) {
  const ScreeningModel model = model_from_config(config);
  const RunSettings run = run_settings_from_config(config);
  const std::int64_t k = config.get_int("budgets.k", 10000);
  const std::vector<std::int64_t> b_grid =
      detail::b_grid_from_config(config, "budgets.b_grid", {10, 100, 1000});
  const VerificationChannel channel(config.get_real("channel.rho", 0.1));

  CsvWriter writer(out_dir / "simulate_policies.csv",
                   {"policy", "b", "mean_hits", "se_hits", "mean_gain_bits",
                    "se_gain_bits", "selected_hit_rate", "replications"});
  constexpr std::array kPolicies = {Policy::kTopB, Policy::kRandomB,
                                    Policy::kOracleB};
  for (std::size_t j = 0; j < b_grid.size(); ++j) {
    const Budgets budgets{k, b_grid[j]};
    // One seed per budget point: the three policies see identical windows.
    const std::uint64_t point_seed = derive_seed(run.master_seed, j);
    for (const Policy policy : kPolicies) {
      const SimResult sim = run_experiment(model, policy, budgets, channel,
                                           run.replications, point_seed,
                                           run.threads);
      const std::vector<std::string> row = {
          policy_label(policy),
          format_cell(static_cast<double>(budgets.b)),
          format_cell(sim.mean_hits),
          format_cell(sim.se_hits),
          format_cell(sim.mean_gain_bits),
          format_cell(sim.se_gain_bits),
          format_cell(sim.mean_selected_hit_rate),
          format_cell(static_cast<double>(sim.replications))};
      writer.write_row(row);
    }
  }
  writer.close();

  RunManifest manifest = make_manifest(
      config, run.master_seed,
      {{"policy", Provenance::kClosedForm},
       {"b", Provenance::kClosedForm},
       {"mean_hits", Provenance::kEmpirical},
       {"se_hits", Provenance::kEmpirical},
       {"mean_gain_bits", Provenance::kEmpirical},
       {"se_gain_bits", Provenance::kEmpirical},
       {"selected_hit_rate", Provenance::kEmpirical},
       {"replications", Provenance::kClosedForm}});
  manifest.parameters["p"] = model.p();
  manifest.parameters["epsilon"] = model.epsilon();
  manifest.parameters["rho"] = channel.rho();
  manifest.parameters["k"] = static_cast<double>(k);
  write_manifest(manifest, writer.path());
  return {writer.path()};
}

// One cross-module consistency check: a measured quantity, its reference,
// and the tolerance it was held to.  `se` and `replications` are zero for
// deterministic checks.
struct InvariantCheck {
  std::string name;
  double measured = 0.0;
  double reference = 0.0;
  double tolerance = 0.0;
  double se = 0.0;
  std::int64_t replications = 0;
  bool upper_bound_only = false;
  bool pass = false;
};

struct InvariantReport {
  std::filesystem::path path;
  std::vector<InvariantCheck> checks;
  bool all_pass = false;
};

namespace detail {

inline InvariantCheck finish_check(InvariantCheck check) {
  const double slack = check.measured - check.reference;
  check.pass = check.upper_bound_only ? slack <= check.tolerance
                                      : std::abs(slack) <= check.tolerance;
  return check;
}

}  // namespace detail

// Batch of cross-module invariants under one master seed.  `tolerance_scale`
// multiplies every tolerance; zero makes the statistical checks impossible
// to satisfy, which is the suite's own negative control.
inline InvariantReport run_invariant_suite(
    const Config& config, const std::filesystem::path& out_dir) {
  const ScreeningModel model = model_from_config(config);
  const RunSettings run = run_settings_from_config(config);
  const double scale = config.get_real("check.tolerance_scale", 1.0);
  if (!(scale >= 0.0)) {
    throw std::runtime_error("check: tolerance_scale must be nonnegative");
  }
  const std::int64_t k = config.get_int("budgets.k", 10000);
  const std::int64_t b = config.get_int("budgets.b", 100);
  const Budgets budgets{k, b};
  budgets.validate();
  const VerificationChannel channel(config.get_real("channel.rho", 0.1));
  const std::int64_t reps = config.get_int("run.replications", 300);
  const InfoParams params{model.p(), screening_information(model),
                          channel.information(),
                          VerificationChannel::claim_entropy()};
  const double rate = marginal_rate(model);

  std::vector<InvariantCheck> checks;
  const auto seed_for = [&](std::uint64_t index) {
    return derive_seed(run.master_seed, index);
  };

  {  // Sampled relevance frequency against its quadrature value.
    const std::size_t n = 200000;
    const WindowSample window = sample_window(model, n, seed_for(1));
    double sum = 0.0;
    for (const auto t : window.t) sum += t;
    const double mean = sum / static_cast<double>(n);
    const double se =
        std::sqrt(std::max(mean * (1.0 - mean), 1e-12) / static_cast<double>(n));
    checks.push_back(detail::finish_check(
        {"marginal_rate_sampling", mean, rate, scale * 4.0 * se, se,
         static_cast<std::int64_t>(n), false, false}));
  }

  const SimResult top = run_experiment(model, Policy::kTopB, budgets, channel,
                                       reps, seed_for(2), run.threads);
  const TopSumEstimate boundary =
      expected_top_b_sum(model, k, b, reps, seed_for(2), run.threads);
  {  // Hit-count identity: mean TopB hits match the boundary sum.
    const double se = std::sqrt(top.se_hits * top.se_hits +
                                boundary.se * boundary.se);
    checks.push_back(detail::finish_check(
        {"top_b_hits_match_boundary", top.mean_hits, boundary.mean,
         scale * 3.0 * se, se, reps, false, false}));
  }
  {  // Blind selection earns the base rate.
    const SimResult random = run_experiment(model, Policy::kRandomB, budgets,
                                            channel, reps, seed_for(3),
                                            run.threads);
    checks.push_back(detail::finish_check(
        {"random_policy_base_rate", random.mean_hits,
         static_cast<double>(b) * rate, scale * 4.0 * random.se_hits,
         random.se_hits, reps, false, false}));
  }
  {  // Clairvoyant selection meets the finite-pool expectation.
    const SimResult oracle = run_experiment(model, Policy::kOracleB, budgets,
                                            channel, reps, seed_for(4),
                                            run.threads);
    checks.push_back(detail::finish_check(
        {"oracle_policy_ceiling", oracle.mean_hits,
         expected_min_binomial(k, rate, b), scale * 4.0 * oracle.se_hits,
         oracle.se_hits, reps, false, false}));
  }
  {  // Simulated gain stays below the converse.
    checks.push_back(detail::finish_check(
        {"gain_below_converse", top.mean_gain_bits,
         converse_gain(params, budgets), scale * 3.0 * top.se_gain_bits,
         top.se_gain_bits, reps, true, false}));
  }
  {  // Selected hit rate stays below the enrichment bound.
    const double se = top.se_hits / static_cast<double>(b);
    checks.push_back(detail::finish_check(
        {"selection_enrichment_bound", top.mean_selected_hit_rate,
         enrichment_bound(model.p(), params.screening_info, budgets.alpha()),
         scale * 3.0 * se, se, reps, true, false}));
  }
  {  // Played-out channel log-loss matches the hit-count identity.
    const SimResult logloss = empirical_logloss_gain(
        model, Policy::kTopB, budgets, channel, reps, seed_for(2),
        run.threads);
    const double se = std::sqrt(logloss.se_gain_bits * logloss.se_gain_bits +
                                top.se_gain_bits * top.se_gain_bits);
    checks.push_back(detail::finish_check(
        {"logloss_matches_hit_identity", logloss.mean_gain_bits,
         top.mean_gain_bits, scale * 3.0 * se, se, reps, false, false}));
  }
  {  // Finite-K boundary sits near its large-K quadrature limit.
    const double fraction = boundary.mean / static_cast<double>(k);
    const double limit = single_letter_top_fraction(model, budgets.alpha());
    const double se = boundary.se / static_cast<double>(k);
    checks.push_back(detail::finish_check(
        {"single_letter_limit", fraction, limit, scale * 3.0 * se, se, reps,
         false, false}));
  }
  {  // Small-epsilon closed form tracks the exact information.
    const double exact = params.screening_info;
    const double weak = screening_information_weak(model);
    checks.push_back(detail::finish_check(
        {"weak_screening_info_gap", weak / exact, 1.0, scale * 0.05, 0.0, 0,
         false, false}));
  }
  {  // Budget solver inverts the converse.
    double worst = 0.0;
    for (const double delta : {1e-3, 1e-2, 1e-1, 1.0, 10.0}) {
      const double budget = required_budget(params, static_cast<double>(k),
                                            delta);
      const double back = converse_gain(params, static_cast<double>(k), budget);
      worst = std::max(worst, std::abs(back - delta) / delta);
    }
    checks.push_back(detail::finish_check(
        {"budget_round_trip", worst, 0.0, scale * 1e-9, 0.0, 0, false,
         false}));
  }
  {  // Sampled tail mean against the closed form.
    const std::size_t n = 1000000;
    RngStream stream(seed_for(5));
    std::vector<double> draws(n);
    for (double& g : draws) g = stream.standard_normal();
    const double alpha = 0.1;
    const TailMeanEstimate estimate = empirical_tail_mean_with_se(
        draws, static_cast<std::int64_t>(alpha * static_cast<double>(n)));
    const double exact = gaussian_tail_mean(alpha);
    checks.push_back(detail::finish_check(
        {"gaussian_tail_mean_sampling", estimate.mean, exact,
         scale * 0.01 * exact, estimate.se, static_cast<std::int64_t>(n),
         false, false}));
  }
  {  // Exhaustive subset search agrees with rank-by-score selection.
    RngStream stream(seed_for(6));
    std::int64_t agreed = 0;
    const std::int64_t instances = 20;
    for (std::int64_t i = 0; i < instances; ++i) {
      std::vector<double> etas(10);
      for (double& eta : etas) eta = stream.uniform();
      agreed += brute_force_selection_check(etas, 4);
    }
    checks.push_back(detail::finish_check(
        {"top_b_enumeration",
         static_cast<double>(agreed) / static_cast<double>(instances), 1.0,
         0.0, 0.0, instances, false, false}));
  }

  InvariantReport report;
  report.checks = std::move(checks);
  report.all_pass = std::all_of(report.checks.begin(), report.checks.end(),
                                [](const InvariantCheck& c) { return c.pass; });

  nlohmann::json doc;
  doc["tolerance_scale"] = scale;
  doc["seed"] = run.master_seed;
  doc["all_pass"] = report.all_pass;
  nlohmann::json entries = nlohmann::json::array();
  for (const InvariantCheck& check : report.checks) {
    nlohmann::json entry;
    entry["name"] = check.name;
    entry["measured"] = check.measured;
    entry["reference"] = check.reference;
    entry["tolerance"] = check.tolerance;
    entry["comparison"] = check.upper_bound_only ? "upper-bound" : "two-sided";
    if (check.replications > 0) {
      entry["se"] = check.se;
      entry["replications"] = check.replications;
    } else {
      entry["se"] = nullptr;
      entry["replications"] = nullptr;
    }
    entry["pass"] = check.pass;
    entries.push_back(std::move(entry));
  }
  doc["checks"] = std::move(entries);

  report.path = out_dir / "check_report.json";
  {
    std::ofstream out(report.path, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("check: cannot open " + report.path.string());
    }
    out << doc.dump(2) << '\n';
    if (!out) {
      throw std::runtime_error("check: write failed for " +
                               report.path.string());
    }
  }
  RunManifest manifest = make_manifest(config, run.master_seed, {});
  manifest.parameters["tolerance_scale"] = scale;
  write_manifest(manifest, report.path);
  return report;
}

// Config-driven dispatch; the CLI subcommands map onto these kinds.
inline bool run_from_config(const Config& config,
                            const std::filesystem::path& out_dir) {
  const std::string kind = config.get_string("experiment.kind");
  if (kind == "figure3") {
    run_figure3(config, out_dir);
  } else if (kind == "bounds-curve") {
    run_bounds_curve(config, out_dir);
  } else if (kind == "tails-curve") {
    run_tails_curve(config, out_dir);
  } else if (kind == "benchmark-curve") {
    run_benchmark_curve(config, out_dir);
  } else if (kind == "simulate") {
    run_simulate(config, out_dir);
  } else if (kind == "invariant-suite") {
    return run_invariant_suite(config, out_dir).all_pass;
  } else {
    throw std::runtime_error("config: unknown experiment kind '" + kind + "'");
  }
  return true;
}

}  // namespace haystack
