// Command line front end: closed-form thresholds, the three experiment
// sweeps (CSV + manifest), null-law diagnostics and hardware cost tables.
//
// Every run that writes a CSV drops a key=value manifest next to it; feeding
// that manifest back through --config reproduces the CSV byte for byte.

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "emrsense/cost.hpp"
#include "emrsense/detector.hpp"
#include "emrsense/io.hpp"
#include "emrsense/montecarlo.hpp"
#include "emrsense/numerics.hpp"
#include "emrsense/version.hpp"

namespace {

using emrsense::EngineOptions;
using emrsense::PdSweepOptions;
using emrsense::QuantScheme;
using emrsense::RunManifest;
using emrsense::SweepResult;
using emrsense::ThresholdMode;
using emrsense::ThresholdScheme;
using emrsense::ThresholdSpec;

constexpr double kDefaultAngle = -1.0471975511965976;  // -pi/3

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> values;
  std::stringstream stream(text);
  std::string token;
  while (std::getline(stream, token, ',')) {
    if (token.empty()) continue;
    std::size_t used = 0;
    const int value = std::stoi(token, &used);
    if (used != token.size() || value < 1)
      throw CLI::ValidationError("--n-list", "expected positive integers: " + text);
    values.push_back(value);
  }
  if (values.empty())
    throw CLI::ValidationError("--n-list", "no sample sizes given");
  return values;
}

std::vector<double> snr_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || hi < lo)
    throw CLI::ValidationError("--snr-step", "need snr-min <= snr-max and step > 0");
  std::vector<double> grid;
  for (double v = lo; v <= hi + 1e-9; v += step) grid.push_back(v);
  return grid;
}

const auto kProbability = CLI::Validator(
    [](std::string& value) -> std::string {
      double p = 0.0;
      try {
        p = std::stod(value);
      } catch (...) {
        return "not a number: " + value;
      }
      if (!(p > 0.0 && p < 1.0)) return "must lie strictly inside (0, 1): " + value;
      return {};
    },
    "PROB");

std::size_t resolve_trials(std::size_t requested, double epsilon) {
  if (requested > 0) return requested;
  return static_cast<std::size_t>(std::llround(std::ceil(1000.0 / epsilon)));
}

void emit_sweep(const SweepResult& sweep, const std::string& command,
                const std::string& out, const std::string& started,
                const std::vector<std::pair<std::string, std::string>>& params) {
  RunManifest manifest;
  manifest.command = command;
  manifest.version = emrsense::version();
  manifest.started_at = started;
  manifest.finished_at = emrsense::iso8601_utc_now();
  manifest.parameters = params;
  const std::filesystem::path csv_path(out);
  emrsense::write_text_file(csv_path, emrsense::sweep_to_csv(sweep));
  emrsense::write_text_file(emrsense::manifest_path_for(csv_path),
                            emrsense::manifest_to_string(manifest));
  std::cout << "wrote " << csv_path.string() << " and "
            << emrsense::manifest_path_for(csv_path).string() << "\n";
}

std::string fmt(double v) { return emrsense::format_double(v); }

std::string config_path_sink;  // bound to every subcommand's --config option

void configure_replay(CLI::App* cmd) {
  // Options may appear both in a config file and on the command line; the
  // later (command line) occurrence wins.
  cmd->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  cmd->add_option("--config", config_path_sink,
                  "key=value file applied as defaults; a run manifest replays the run");
}

std::vector<std::pair<std::string, std::string>> read_key_value_file(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--config", "cannot read " + path);
  std::vector<std::pair<std::string, std::string>> items;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    items.emplace_back(line.substr(0, eq), line.substr(eq + 1));
  }
  return items;
}

// Expands `--config FILE` by splicing the file's key=value pairs in as
// --key=value arguments right after the subcommand name, so that explicit
// command line flags (which come later) take precedence. Manifest metadata
// keys are skipped.
std::vector<std::string> expand_config_args(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size())
      path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0)
      path = args[i].substr(9);
  }
  if (path.empty()) return args;

  std::size_t insert_at = 0;
  while (insert_at < args.size() && args[insert_at].rfind("-", 0) == 0) ++insert_at;
  if (insert_at < args.size()) ++insert_at;  // just after the subcommand name

  std::vector<std::string> injected;
  for (const auto& [key, value] : read_key_value_file(path)) {
    if (key == "command" || key == "version" || key == "started" || key == "finished")
      continue;
    injected.push_back("--" + key + "=" + value);
  }
  args.insert(args.begin() + static_cast<std::ptrdiff_t>(insert_at), injected.begin(),
              injected.end());
  return args;
}

struct ThresholdArgs {
  int m = 4;
  int n = 1024;
  double pfa = 1e-3;
  std::uint64_t seed = 0;  // accepted for interface uniformity; unused
};

struct Fig1Args {
  double c = 0.5;
  double pfa = 1e-3;
  std::size_t trials = 0;
  std::uint64_t seed = 1;
  std::string n_list = "16,32,64,128,256,512";
  std::string out = "fig1.csv";
  bool skip_fullres = false;
  int workers = 0;
};

struct Fig2Args {
  double c = 0.5;
  int n = 128;
  double pfa = 1e-3;
  std::size_t trials = 2000;
  std::uint64_t seed = 1;
  double angle = kDefaultAngle;
  double snr_min = -22.0;
  double snr_max = 0.0;
  double snr_step = 1.0;
  std::string threshold_mode = "theoretical";
  std::size_t threshold_trials = 0;
  std::string out = "fig2.csv";
  int workers = 0;
};

struct Fig3Args {
  double c = 0.5;
  double snr_db = -6.0;
  double pfa = 1e-3;
  std::size_t trials = 2000;
  std::uint64_t seed = 1;
  double angle = kDefaultAngle;
  std::string n_list = "8,12,16,24,32,48,64,96,128,192";
  std::string threshold_mode = "theoretical";
  std::size_t threshold_trials = 0;
  std::string out = "fig3.csv";
  int workers = 0;
};

struct DiagnoseArgs {
  int m = 4;
  int n = 1024;
  std::size_t trials = 10000;
  std::uint64_t seed = 1;
  int workers = 0;
};

struct CostArgs {
  long long m = 4;
  long long n = 1024;
  std::uint64_t seed = 0;  // accepted for interface uniformity; unused
};

int run_threshold(const ThresholdArgs& args) {
  const long long q = emrsense::chi_square_dof(args.m);
  const ThresholdSpec full{args.m, args.n, args.pfa, ThresholdScheme::FullRes};
  const ThresholdSpec exact{args.m, args.n, args.pfa, ThresholdScheme::OneBitExact};
  const ThresholdSpec normal{args.m, args.n, args.pfa, ThresholdScheme::OneBitNormal};
  std::cout << "m " << args.m << "\n"
            << "n " << args.n << "\n"
            << "pfa " << fmt(args.pfa) << "\n"
            << "c " << fmt(full.aspect_ratio()) << "\n"
            << "q " << q << "\n"
            << "threshold_fullres " << fmt(emrsense::threshold_full(full)) << "\n"
            << "threshold_onebit_exact " << fmt(emrsense::threshold_one_bit_exact(exact))
            << "\n"
            << "threshold_onebit_normal "
            << fmt(emrsense::threshold_one_bit_normal(normal)) << "\n";
  return 0;
}

int run_fig1(const Fig1Args& args) {
  const std::string started = emrsense::iso8601_utc_now();
  const std::vector<int> n_values = parse_int_list(args.n_list);
  const std::size_t trials = resolve_trials(args.trials, args.pfa);
  const SweepResult sweep = emrsense::sweep_threshold_error(
      args.c, n_values, args.pfa, trials, args.seed, EngineOptions{args.workers},
      {.include_full_res = !args.skip_fullres});
  emit_sweep(sweep, "fig1", args.out, started,
             {{"c", fmt(args.c)},
              {"pfa", fmt(args.pfa)},
              {"trials", std::to_string(trials)},
              {"seed", std::to_string(args.seed)},
              {"n-list", args.n_list},
              {"skip-fullres", args.skip_fullres ? "true" : "false"},
              {"workers", std::to_string(args.workers)},
              {"out", args.out}});
  return 0;
}

int run_fig2(const Fig2Args& args) {
  const std::string started = emrsense::iso8601_utc_now();
  const std::vector<double> grid = snr_grid(args.snr_min, args.snr_max, args.snr_step);
  PdSweepOptions options;
  options.threshold_mode = args.threshold_mode == "empirical" ? ThresholdMode::Empirical
                                                              : ThresholdMode::Theoretical;
  options.threshold_trials = args.threshold_trials;
  const SweepResult sweep =
      emrsense::sweep_pd_vs_snr(args.c, args.n, grid, args.pfa, args.trials, args.angle,
                                args.seed, options, EngineOptions{args.workers});
  emit_sweep(sweep, "fig2", args.out, started,
             {{"c", fmt(args.c)},
              {"n", std::to_string(args.n)},
              {"pfa", fmt(args.pfa)},
              {"trials", std::to_string(args.trials)},
              {"seed", std::to_string(args.seed)},
              {"angle", fmt(args.angle)},
              {"snr-min", fmt(args.snr_min)},
              {"snr-max", fmt(args.snr_max)},
              {"snr-step", fmt(args.snr_step)},
              {"threshold-mode", args.threshold_mode},
              {"threshold-trials", std::to_string(args.threshold_trials)},
              {"workers", std::to_string(args.workers)},
              {"out", args.out}});
  return 0;
}

int run_fig3(const Fig3Args& args) {
  const std::string started = emrsense::iso8601_utc_now();
  const std::vector<int> n_values = parse_int_list(args.n_list);
  PdSweepOptions options;
  options.threshold_mode = args.threshold_mode == "empirical" ? ThresholdMode::Empirical
                                                              : ThresholdMode::Theoretical;
  options.threshold_trials = args.threshold_trials;
  const SweepResult sweep =
      emrsense::sweep_pd_vs_n(args.c, n_values, args.snr_db, args.pfa, args.trials,
                              args.angle, args.seed, options, EngineOptions{args.workers});
  emit_sweep(sweep, "fig3", args.out, started,
             {{"c", fmt(args.c)},
              {"snr-db", fmt(args.snr_db)},
              {"pfa", fmt(args.pfa)},
              {"trials", std::to_string(args.trials)},
              {"seed", std::to_string(args.seed)},
              {"angle", fmt(args.angle)},
              {"n-list", args.n_list},
              {"threshold-mode", args.threshold_mode},
              {"threshold-trials", std::to_string(args.threshold_trials)},
              {"workers", std::to_string(args.workers)},
              {"out", args.out}});
  return 0;
}

int run_diagnose(const DiagnoseArgs& args) {
  // Tolerances mirror the library's validated regime (n >= 1024, 1e4 trials).
  constexpr double kKsTolerance = 0.02;
  constexpr double kCorrTolerance = 0.05;
  constexpr double kDiagRelTolerance = 0.10;

  const auto report =
      emrsense::run_diagnostics(args.m, args.n, args.trials, args.seed,
                                EngineOptions{args.workers});
  const auto verdict = [](bool ok) { return ok ? "PASS" : "FAIL"; };

  double worst_diag = 0.0;
  for (double v : report.prop1_diag)
    worst_diag = std::max(worst_diag,
                          std::fabs(v - 1.0 / args.n) / (1.0 / args.n));

  const bool ks_entry_ok = report.ks_entry_normal < kKsTolerance;
  const bool ks_stat_ok = report.ks_statistic_chi2 < kKsTolerance;
  const bool corr_ok = report.prop1_max_offdiag_corr < kCorrTolerance;
  const bool diag_ok = worst_diag < kDiagRelTolerance;

  std::cout << "m " << args.m << " n " << args.n << " trials " << args.trials
            << " seed " << args.seed << "\n";
  std::cout << "ks_entry_vs_normal " << fmt(report.ks_entry_normal) << " (< "
            << kKsTolerance << ") " << verdict(ks_entry_ok) << "\n";
  std::cout << "ks_statistic_vs_chi2 " << fmt(report.ks_statistic_chi2) << " (< "
            << kKsTolerance << ") " << verdict(ks_stat_ok) << "\n";
  std::cout << "prop1_max_offdiag_corr " << fmt(report.prop1_max_offdiag_corr)
            << " (< " << kCorrTolerance << ") " << verdict(corr_ok) << "\n";
  std::cout << "prop1_diag_worst_rel_err " << fmt(worst_diag) << " (< "
            << kDiagRelTolerance << ") " << verdict(diag_ok) << "\n";
  const int passed = ks_entry_ok + ks_stat_ok + corr_ok + diag_ok;
  std::cout << "checks_passed " << passed << "/4\n";
  return 0;
}

int run_cost(const CostArgs& args) {
  const auto eight = emrsense::cost_report(QuantScheme::EightBit, args.m, args.n);
  const auto one = emrsense::cost_report(QuantScheme::OneBit, args.m, args.n);
  std::cout << "scheme flops transistors\n";
  for (const auto& report : {eight, one})
    std::cout << emrsense::scheme_name(report.scheme) << " "
              << emrsense::uint128_to_string(report.flops) << " "
              << emrsense::uint128_to_string(report.transistors) << "\n";
  std::cout << "flop_ratio_onebit_over_eightbit "
            << emrsense::uint128_to_string(one.flops / eight.flops) << "\n";
  // 1506 / 8 transistors at equal (m, n)
  std::printf("transistor_ratio_eightbit_over_onebit %.2f\n", 1506.0 / 8.0);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"One-bit eigenvalue moment ratio spectrum sensing laboratory"};
  app.set_version_flag("--version", EMRSENSE_VERSION_STRING);
  app.require_subcommand(1);

  ThresholdArgs threshold_args;
  auto* threshold_cmd =
      app.add_subcommand("threshold", "Print the closed-form detection thresholds");
  configure_replay(threshold_cmd);
  threshold_cmd->add_option("--m", threshold_args.m, "antenna count")
      ->required()
      ->check(CLI::PositiveNumber);
  threshold_cmd->add_option("--n", threshold_args.n, "sample count")
      ->required()
      ->check(CLI::PositiveNumber);
  threshold_cmd->add_option("--pfa", threshold_args.pfa, "false-alarm rate")
      ->check(kProbability);
  threshold_cmd->add_option("--seed", [](const std::vector<std::string>&) { return true; },
                            "accepted for interface uniformity; unused");

  Fig1Args fig1_args;
  auto* fig1_cmd = app.add_subcommand(
      "fig1", "Relative threshold error versus sample size (CSV)");
  configure_replay(fig1_cmd);
  fig1_cmd->add_option("--c", fig1_args.c, "aspect ratio m/n")->check(CLI::PositiveNumber);
  fig1_cmd->add_option("--pfa", fig1_args.pfa, "false-alarm rate")->check(kProbability);
  fig1_cmd->add_option("--trials", fig1_args.trials,
                       "H0 trials per point (0 = 1000/pfa)");
  fig1_cmd->add_option("--seed", fig1_args.seed, "master seed");
  fig1_cmd->add_option("--n-list", fig1_args.n_list, "comma separated sample sizes");
  fig1_cmd->add_option("--out", fig1_args.out, "output CSV path");
  fig1_cmd->add_flag("--skip-fullres", fig1_args.skip_fullres,
                     "omit the full-resolution series");
  fig1_cmd->add_option("--workers", fig1_args.workers, "worker threads (0 = auto)");

  Fig2Args fig2_args;
  auto* fig2_cmd =
      app.add_subcommand("fig2", "Detection probability versus SNR (CSV)");
  configure_replay(fig2_cmd);
  fig2_cmd->add_option("--c", fig2_args.c, "aspect ratio m/n")->check(CLI::PositiveNumber);
  fig2_cmd->add_option("--n", fig2_args.n, "sample count")->check(CLI::PositiveNumber);
  fig2_cmd->add_option("--pfa", fig2_args.pfa, "false-alarm rate")->check(kProbability);
  fig2_cmd->add_option("--trials", fig2_args.trials, "trials per SNR point");
  fig2_cmd->add_option("--seed", fig2_args.seed, "master seed");
  fig2_cmd->add_option("--angle", fig2_args.angle, "PU angle in radians");
  fig2_cmd->add_option("--snr-min", fig2_args.snr_min, "grid start in dB");
  fig2_cmd->add_option("--snr-max", fig2_args.snr_max, "grid end in dB");
  fig2_cmd->add_option("--snr-step", fig2_args.snr_step, "grid step in dB");
  fig2_cmd->add_option("--threshold-mode", fig2_args.threshold_mode,
                       "theoretical or empirical")
      ->check(CLI::IsMember({"theoretical", "empirical"}));
  fig2_cmd->add_option("--threshold-trials", fig2_args.threshold_trials,
                       "H0 trials per empirical threshold (0 = 1000/pfa)");
  fig2_cmd->add_option("--out", fig2_args.out, "output CSV path");
  fig2_cmd->add_option("--workers", fig2_args.workers, "worker threads (0 = auto)");

  Fig3Args fig3_args;
  auto* fig3_cmd =
      app.add_subcommand("fig3", "Detection probability versus sample size (CSV)");
  configure_replay(fig3_cmd);
  fig3_cmd->add_option("--c", fig3_args.c, "aspect ratio m/n")->check(CLI::PositiveNumber);
  fig3_cmd->add_option("--snr-db", fig3_args.snr_db, "SNR in dB");
  fig3_cmd->add_option("--pfa", fig3_args.pfa, "false-alarm rate")->check(kProbability);
  fig3_cmd->add_option("--trials", fig3_args.trials, "trials per point");
  fig3_cmd->add_option("--seed", fig3_args.seed, "master seed");
  fig3_cmd->add_option("--angle", fig3_args.angle, "PU angle in radians");
  fig3_cmd->add_option("--n-list", fig3_args.n_list, "comma separated sample sizes");
  fig3_cmd->add_option("--threshold-mode", fig3_args.threshold_mode,
                       "theoretical or empirical")
      ->check(CLI::IsMember({"theoretical", "empirical"}));
  fig3_cmd->add_option("--threshold-trials", fig3_args.threshold_trials,
                       "H0 trials per empirical threshold (0 = 1000/pfa)");
  fig3_cmd->add_option("--out", fig3_args.out, "output CSV path");
  fig3_cmd->add_option("--workers", fig3_args.workers, "worker threads (0 = auto)");

  DiagnoseArgs diagnose_args;
  auto* diagnose_cmd = app.add_subcommand(
      "diagnose", "Null-law diagnostics: entry normality, chi-square fit, "
                  "upper-triangle decorrelation");
  configure_replay(diagnose_cmd);
  diagnose_cmd->add_option("--m", diagnose_args.m, "antenna count")
      ->check(CLI::PositiveNumber);
  diagnose_cmd->add_option("--n", diagnose_args.n, "sample count")
      ->check(CLI::PositiveNumber);
  diagnose_cmd->add_option("--trials", diagnose_args.trials, "H0 trials");
  diagnose_cmd->add_option("--seed", diagnose_args.seed, "master seed");
  diagnose_cmd->add_option("--workers", diagnose_args.workers,
                           "worker threads (0 = auto)");

  CostArgs cost_args;
  auto* cost_cmd = app.add_subcommand("cost", "Flop and transistor cost table");
  configure_replay(cost_cmd);
  cost_cmd->add_option("--m", cost_args.m, "antenna count")
      ->required()
      ->check(CLI::PositiveNumber);
  cost_cmd->add_option("--n", cost_args.n, "sample count")
      ->required()
      ->check(CLI::PositiveNumber);
  cost_cmd->add_option("--seed", [](const std::vector<std::string>&) { return true; },
                       "accepted for interface uniformity; unused");

  try {
    std::vector<std::string> args = expand_config_args(argc, argv);
    std::reverse(args.begin(), args.end());  // App::parse consumes from the back
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (threshold_cmd->parsed()) return run_threshold(threshold_args);
    if (fig1_cmd->parsed()) return run_fig1(fig1_args);
    if (fig2_cmd->parsed()) return run_fig2(fig2_args);
    if (fig3_cmd->parsed()) return run_fig3(fig3_args);
    if (diagnose_cmd->parsed()) return run_diagnose(diagnose_args);
    if (cost_cmd->parsed()) return run_cost(cost_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
