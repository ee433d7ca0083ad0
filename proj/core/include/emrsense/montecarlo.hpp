#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "emrsense/detector.hpp"
#include "emrsense/signal.hpp"

namespace emrsense {

enum class Statistic { OneBit, FullRes };

struct StatisticRequest {
  bool one_bit = false;
  bool full_res = false;
};

// Per-trial statistic values; index = trial id = RNG stream id, so results
// are identical for any worker count.
struct TrialBatch {
  std::vector<double> one_bit;
  std::vector<double> full_res;

  const std::vector<double>& values(Statistic s) const {
    return s == Statistic::OneBit ? one_bit : full_res;
  }
};

struct EngineOptions {
  int workers = 0;  // 0 = hardware concurrency
};

// Independent trials of the configured scenario; trial t draws from
// RngStream(master_seed, t). Under H0 a one-bit-only request skips the
// Gaussian synthesis and draws the sign frame as fair coin flips directly,
// which is distribution-exact (H0 signs are i.i.d. Rademacher) and much
// cheaper at scale.
TrialBatch run_trials(const ScenarioConfig& config, StatisticRequest request,
                      std::size_t trials, std::uint64_t master_seed,
                      const EngineOptions& options = {});

// The ceil((1 - epsilon) N)-th ascending order statistic (conservative /
// upper convention). Throws std::invalid_argument when N * epsilon < 1,
// where the quantile is unresolvable.
double order_statistic_quantile(std::vector<double> values, double epsilon);

// Empirical (1 - epsilon) quantile of a statistic over i.i.d. H0 trials.
// Warns on stderr below the 10^3 / epsilon trial prescription.
double empirical_threshold(const ScenarioConfig& h0_config, Statistic statistic,
                           double epsilon, std::size_t trials,
                           std::uint64_t master_seed,
                           const EngineOptions& options = {});

// |eta_theoretical - eta_empirical| / eta_empirical.
double relative_error(double eta_theoretical, double eta_empirical);

struct RateEstimate {
  double rate = 0.0;
  double std_error = 0.0;  // binomial: sqrt(p (1-p) / trials)
  std::size_t trials = 0;
};

// Fraction of trials whose statistic exceeds the threshold (P_fa under H0
// configs, P_d under H1 configs).
RateEstimate estimate_rate(const ScenarioConfig& config, Statistic statistic,
                           double threshold, std::size_t trials,
                           std::uint64_t master_seed,
                           const EngineOptions& options = {});

// ---------------------------------------------------------------------------
// Figure sweeps

struct SweepResult {
  std::string axis_name;
  std::vector<double> axis_values;
  std::vector<std::pair<std::string, std::vector<double>>> series;
  std::map<std::string, std::string> metadata;

  const std::vector<double>& series_values(const std::string& name) const;
};

struct ThresholdErrorOptions {
  bool include_full_res = true;
};

// Relative error of each closed-form threshold against its empirical
// counterpart, versus sample size, with m = round(c n) per point.
SweepResult sweep_threshold_error(double c, std::span<const int> n_values,
                                  double epsilon, std::size_t trials_per_point,
                                  std::uint64_t master_seed,
                                  const EngineOptions& options = {},
                                  const ThresholdErrorOptions& sweep_options = {});

enum class ThresholdMode { Theoretical, Empirical };

struct PdSweepOptions {
  ThresholdMode threshold_mode = ThresholdMode::Theoretical;
  // H0 trials per empirical threshold; 0 = the 10^3 / epsilon prescription.
  std::size_t threshold_trials = 0;
};

// Detection probability versus SNR at fixed (c, n) for both detectors,
// single PU at pu_angle, thresholds at the shared epsilon.
SweepResult sweep_pd_vs_snr(double c, int n, std::span<const double> snr_db_values,
                            double epsilon, std::size_t trials_per_point,
                            double pu_angle, std::uint64_t master_seed,
                            const PdSweepOptions& sweep_options = {},
                            const EngineOptions& options = {});

// Detection probability versus sample size at fixed SNR, m = round(c n).
SweepResult sweep_pd_vs_n(double c, std::span<const int> n_values, double snr_db,
                          double epsilon, std::size_t trials_per_point,
                          double pu_angle, std::uint64_t master_seed,
                          const PdSweepOptions& sweep_options = {},
                          const EngineOptions& options = {});

// First upward crossing of `level`, linearly interpolated on the x grid.
std::optional<double> crossing_location(std::span<const double> x,
                                        std::span<const double> y, double level);

// ---------------------------------------------------------------------------
// Null-law diagnostics

// Position of S_{i,j} (0-based i < j) in the stacked upper-triangle vector
// [S_01, S_02, S_12, S_03, ...]; inverse below.
std::size_t upper_tri_index(int i, int j);
std::pair<int, int> upper_tri_pair(std::size_t p);

struct Proposition1Result {
  double max_offdiag_corr = 0.0;
  std::vector<double> diag;  // E{S_ij^2} estimates, length m(2m-1)
};

// Estimates C_r = E{r r^T} of the stacked upper-triangle SCM entries from
// independent H0 trials and reports how diagonal it is.
Proposition1Result proposition1_diagnostic(int m, int n, std::size_t trials,
                                           std::uint64_t master_seed,
                                           const EngineOptions& options = {});

// Two-sided Kolmogorov-Smirnov distance between a sample and a CDF.
double ks_distance(std::vector<double> samples,
                   const std::function<double(double)>& cdf);

struct DiagnosticsReport {
  int m = 0;
  int n = 0;
  std::size_t trials = 0;
  double ks_entry_normal = 0.0;     // sqrt(n) S_{0,1} vs N(0,1)
  double ks_statistic_chi2 = 0.0;   // m n (xi - 1) vs chi^2_q
  double prop1_max_offdiag_corr = 0.0;
  std::vector<double> prop1_diag;
};

DiagnosticsReport run_diagnostics(int m, int n, std::size_t trials,
                                  std::uint64_t master_seed,
                                  const EngineOptions& options = {});

}  // namespace emrsense
