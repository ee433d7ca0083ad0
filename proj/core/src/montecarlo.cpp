#include "emrsense/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <stdexcept>
#include <thread>

#include "emrsense/numerics.hpp"
#include "emrsense/quantizer.hpp"

namespace emrsense {

namespace {

// Sub-seed contexts separating the independent trial sets of one experiment.
constexpr std::uint64_t kCtxOneBitThreshold = 1;
constexpr std::uint64_t kCtxFullResThreshold = 2;
constexpr std::uint64_t kCtxPdTrials = 3;
constexpr std::uint64_t kCtxEntryLaw = 4;
constexpr std::uint64_t kCtxProposition1 = 5;

std::string fmt_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int resolve_workers(int requested, std::size_t trials) {
  int w = requested;
  if (w <= 0) w = static_cast<int>(std::thread::hardware_concurrency());
  if (w < 1) w = 1;
  if (static_cast<std::size_t>(w) > trials) w = static_cast<int>(std::max<std::size_t>(trials, 1));
  return w;
}

// Contiguous partition of [0, trials) over the workers. Results must be
// written into per-trial slots so the outcome cannot depend on the split.
template <typename Fn>
void parallel_for_trials(std::size_t trials, int workers, Fn&& body) {
  const int w = resolve_workers(workers, trials);
  if (w <= 1) {
    body(std::size_t{0}, trials);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(w);
  const std::size_t base = trials / w;
  const std::size_t extra = trials % w;
  std::size_t lo = 0;
  for (int i = 0; i < w; ++i) {
    const std::size_t hi = lo + base + (static_cast<std::size_t>(i) < extra ? 1 : 0);
    pool.emplace_back([&body, lo, hi] { body(lo, hi); });
    lo = hi;
  }
  for (auto& t : pool) t.join();
}

// H0 sign frames are i.i.d. fair coin flips; draw the packed rows directly.
void fill_h0_signs(RngStream& rng, SignFrame& signs) {
  for (int r = 0; r < signs.rows(); ++r) rng.fill_bits(signs.row_bits(r));
  signs.mask_tail();
}

double emr_full_from_lower(const Eigen::MatrixXcd& phi, int m) {
  double trace = 0.0;
  double frob2 = 0.0;
  for (int j = 0; j < m; ++j) {
    trace += phi(j, j).real();
    frob2 += std::norm(phi(j, j));
    for (int i = j + 1; i < m; ++i) frob2 += 2.0 * std::norm(phi(i, j));
  }
  return static_cast<double>(m) * frob2 / (trace * trace);
}

int antennas_for(double c, int n) {
  const long m = std::lround(c * n);
  if (m < 1)
    throw std::invalid_argument("sweep: c * n rounds below one antenna at n = " +
                                std::to_string(n));
  return static_cast<int>(m);
}

std::size_t default_threshold_trials(double epsilon, std::size_t requested) {
  if (requested > 0) return requested;
  return static_cast<std::size_t>(std::llround(std::ceil(1000.0 / epsilon)));
}

double exceed_fraction(const std::vector<double>& values, double threshold) {
  std::size_t count = 0;
  for (double v : values)
    if (v > threshold) ++count;
  return static_cast<double>(count) / static_cast<double>(values.size());
}

}  // namespace

TrialBatch run_trials(const ScenarioConfig& config, StatisticRequest request,
                      std::size_t trials, std::uint64_t master_seed,
                      const EngineOptions& options) {
  config.validate();
  if (!request.one_bit && !request.full_res)
    throw std::invalid_argument("run_trials: no statistic requested");
  if (trials == 0) throw std::invalid_argument("run_trials: need at least one trial");

  TrialBatch batch;
  if (request.one_bit) batch.one_bit.resize(trials);
  if (request.full_res) batch.full_res.resize(trials);

  const bool sign_only =
      config.hypothesis == Hypothesis::H0 && request.one_bit && !request.full_res;

  if (sign_only) {
    parallel_for_trials(trials, options.workers, [&](std::size_t lo, std::size_t hi) {
      SignFrame signs(config.antennas, config.samples);
      for (std::size_t t = lo; t < hi; ++t) {
        RngStream rng(master_seed, t);
        fill_h0_signs(rng, signs);
        batch.one_bit[t] = emr_one_bit(signs);
      }
    });
    return batch;
  }

  const FrameGenerator generator(config);
  const int m = config.antennas;
  parallel_for_trials(trials, options.workers, [&](std::size_t lo, std::size_t hi) {
    ComplexFrame frame, scratch;
    SignFrame signs;
    Eigen::MatrixXcd phi(m, m);
    for (std::size_t t = lo; t < hi; ++t) {
      RngStream rng(master_seed, t);
      generator.generate(rng, frame, scratch);
      if (request.one_bit) {
        one_bit_quantize(frame, signs);
        batch.one_bit[t] = emr_one_bit(signs);
      }
      if (request.full_res) {
        phi.setZero();
        phi.selfadjointView<Eigen::Lower>().rankUpdate(frame, 1.0 / config.samples);
        batch.full_res[t] = emr_full_from_lower(phi, m);
      }
    }
  });
  return batch;
}

double order_statistic_quantile(std::vector<double> values, double epsilon) {
  const std::size_t n = values.size();
  if (n == 0) throw std::invalid_argument("order_statistic_quantile: empty sample");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("order_statistic_quantile: epsilon must lie in (0, 1)");
  if (static_cast<double>(n) * epsilon < 1.0)
    throw std::invalid_argument(
        "order_statistic_quantile: trials * epsilon < 1, quantile unresolvable");
  // 1-based ascending order statistic ceil((1 - eps) N), clamped to [1, N].
  std::size_t rank = static_cast<std::size_t>(
      std::ceil((1.0 - epsilon) * static_cast<double>(n)));
  rank = std::clamp<std::size_t>(rank, 1, n);
  std::nth_element(values.begin(), values.begin() + (rank - 1), values.end());
  return values[rank - 1];
}

double empirical_threshold(const ScenarioConfig& h0_config, Statistic statistic,
                           double epsilon, std::size_t trials,
                           std::uint64_t master_seed, const EngineOptions& options) {
  if (h0_config.hypothesis != Hypothesis::H0)
    throw std::invalid_argument("empirical_threshold: requires an H0 scenario");
  if (static_cast<double>(trials) * epsilon < 1.0)
    throw std::invalid_argument("empirical_threshold: trials * epsilon < 1");
  if (static_cast<double>(trials) < 1000.0 / epsilon)
    std::cerr << "empirical_threshold: " << trials
              << " trials is below the 10^3/epsilon prescription ("
              << fmt_g17(1000.0 / epsilon) << ")\n";
  StatisticRequest request;
  request.one_bit = statistic == Statistic::OneBit;
  request.full_res = statistic == Statistic::FullRes;
  const TrialBatch batch = run_trials(h0_config, request, trials, master_seed, options);
  return order_statistic_quantile(batch.values(statistic), epsilon);
}

double relative_error(double eta_theoretical, double eta_empirical) {
  if (!(eta_empirical > 0.0))
    throw std::invalid_argument("relative_error: empirical threshold must be positive");
  return std::fabs(eta_theoretical - eta_empirical) / eta_empirical;
}

RateEstimate estimate_rate(const ScenarioConfig& config, Statistic statistic,
                           double threshold, std::size_t trials,
                           std::uint64_t master_seed, const EngineOptions& options) {
  StatisticRequest request;
  request.one_bit = statistic == Statistic::OneBit;
  request.full_res = statistic == Statistic::FullRes;
  const TrialBatch batch = run_trials(config, request, trials, master_seed, options);
  RateEstimate estimate;
  estimate.trials = trials;
  estimate.rate = exceed_fraction(batch.values(statistic), threshold);
  estimate.std_error =
      std::sqrt(estimate.rate * (1.0 - estimate.rate) / static_cast<double>(trials));
  return estimate;
}

const std::vector<double>& SweepResult::series_values(const std::string& name) const {
  for (const auto& [key, values] : series)
    if (key == name) return values;
  throw std::out_of_range("SweepResult: no series named " + name);
}

SweepResult sweep_threshold_error(double c, std::span<const int> n_values,
                                  double epsilon, std::size_t trials_per_point,
                                  std::uint64_t master_seed,
                                  const EngineOptions& options,
                                  const ThresholdErrorOptions& sweep_options) {
  SweepResult result;
  result.axis_name = "n";
  std::vector<double> err_exact, err_normal, err_full;
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    const int n = n_values[i];
    const int m = antennas_for(c, n);
    const ScenarioConfig h0 = ScenarioConfig::noise_only(m, n);
    result.axis_values.push_back(n);

    const double eta_emp_one_bit =
        empirical_threshold(h0, Statistic::OneBit, epsilon, trials_per_point,
                            derive_seed(master_seed, i, kCtxOneBitThreshold), options);
    ThresholdSpec spec{m, n, epsilon, ThresholdScheme::OneBitExact};
    err_exact.push_back(relative_error(threshold_one_bit_exact(spec), eta_emp_one_bit));
    spec.scheme = ThresholdScheme::OneBitNormal;
    err_normal.push_back(relative_error(threshold_one_bit_normal(spec), eta_emp_one_bit));

    if (sweep_options.include_full_res) {
      const double eta_emp_full =
          empirical_threshold(h0, Statistic::FullRes, epsilon, trials_per_point,
                              derive_seed(master_seed, i, kCtxFullResThreshold), options);
      spec.scheme = ThresholdScheme::FullRes;
      err_full.push_back(relative_error(threshold_full(spec), eta_emp_full));
    }
  }
  result.series.emplace_back("relerr_onebit_exact", std::move(err_exact));
  result.series.emplace_back("relerr_onebit_normal", std::move(err_normal));
  if (sweep_options.include_full_res)
    result.series.emplace_back("relerr_fullres", std::move(err_full));

  result.metadata["sweep"] = "threshold_error";
  result.metadata["c"] = fmt_g17(c);
  result.metadata["pfa"] = fmt_g17(epsilon);
  result.metadata["trials"] = std::to_string(trials_per_point);
  result.metadata["seed"] = std::to_string(master_seed);
  result.metadata["fullres"] = sweep_options.include_full_res ? "1" : "0";
  return result;
}

namespace {

struct PdThresholds {
  double one_bit = 0.0;
  double full_res = 0.0;
};

PdThresholds thresholds_for_point(int m, int n, double epsilon,
                                  const PdSweepOptions& sweep_options,
                                  std::uint64_t master_seed, std::uint64_t point,
                                  const EngineOptions& options) {
  PdThresholds out;
  if (sweep_options.threshold_mode == ThresholdMode::Theoretical) {
    out.one_bit =
        threshold_one_bit_exact({m, n, epsilon, ThresholdScheme::OneBitExact});
    out.full_res = threshold_full({m, n, epsilon, ThresholdScheme::FullRes});
  } else {
    const std::size_t trials =
        default_threshold_trials(epsilon, sweep_options.threshold_trials);
    const ScenarioConfig h0 = ScenarioConfig::noise_only(m, n);
    out.one_bit =
        empirical_threshold(h0, Statistic::OneBit, epsilon, trials,
                            derive_seed(master_seed, point, kCtxOneBitThreshold), options);
    out.full_res =
        empirical_threshold(h0, Statistic::FullRes, epsilon, trials,
                            derive_seed(master_seed, point, kCtxFullResThreshold), options);
  }
  return out;
}

}  // namespace

SweepResult sweep_pd_vs_snr(double c, int n, std::span<const double> snr_db_values,
                            double epsilon, std::size_t trials_per_point,
                            double pu_angle, std::uint64_t master_seed,
                            const PdSweepOptions& sweep_options,
                            const EngineOptions& options) {
  const int m = antennas_for(c, n);
  const PdThresholds thresholds =
      thresholds_for_point(m, n, epsilon, sweep_options, master_seed, 0, options);

  SweepResult result;
  result.axis_name = "snr_db";
  std::vector<double> pd_one_bit, pd_full_res;
  for (std::size_t i = 0; i < snr_db_values.size(); ++i) {
    const double snr_db = snr_db_values[i];
    const ScenarioConfig config = ScenarioConfig::single_pu(m, n, snr_db, pu_angle);
    const TrialBatch batch =
        run_trials(config, {.one_bit = true, .full_res = true}, trials_per_point,
                   derive_seed(master_seed, i, kCtxPdTrials), options);
    result.axis_values.push_back(snr_db);
    pd_one_bit.push_back(exceed_fraction(batch.one_bit, thresholds.one_bit));
    pd_full_res.push_back(exceed_fraction(batch.full_res, thresholds.full_res));
  }
  result.series.emplace_back("pd_onebit", std::move(pd_one_bit));
  result.series.emplace_back("pd_fullres", std::move(pd_full_res));

  result.metadata["sweep"] = "pd_vs_snr";
  result.metadata["c"] = fmt_g17(c);
  result.metadata["n"] = std::to_string(n);
  result.metadata["m"] = std::to_string(m);
  result.metadata["pfa"] = fmt_g17(epsilon);
  result.metadata["trials"] = std::to_string(trials_per_point);
  result.metadata["angle"] = fmt_g17(pu_angle);
  result.metadata["seed"] = std::to_string(master_seed);
  result.metadata["threshold_mode"] =
      sweep_options.threshold_mode == ThresholdMode::Theoretical ? "theoretical"
                                                                 : "empirical";
  result.metadata["threshold_onebit"] = fmt_g17(thresholds.one_bit);
  result.metadata["threshold_fullres"] = fmt_g17(thresholds.full_res);
  return result;
}

SweepResult sweep_pd_vs_n(double c, std::span<const int> n_values, double snr_db,
                          double epsilon, std::size_t trials_per_point,
                          double pu_angle, std::uint64_t master_seed,
                          const PdSweepOptions& sweep_options,
                          const EngineOptions& options) {
  SweepResult result;
  result.axis_name = "n";
  std::vector<double> pd_one_bit, pd_full_res;
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    const int n = n_values[i];
    const int m = antennas_for(c, n);
    const PdThresholds thresholds =
        thresholds_for_point(m, n, epsilon, sweep_options, master_seed, i, options);
    const ScenarioConfig config = ScenarioConfig::single_pu(m, n, snr_db, pu_angle);
    const TrialBatch batch =
        run_trials(config, {.one_bit = true, .full_res = true}, trials_per_point,
                   derive_seed(master_seed, i, kCtxPdTrials), options);
    result.axis_values.push_back(n);
    pd_one_bit.push_back(exceed_fraction(batch.one_bit, thresholds.one_bit));
    pd_full_res.push_back(exceed_fraction(batch.full_res, thresholds.full_res));
  }
  result.series.emplace_back("pd_onebit", std::move(pd_one_bit));
  result.series.emplace_back("pd_fullres", std::move(pd_full_res));

  result.metadata["sweep"] = "pd_vs_n";
  result.metadata["c"] = fmt_g17(c);
  result.metadata["snr_db"] = fmt_g17(snr_db);
  result.metadata["pfa"] = fmt_g17(epsilon);
  result.metadata["trials"] = std::to_string(trials_per_point);
  result.metadata["angle"] = fmt_g17(pu_angle);
  result.metadata["seed"] = std::to_string(master_seed);
  result.metadata["threshold_mode"] =
      sweep_options.threshold_mode == ThresholdMode::Theoretical ? "theoretical"
                                                                 : "empirical";
  return result;
}

std::optional<double> crossing_location(std::span<const double> x,
                                        std::span<const double> y, double level) {
  if (x.size() != y.size() || x.size() < 2) return std::nullopt;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    if (y[i] < level && y[i + 1] >= level) {
      const double t = (level - y[i]) / (y[i + 1] - y[i]);
      return x[i] + t * (x[i + 1] - x[i]);
    }
  }
  return std::nullopt;
}

std::size_t upper_tri_index(int i, int j) {
  if (!(0 <= i && i < j)) throw std::invalid_argument("upper_tri_index: need 0 <= i < j");
  return static_cast<std::size_t>(i) +
         static_cast<std::size_t>(j) * (static_cast<std::size_t>(j) - 1) / 2;
}

std::pair<int, int> upper_tri_pair(std::size_t p) {
  // Largest j with j(j-1)/2 <= p.
  int j = static_cast<int>((1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(p))) / 2.0);
  while (static_cast<std::size_t>(j) * (j - 1) / 2 > p) --j;
  while (static_cast<std::size_t>(j + 1) * j / 2 <= p) ++j;
  const int i = static_cast<int>(p - static_cast<std::size_t>(j) * (j - 1) / 2);
  return {i, j};
}

Proposition1Result proposition1_diagnostic(int m, int n, std::size_t trials,
                                           std::uint64_t master_seed,
                                           const EngineOptions& options) {
  if (m < 1 || n < 1)
    throw std::invalid_argument("proposition1_diagnostic: m and n must be >= 1");
  if (trials < 2)
    throw std::invalid_argument("proposition1_diagnostic: need at least two trials");
  const long long q_ll = chi_square_dof(m);
  const int q = static_cast<int>(q_ll);

  // Trials are generated in parallel into a column block, then accumulated
  // in a fixed order so the estimate is independent of the worker count.
  const std::size_t block =
      std::max<std::size_t>(1, std::min<std::size_t>(trials, (1u << 22) / q));
  Eigen::MatrixXd samples(q, block);
  Eigen::MatrixXd second_moment = Eigen::MatrixXd::Zero(q, q);

  std::size_t done = 0;
  while (done < trials) {
    const std::size_t count = std::min(block, trials - done);
    parallel_for_trials(count, options.workers, [&](std::size_t lo, std::size_t hi) {
      SignFrame signs(m, n);
      for (std::size_t k = lo; k < hi; ++k) {
        RngStream rng(master_seed, done + k);
        fill_h0_signs(rng, signs);
        int p = 0;
        for (int j = 1; j < 2 * m; ++j)
          for (int i = 0; i < j; ++i)
            samples(p++, k) =
                static_cast<double>(signs.sign_product_sum(i, j)) / n;
      }
    });
    second_moment.selfadjointView<Eigen::Lower>().rankUpdate(
        samples.leftCols(count), 1.0);
    done += count;
  }
  second_moment /= static_cast<double>(trials);

  Proposition1Result result;
  result.diag.resize(q);
  for (int p = 0; p < q; ++p) result.diag[p] = second_moment(p, p);
  double max_corr = 0.0;
  for (int l = 0; l < q; ++l)
    for (int p = l + 1; p < q; ++p) {
      const double denom = std::sqrt(second_moment(p, p) * second_moment(l, l));
      if (denom > 0.0)
        max_corr = std::max(max_corr, std::fabs(second_moment(p, l)) / denom);
    }
  result.max_offdiag_corr = max_corr;
  return result;
}

double ks_distance(std::vector<double> samples,
                   const std::function<double(double)>& cdf) {
  if (samples.empty()) throw std::invalid_argument("ks_distance: empty sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max(d, f - static_cast<double>(i) / n);
    d = std::max(d, static_cast<double>(i + 1) / n - f);
  }
  return d;
}

DiagnosticsReport run_diagnostics(int m, int n, std::size_t trials,
                                  std::uint64_t master_seed,
                                  const EngineOptions& options) {
  if (m < 1 || n < 1)
    throw std::invalid_argument("run_diagnostics: m and n must be >= 1");
  if (trials < 10) throw std::invalid_argument("run_diagnostics: too few trials");

  DiagnosticsReport report;
  report.m = m;
  report.n = n;
  report.trials = trials;

  std::vector<double> entry(trials);
  std::vector<double> statistic(trials);
  const std::uint64_t entry_seed = derive_seed(master_seed, 0, kCtxEntryLaw);
  parallel_for_trials(trials, options.workers, [&](std::size_t lo, std::size_t hi) {
    SignFrame signs(m, n);
    for (std::size_t t = lo; t < hi; ++t) {
      RngStream rng(entry_seed, t);
      fill_h0_signs(rng, signs);
      entry[t] = std::sqrt(static_cast<double>(n)) *
                 static_cast<double>(signs.sign_product_sum(0, 1)) / n;
      statistic[t] = static_cast<double>(m) * n * (emr_one_bit(signs) - 1.0);
    }
  });

  report.ks_entry_normal =
      ks_distance(std::move(entry), [](double x) { return std_normal_cdf(x); });
  const int q = static_cast<int>(chi_square_dof(m));
  report.ks_statistic_chi2 = ks_distance(
      std::move(statistic), [q](double x) { return chi_square_cdf(std::max(x, 0.0), q); });

  const Proposition1Result prop1 = proposition1_diagnostic(
      m, n, trials, derive_seed(master_seed, 0, kCtxProposition1), options);
  report.prop1_max_offdiag_corr = prop1.max_offdiag_corr;
  report.prop1_diag = prop1.diag;
  return report;
}

}  // namespace emrsense
