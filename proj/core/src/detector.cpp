#include "emrsense/detector.hpp"

#include <cmath>
#include <cstdint>
#include <iostream>
#include <limits>
#include <stdexcept>

#include "emrsense/numerics.hpp"

namespace emrsense {

long long chi_square_dof(int m) {
  if (m < 1) throw std::invalid_argument("chi_square_dof: m must be >= 1");
  return static_cast<long long>(m) * (2ll * m - 1ll);
}

double emr_full(const Eigen::MatrixXcd& scm, int m) {
  if (scm.rows() != m || scm.cols() != m)
    throw std::invalid_argument("emr_full: SCM must be m x m");
  const double trace = scm.trace().real();
  if (!(trace > 0.0)) throw std::invalid_argument("emr_full: degenerate SCM (zero trace)");
  const double frob2 = scm.squaredNorm();
  return static_cast<double>(m) * frob2 / (trace * trace);
}

double emr_one_bit(const Eigen::MatrixXd& scm, int m) {
  if (scm.rows() != 2 * m || scm.cols() != 2 * m)
    throw std::invalid_argument("emr_one_bit: SCM must be 2m x 2m");
  double sum = 0.0;
  for (int j = 1; j < 2 * m; ++j)
    for (int i = 0; i < j; ++i) sum += scm(i, j) * scm(i, j);
  return 1.0 + sum / static_cast<double>(m);
}

double emr_one_bit(const SignFrame& frame) {
  const int dim = frame.rows();
  const int m = frame.antennas();
  const std::int64_t n = frame.samples();
  std::int64_t sum = 0;  // exact while q * n^2 < 2^63, i.e. any realistic size
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j) {
      const std::int64_t s = frame.sign_product_sum(i, j);
      sum += s * s;
    }
  return 1.0 + static_cast<double>(sum) /
                   (static_cast<double>(m) * static_cast<double>(n) * static_cast<double>(n));
}

double threshold_full(const ThresholdSpec& spec) {
  if (spec.scheme != ThresholdScheme::FullRes)
    throw std::invalid_argument("threshold_full: wrong scheme");
  const double c = spec.aspect_ratio();
  if (!(c > 0.0 && c < 1.0))
    std::cerr << "threshold_full: c = " << c
              << " outside (0, 1); the asymptotic regime assumes 0 < m/n < 1\n";
  const double z = std_normal_quantile(1.0 - spec.epsilon);
  return 1.0 + c + M_SQRT2 * z / spec.samples;
}

double threshold_one_bit_exact(const ThresholdSpec& spec) {
  if (spec.scheme != ThresholdScheme::OneBitExact)
    throw std::invalid_argument("threshold_one_bit_exact: wrong scheme");
  const long long q = chi_square_dof(spec.antennas);
  if (q > std::numeric_limits<int>::max())
    throw std::invalid_argument("threshold_one_bit_exact: m too large");
  const double quantile = chi_square_quantile(1.0 - spec.epsilon, static_cast<int>(q));
  return 1.0 + quantile / (static_cast<double>(spec.antennas) * spec.samples);
}

double threshold_one_bit_normal(const ThresholdSpec& spec) {
  if (spec.scheme != ThresholdScheme::OneBitNormal)
    throw std::invalid_argument("threshold_one_bit_normal: wrong scheme");
  const double q = static_cast<double>(chi_square_dof(spec.antennas));
  const double z = std_normal_quantile(1.0 - spec.epsilon);
  const double mn = static_cast<double>(spec.antennas) * spec.samples;
  return 1.0 + std::sqrt(2.0 * q) / mn * (z + std::sqrt(0.5 * q));
}

double threshold_for(const ThresholdSpec& spec) {
  switch (spec.scheme) {
    case ThresholdScheme::FullRes:
      return threshold_full(spec);
    case ThresholdScheme::OneBitExact:
      return threshold_one_bit_exact(spec);
    case ThresholdScheme::OneBitNormal:
      return threshold_one_bit_normal(spec);
  }
  throw std::invalid_argument("threshold_for: unknown scheme");
}

DetectorOutcome decide(double statistic, double threshold) {
  DetectorOutcome outcome;
  outcome.statistic = statistic;
  outcome.threshold = threshold;
  outcome.decision = statistic > threshold ? Hypothesis::H1 : Hypothesis::H0;
  return outcome;
}

std::pair<double, double> corollary1_params(double p_bar, int n) {
  if (!(p_bar >= 0.0 && p_bar <= 1.0))
    throw std::domain_error("corollary1_params: p_bar must lie in [0, 1]");
  if (n < 1) throw std::invalid_argument("corollary1_params: n must be >= 1");
  return {2.0 * p_bar - 1.0, 4.0 * p_bar * (1.0 - p_bar) / n};
}

}  // namespace emrsense
