#pragma once

#include <Eigen/Dense>
#include <utility>

#include "emrsense/quantizer.hpp"
#include "emrsense/signal.hpp"

namespace emrsense {

enum class ThresholdScheme { FullRes, OneBitExact, OneBitNormal };

struct ThresholdSpec {
  int antennas = 1;       // m
  int samples = 1;        // n
  double epsilon = 1e-3;  // target false-alarm rate
  ThresholdScheme scheme = ThresholdScheme::OneBitExact;

  double aspect_ratio() const { return static_cast<double>(antennas) / samples; }
};

struct DetectorOutcome {
  double statistic = 0.0;
  double threshold = 0.0;
  Hypothesis decision = Hypothesis::H0;
};

// Degrees of freedom of the null chi-square law: q = m(2m - 1).
long long chi_square_dof(int m);

// Second-order eigenvalue moment ratio of an m x m SCM:
// m ||Phi||_F^2 / tr(Phi)^2. Equals 1 iff Phi is proportional to I,
// at most m. Throws std::invalid_argument on a degenerate (zero trace) input.
double emr_full(const Eigen::MatrixXcd& scm, int m);

// One-bit variant on the 2m x 2m sign SCM:
// 1 + (1/m) * sum of squared strict upper triangle entries; range [1, 2m].
double emr_one_bit(const Eigen::MatrixXd& scm, int m);

// Same statistic straight from a packed sign frame, using exact integer
// accumulation of the pair sums (order-independent, parallel-safe).
double emr_one_bit(const SignFrame& frame);

// Closed-form CFAR thresholds.
double threshold_full(const ThresholdSpec& spec);            // 1 + c + sqrt(2) z / n
double threshold_one_bit_exact(const ThresholdSpec& spec);   // 1 + chi2q^{-1}(1-eps)/(mn)
double threshold_one_bit_normal(const ThresholdSpec& spec);  // CLT approximation
double threshold_for(const ThresholdSpec& spec);

// H1 iff statistic > threshold (strict).
DetectorOutcome decide(double statistic, double threshold);

// Gaussian parameters of an SCM entry built from n sign products whose
// agreement probability is p_bar: mean 2 p_bar - 1, variance 4 p_bar (1 - p_bar) / n.
std::pair<double, double> corollary1_params(double p_bar, int n);

}  // namespace emrsense
