#pragma once

#include <Eigen/Dense>
#include <vector>

#include "emrsense/rng.hpp"

namespace emrsense {

enum class Hypothesis { H0, H1 };

// m x n complex snapshot matrix; column t is the array snapshot x(t).
using ComplexFrame = Eigen::MatrixXcd;

// Full description of a sensing scenario. `noise_power` is the total power
// per complex entry (real and imaginary parts carry half each), so
// snr() = signal_power / noise_power.
struct ScenarioConfig {
  int antennas = 1;                 // m
  int samples = 1;                  // n
  int pu_count = 0;                 // d
  double noise_power = 1.0;         // tau
  double signal_power = 0.0;        // sigma_s^2 per PU
  std::vector<double> pu_angles;    // radians, one per PU
  Hypothesis hypothesis = Hypothesis::H0;

  double aspect_ratio() const { return static_cast<double>(antennas) / samples; }
  double snr() const { return signal_power / noise_power; }
  double snr_db() const;

  // Throws std::invalid_argument when the invariants do not hold
  // (H1 requires pu_count >= 1 and positive signal power, angle count must
  // match pu_count, angles must lie inside (-pi/2, pi/2), ...).
  void validate() const;

  static ScenarioConfig noise_only(int m, int n, double tau = 1.0);
  static ScenarioConfig single_pu(int m, int n, double snr_db, double angle,
                                  double tau = 1.0);
};

// Half-wavelength ULA steering vector: element k = exp(i pi k sin(angle)).
Eigen::VectorXcd steering_vector(double angle, int m);

// R = tau I + sigma_s^2 sum_k a(theta_k) a(theta_k)^H. Exactly tau I under H0.
Eigen::MatrixXcd population_covariance(const ScenarioConfig& config);

// Draws frames with i.i.d. CN(0, R) columns. The covariance factor is
// computed once at construction; generation itself is deterministic per
// stream and thread-safe for concurrent streams.
class FrameGenerator {
 public:
  explicit FrameGenerator(const ScenarioConfig& config);

  const ScenarioConfig& config() const { return config_; }

  // `scratch` avoids a per-call allocation on the H1 path; both matrices are
  // resized as needed.
  void generate(RngStream& rng, ComplexFrame& out, ComplexFrame& scratch) const;
  ComplexFrame generate(RngStream& rng) const;

 private:
  ScenarioConfig config_;
  Eigen::MatrixXcd chol_;  // lower Cholesky factor of R; empty under H0
};

}  // namespace emrsense
