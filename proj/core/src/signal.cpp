#include "emrsense/signal.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace emrsense {

double ScenarioConfig::snr_db() const { return 10.0 * std::log10(snr()); }

void ScenarioConfig::validate() const {
  if (antennas < 1) throw std::invalid_argument("ScenarioConfig: antennas must be >= 1");
  if (samples < 1) throw std::invalid_argument("ScenarioConfig: samples must be >= 1");
  if (!(noise_power > 0.0))
    throw std::invalid_argument("ScenarioConfig: noise_power must be positive");
  if (pu_count < 0) throw std::invalid_argument("ScenarioConfig: pu_count must be >= 0");
  if (signal_power < 0.0)
    throw std::invalid_argument("ScenarioConfig: signal_power must be >= 0");
  if (hypothesis == Hypothesis::H1) {
    if (pu_count < 1)
      throw std::invalid_argument("ScenarioConfig: H1 requires at least one PU");
    if (!(signal_power > 0.0))
      throw std::invalid_argument("ScenarioConfig: H1 requires positive signal power");
    if (static_cast<int>(pu_angles.size()) != pu_count)
      throw std::invalid_argument("ScenarioConfig: need one angle per PU");
    for (double a : pu_angles)
      if (!(std::fabs(a) < M_PI_2))
        throw std::invalid_argument("ScenarioConfig: PU angles must lie in (-pi/2, pi/2)");
  }
}

ScenarioConfig ScenarioConfig::noise_only(int m, int n, double tau) {
  ScenarioConfig config;
  config.antennas = m;
  config.samples = n;
  config.noise_power = tau;
  config.hypothesis = Hypothesis::H0;
  config.validate();
  return config;
}

ScenarioConfig ScenarioConfig::single_pu(int m, int n, double snr_db, double angle,
                                         double tau) {
  ScenarioConfig config;
  config.antennas = m;
  config.samples = n;
  config.pu_count = 1;
  config.noise_power = tau;
  config.signal_power = tau * std::pow(10.0, snr_db / 10.0);
  config.pu_angles = {angle};
  config.hypothesis = Hypothesis::H1;
  config.validate();
  return config;
}

Eigen::VectorXcd steering_vector(double angle, int m) {
  if (m < 1) throw std::invalid_argument("steering_vector: m must be >= 1");
  if (!(std::fabs(angle) < M_PI_2))
    throw std::invalid_argument("steering_vector: angle must lie in (-pi/2, pi/2)");
  Eigen::VectorXcd a(m);
  const double phase_step = M_PI * std::sin(angle);
  for (int k = 0; k < m; ++k)
    a(k) = std::polar(1.0, phase_step * static_cast<double>(k));
  return a;
}

Eigen::MatrixXcd population_covariance(const ScenarioConfig& config) {
  config.validate();
  const int m = config.antennas;
  Eigen::MatrixXcd r =
      config.noise_power * Eigen::MatrixXcd::Identity(m, m);
  if (config.hypothesis == Hypothesis::H1) {
    for (double angle : config.pu_angles) {
      const Eigen::VectorXcd a = steering_vector(angle, m);
      r.noalias() += config.signal_power * (a * a.adjoint());
    }
  }
  return r;
}

FrameGenerator::FrameGenerator(const ScenarioConfig& config) : config_(config) {
  config_.validate();
  if (config_.hypothesis == Hypothesis::H1) {
    const Eigen::MatrixXcd r = population_covariance(config_);
    Eigen::LLT<Eigen::MatrixXcd> llt(r);
    if (llt.info() != Eigen::Success)
      throw std::runtime_error("FrameGenerator: population covariance is not PD");
    chol_ = llt.matrixL();
  }
}

void FrameGenerator::generate(RngStream& rng, ComplexFrame& out,
                              ComplexFrame& scratch) const {
  const int m = config_.antennas;
  const int n = config_.samples;
  if (chol_.size() == 0) {
    out.resize(m, n);
    rng.fill_gaussian({reinterpret_cast<double*>(out.data()),
                       2 * static_cast<std::size_t>(m) * n});
    out *= std::sqrt(0.5 * config_.noise_power);
  } else {
    scratch.resize(m, n);
    rng.fill_gaussian({reinterpret_cast<double*>(scratch.data()),
                       2 * static_cast<std::size_t>(m) * n});
    scratch *= M_SQRT1_2;  // columns ~ CN(0, I)
    out.resize(m, n);
    out.noalias() = chol_.triangularView<Eigen::Lower>() * scratch;
  }
}

ComplexFrame FrameGenerator::generate(RngStream& rng) const {
  ComplexFrame out, scratch;
  generate(rng, out, scratch);
  return out;
}

}  // namespace emrsense
