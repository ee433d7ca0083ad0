#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "emrsense/montecarlo.hpp"
#include "emrsense/numerics.hpp"
#include "emrsense/quantizer.hpp"
#include "emrsense/signal.hpp"

using emrsense::ComplexFrame;
using emrsense::RngStream;
using emrsense::ScenarioConfig;
using emrsense::SignFrame;

TEST_SUITE_BEGIN("quantizer");

namespace {

ComplexFrame random_frame(int m, int n, std::uint64_t seed) {
  const emrsense::FrameGenerator generator(ScenarioConfig::noise_only(m, n));
  RngStream rng(seed, 0);
  return generator.generate(rng);
}

}  // namespace

TEST_CASE("sign extraction") {
  ComplexFrame frame(2, 1);
  frame(0, 0) = {3.0, 4.0};
  frame(1, 0) = {-1.0, 0.5};
  const SignFrame signs = emrsense::one_bit_quantize(frame);
  CHECK(signs.sign(0, 0) == +1);  // Re x_1
  CHECK(signs.sign(1, 0) == -1);  // Re x_2
  CHECK(signs.sign(2, 0) == +1);  // Im x_1
  CHECK(signs.sign(3, 0) == +1);  // Im x_2
}

TEST_CASE("sgn(0) is +1") {
  ComplexFrame frame(1, 2);
  frame(0, 0) = {0.0, -2.0};
  frame(0, 1) = {-0.0, 0.0};
  const SignFrame signs = emrsense::one_bit_quantize(frame);
  CHECK(signs.sign(0, 0) == +1);
  CHECK(signs.sign(1, 0) == -1);
  CHECK(signs.sign(0, 1) == +1);
  CHECK(signs.sign(1, 1) == +1);
}

TEST_CASE("positive per-antenna scaling leaves the quantization unchanged") {
  const ComplexFrame frame = random_frame(5, 137, 11);
  ComplexFrame scaled = frame;
  const double gains[5] = {0.02, 1.0, 3.5, 700.0, 1e-6};
  for (int k = 0; k < 5; ++k) scaled.row(k) *= gains[k];

  const SignFrame a = emrsense::one_bit_quantize(frame);
  const SignFrame b = emrsense::one_bit_quantize(scaled);
  for (int r = 0; r < a.rows(); ++r)
    for (int t = 0; t < a.samples(); ++t) CHECK(a.sign(r, t) == b.sign(r, t));
  CHECK(emrsense::one_bit_scm(a) == emrsense::one_bit_scm(b));
}

TEST_CASE("one-bit SCM basics") {
  SUBCASE("single all-positive snapshot") {
    ComplexFrame frame(2, 1);
    frame(0, 0) = {1.0, 2.0};
    frame(1, 0) = {0.5, 3.0};
    const Eigen::MatrixXd s = emrsense::one_bit_scm(emrsense::one_bit_quantize(frame));
    CHECK(s == Eigen::MatrixXd::Ones(4, 4));
  }
  SUBCASE("a snapshot and its negation match the single snapshot") {
    ComplexFrame one(2, 1), two(2, 2);
    one(0, 0) = {0.3, -0.8};
    one(1, 0) = {-1.2, 0.1};
    two.col(0) = one.col(0);
    two.col(1) = -one.col(0);
    CHECK(emrsense::one_bit_scm(emrsense::one_bit_quantize(one)) ==
          emrsense::one_bit_scm(emrsense::one_bit_quantize(two)));
  }
  SUBCASE("unit diagonal and symmetry") {
    const SignFrame signs = emrsense::one_bit_quantize(random_frame(3, 500, 4));
    const Eigen::MatrixXd s = emrsense::one_bit_scm(signs);
    CHECK(s.diagonal() == Eigen::VectorXd::Ones(6));
    CHECK(s == s.transpose());
    const double step = 2.0 / 500.0;
    for (int i = 0; i < 6; ++i)
      for (int j = i + 1; j < 6; ++j) {
        CHECK(std::fabs(s(i, j)) <= 1.0);
        // off-diagonals live on the lattice {-1, -1 + 2/n, ..., 1}
        const double pos = (s(i, j) + 1.0) / step;
        CHECK(std::fabs(pos - std::round(pos)) < 1e-9);
      }
  }
  SUBCASE("H0 off-diagonals concentrate at the 5 sigma scale") {
    const int n = 10000;
    const SignFrame signs = emrsense::one_bit_quantize(random_frame(4, n, 21));
    const Eigen::MatrixXd s = emrsense::one_bit_scm(signs);
    for (int i = 0; i < 8; ++i)
      for (int j = i + 1; j < 8; ++j)
        CHECK(std::fabs(s(i, j)) < 5.0 / std::sqrt(static_cast<double>(n)));
  }
}

TEST_CASE("full resolution SCM") {
  SUBCASE("single snapshot is the outer product") {
    const ComplexFrame frame = random_frame(3, 1, 2);
    const Eigen::MatrixXcd phi = emrsense::full_res_scm(frame);
    const Eigen::MatrixXcd outer = frame.col(0) * frame.col(0).adjoint();
    CHECK((phi - outer).cwiseAbs().maxCoeff() < 1e-14);
  }
  SUBCASE("H0 diagonal concentrates around tau") {
    const ComplexFrame frame = random_frame(2, 100000, 3);
    const Eigen::MatrixXcd phi = emrsense::full_res_scm(frame);
    CHECK(phi(0, 0).real() > 0.99);
    CHECK(phi(0, 0).real() < 1.01);
    CHECK(phi(1, 1).real() > 0.99);
    CHECK(phi(1, 1).real() < 1.01);
  }
  SUBCASE("quadratic scaling") {
    const ComplexFrame frame = random_frame(3, 50, 5);
    const Eigen::MatrixXcd phi = emrsense::full_res_scm(frame);
    const Eigen::MatrixXcd phi_scaled = emrsense::full_res_scm(ComplexFrame(2.5 * frame));
    CHECK((phi_scaled - 6.25 * phi).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("hermitian positive semidefinite") {
    const ComplexFrame frame = random_frame(4, 16, 6);
    const Eigen::MatrixXcd phi = emrsense::full_res_scm(frame);
    CHECK((phi - phi.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(phi);
    CHECK(eig.eigenvalues().minCoeff() > -1e-12);
  }
}

TEST_CASE("arcsin law map") {
  SUBCASE("white noise decorrelates") {
    const Eigen::MatrixXcd r =
        emrsense::population_covariance(ScenarioConfig::noise_only(3, 8, 0.7));
    const Eigen::MatrixXd expected = emrsense::arcsin_expected_scm(r);
    CHECK(expected == Eigen::MatrixXd::Identity(6, 6));
  }
  SUBCASE("perfect correlation maps to one") {
    Eigen::MatrixXcd r(2, 2);
    r << 1.0, 1.0, 1.0, 1.0;
    const Eigen::MatrixXd expected = emrsense::arcsin_expected_scm(r);
    CHECK(expected(0, 1) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(expected(2, 3) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(expected(0, 2) == 0.0);
  }
  SUBCASE("unit diagonal, entries within [-1, 1]") {
    const ScenarioConfig config = ScenarioConfig::single_pu(4, 8, 4.0, 0.9, 0.5);
    const Eigen::MatrixXd expected =
        emrsense::arcsin_expected_scm(emrsense::population_covariance(config));
    CHECK(expected.diagonal() == Eigen::VectorXd::Ones(8));
    CHECK(expected.cwiseAbs().maxCoeff() <= 1.0);
  }
  SUBCASE("invalid covariance is rejected") {
    Eigen::MatrixXcd r(2, 2);
    r << 0.0, 0.0, 0.0, 1.0;
    CHECK_THROWS_AS(emrsense::arcsin_expected_scm(r), std::domain_error);
  }
}

TEST_CASE("arcsin law is the quantizer pipeline oracle") {
  // Entrywise mean of the one-bit SCM over 1e5 snapshots against the closed
  // form, H1 with one PU at -pi/3 and SNR 0 dB.
  const ScenarioConfig config = ScenarioConfig::single_pu(4, 100000, 0.0, -M_PI / 3.0);
  const Eigen::MatrixXd expected =
      emrsense::arcsin_expected_scm(emrsense::population_covariance(config));
  const emrsense::FrameGenerator generator(config);
  RngStream rng(314159, 0);
  const Eigen::MatrixXd scm =
      emrsense::one_bit_scm(emrsense::one_bit_quantize(generator.generate(rng)));
  CHECK((scm - expected).cwiseAbs().maxCoeff() < 0.01);
}

TEST_CASE("H0 entry law passes a KS test against N(0,1)") {
  // KS level 0.01 critical value is 1.62762 / sqrt(trials). The entries live
  // on a lattice of step 2/sqrt(n), which biases the distance against a
  // continuous law by about phi(0)/sqrt(n); at n = 1024 that bias alone is
  // 0.0125, right at the critical value, so the level-0.01 test is exercised
  // deeper in the n >= 1024 regime where the lattice has resolved.
  const int n = 16384;
  const std::size_t trials = 10000;
  std::vector<double> values;
  values.reserve(trials);
  ScenarioConfig config = ScenarioConfig::noise_only(1, n);
  const emrsense::FrameGenerator generator(config);
  for (std::size_t t = 0; t < trials; ++t) {
    RngStream rng(555, t);
    const SignFrame signs = emrsense::one_bit_quantize(generator.generate(rng));
    values.push_back(std::sqrt(static_cast<double>(n)) *
                     static_cast<double>(signs.sign_product_sum(0, 1)) / n);
  }
  const double d =
      emrsense::ks_distance(std::move(values), [](double x) { return emrsense::std_normal_cdf(x); });
  CHECK(d < 1.62762 / std::sqrt(static_cast<double>(trials)));
}

TEST_SUITE_END();
