#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "emrsense/detector.hpp"
#include "emrsense/montecarlo.hpp"
#include "emrsense/numerics.hpp"

using emrsense::Hypothesis;
using emrsense::ThresholdScheme;
using emrsense::ThresholdSpec;

TEST_SUITE_BEGIN("detector");

namespace {

// Frozen oracle values (see test_numerics.cpp for their derivation).
constexpr double kThresholdFull64x128 = 1.5341425659239532;
constexpr double kThresholdOneBitExact4x1000 = 1.0142230713483384;
constexpr double kThresholdOneBitNormal4x1000 = 1.0127812952676101;

}  // namespace

TEST_CASE("degrees of freedom") {
  CHECK(emrsense::chi_square_dof(1) == 1);
  CHECK(emrsense::chi_square_dof(4) == 28);
  CHECK(emrsense::chi_square_dof(8) == 120);
  CHECK(emrsense::chi_square_dof(32) == 2016);
  CHECK(emrsense::chi_square_dof(64) == 8128);
}

TEST_CASE("full resolution statistic") {
  SUBCASE("identity gives one") {
    CHECK(emrsense::emr_full(Eigen::MatrixXcd::Identity(5, 5), 5) == doctest::Approx(1.0));
  }
  SUBCASE("rank one extreme reaches m") {
    Eigen::MatrixXcd phi = Eigen::MatrixXcd::Zero(4, 4);
    phi(0, 0) = 2.0;
    CHECK(emrsense::emr_full(phi, 4) == doctest::Approx(4.0).epsilon(1e-14));
  }
  SUBCASE("scale invariance") {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Random(6, 6);
    Eigen::MatrixXcd phi = a * a.adjoint() + Eigen::MatrixXcd::Identity(6, 6);
    const double base = emrsense::emr_full(phi, 6);
    for (double alpha : {1e-6, 0.5, 3.0, 1e8}) {
      const double scaled = emrsense::emr_full(Eigen::MatrixXcd(alpha * phi), 6);
      CHECK(std::fabs(scaled - base) / base < 1e-12);
    }
  }
  SUBCASE("degenerate input") {
    CHECK_THROWS_AS(emrsense::emr_full(Eigen::MatrixXcd::Zero(3, 3), 3),
                    std::invalid_argument);
    CHECK_THROWS_AS(emrsense::emr_full(Eigen::MatrixXcd::Identity(3, 3), 4),
                    std::invalid_argument);
  }
}

TEST_CASE("one-bit statistic") {
  SUBCASE("identity gives one") {
    CHECK(emrsense::emr_one_bit(Eigen::MatrixXd::Identity(8, 8), 4) == doctest::Approx(1.0));
  }
  SUBCASE("all ones reaches 2m") {
    CHECK(emrsense::emr_one_bit(Eigen::MatrixXd::Ones(6, 6), 3) ==
          doctest::Approx(6.0).epsilon(1e-14));
  }
  SUBCASE("single off-diagonal pair") {
    Eigen::MatrixXd s = Eigen::MatrixXd::Identity(4, 4);
    s(0, 1) = 0.5;
    s(1, 0) = 0.5;
    CHECK(emrsense::emr_one_bit(s, 2) == doctest::Approx(1.125).epsilon(1e-14));
  }
  SUBCASE("dimension mismatch") {
    CHECK_THROWS_AS(emrsense::emr_one_bit(Eigen::MatrixXd::Identity(6, 6), 4),
                    std::invalid_argument);
  }
  SUBCASE("sign-frame route matches the matrix route") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
      const auto config = emrsense::ScenarioConfig::noise_only(3, 129);
      const emrsense::FrameGenerator generator(config);
      emrsense::RngStream rng(seed, 0);
      const emrsense::SignFrame signs =
          emrsense::one_bit_quantize(generator.generate(rng));
      const double from_frame = emrsense::emr_one_bit(signs);
      const double from_matrix = emrsense::emr_one_bit(emrsense::one_bit_scm(signs), 3);
      CHECK(std::fabs(from_frame - from_matrix) < 1e-12);
      CHECK(from_frame >= 1.0);
      CHECK(from_frame <= 6.0);
    }
  }
}

TEST_CASE("closed-form thresholds") {
  SUBCASE("full resolution") {
    CHECK(emrsense::threshold_full({64, 128, 0.5, ThresholdScheme::FullRes}) ==
          doctest::Approx(1.5).epsilon(1e-15));
    CHECK(std::fabs(emrsense::threshold_full({64, 128, 1e-3, ThresholdScheme::FullRes}) -
                    kThresholdFull64x128) < 1e-9);
    // strictly decreasing in n at fixed c contribution
    double prev = 1e30;
    for (int n : {64, 128, 256, 512}) {
      const double eta = emrsense::threshold_full({n / 2, n, 1e-3, ThresholdScheme::FullRes});
      CHECK(eta < prev);
      prev = eta;
    }
  }
  SUBCASE("one-bit exact") {
    CHECK(std::fabs(emrsense::threshold_one_bit_exact(
                        {4, 1000, 1e-3, ThresholdScheme::OneBitExact}) -
                    kThresholdOneBitExact4x1000) < 1e-9);
    // epsilon -> 1 sends the threshold to 1 from above
    const double near_one =
        emrsense::threshold_one_bit_exact({4, 1000, 0.999999, ThresholdScheme::OneBitExact});
    const double nearer_one =
        emrsense::threshold_one_bit_exact({4, 1000, 0.99999999, ThresholdScheme::OneBitExact});
    CHECK(near_one > 1.0);
    CHECK(nearer_one > 1.0);
    CHECK(nearer_one < near_one);
    CHECK(near_one < 1.002);
    // monotone in epsilon
    CHECK(emrsense::threshold_one_bit_exact({4, 1000, 1e-4, ThresholdScheme::OneBitExact}) >
          emrsense::threshold_one_bit_exact({4, 1000, 1e-2, ThresholdScheme::OneBitExact}));
  }
  SUBCASE("one-bit normal") {
    CHECK(std::fabs(emrsense::threshold_one_bit_normal(
                        {4, 1000, 1e-3, ThresholdScheme::OneBitNormal}) -
                    kThresholdOneBitNormal4x1000) < 1e-9);
    // at epsilon = 1/2 the quantile term vanishes: 1 + q/(mn) = 1 + (2m-1)/n
    const double eta =
        emrsense::threshold_one_bit_normal({4, 1000, 0.5, ThresholdScheme::OneBitNormal});
    CHECK(eta == doctest::Approx(1.0 + 7.0 / 1000.0).epsilon(1e-12));
  }
  SUBCASE("normal approximation approaches the exact chi-square threshold") {
    const auto gap = [](int m, int n, double eps) {
      const double exact =
          emrsense::threshold_one_bit_exact({m, n, eps, ThresholdScheme::OneBitExact});
      const double normal =
          emrsense::threshold_one_bit_normal({m, n, eps, ThresholdScheme::OneBitNormal});
      return std::fabs(exact - normal) / (exact - 1.0);
    };
    CHECK(gap(4, 1000, 1e-3) < 0.15);    // q = 28
    CHECK(gap(32, 1000, 1e-3) < 0.01);   // q = 2016
    CHECK(gap(32, 1000, 1e-3) < gap(4, 1000, 1e-3));
  }
  SUBCASE("scheme dispatch") {
    CHECK_THROWS_AS(emrsense::threshold_full({4, 8, 0.1, ThresholdScheme::OneBitExact}),
                    std::invalid_argument);
    const ThresholdSpec spec{8, 64, 0.01, ThresholdScheme::OneBitNormal};
    CHECK(emrsense::threshold_for(spec) == emrsense::threshold_one_bit_normal(spec));
  }
}

TEST_CASE("decision rule") {
  CHECK(emrsense::decide(1.5, 1.4).decision == Hypothesis::H1);
  CHECK(emrsense::decide(1.4, 1.4).decision == Hypothesis::H0);  // strict inequality
  CHECK(emrsense::decide(1.0, 1.2).decision == Hypothesis::H0);
  const auto outcome = emrsense::decide(2.5, 2.0);
  CHECK(outcome.statistic == 2.5);
  CHECK(outcome.threshold == 2.0);
  CHECK((outcome.decision == Hypothesis::H1) == (outcome.statistic > outcome.threshold));
}

TEST_CASE("entry law parameters") {
  const auto [mu_half, var_half] = emrsense::corollary1_params(0.5, 64);
  CHECK(mu_half == 0.0);
  CHECK(var_half == doctest::Approx(1.0 / 64.0).epsilon(1e-15));
  CHECK(emrsense::corollary1_params(1.0, 10) == std::pair{1.0, 0.0});
  CHECK(emrsense::corollary1_params(0.0, 10) == std::pair{-1.0, 0.0});
  CHECK_THROWS_AS(emrsense::corollary1_params(1.5, 10), std::domain_error);
}

TEST_CASE("null law of the scaled one-bit statistic") {
  // mn(xi - 1) over 1e4 H0 trials at n = 1024, m = 4 against chi^2_28.
  const int m = 4, n = 1024;
  const auto batch = emrsense::run_trials(emrsense::ScenarioConfig::noise_only(m, n),
                                          {.one_bit = true}, 10000, 777);
  std::vector<double> scaled;
  scaled.reserve(batch.one_bit.size());
  for (double xi : batch.one_bit)
    scaled.push_back(static_cast<double>(m) * n * (xi - 1.0));
  const double d = emrsense::ks_distance(
      std::move(scaled), [](double x) { return emrsense::chi_square_cdf(std::max(x, 0.0), 28); });
  CHECK(d < 0.02);
}

TEST_SUITE_END();
