#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "emrsense/rng.hpp"

using emrsense::RngStream;

TEST_SUITE_BEGIN("rng");

TEST_CASE("philox4x64 known answers") {
  // Reference outputs cross-checked against an independent Philox 4x64-10
  // implementation (numpy.random.Philox).
  struct Kat {
    std::array<std::uint64_t, 4> counter;
    std::array<std::uint64_t, 2> key;
    std::array<std::uint64_t, 4> expected;
  };
  const Kat vectors[] = {
      {{1, 0, 0, 0},
       {0, 0},
       {0x02f4ba6408e4d89bull, 0x3dd62b0b9ca8c5b2ull, 0x1c8667a55d902e79ull,
        0x907d7a052fd5b4dcull}},
      {{2, 0, 0, 0},
       {0, 0},
       {0x809bf322883987c3ull, 0x471128b9e807f7ddull, 0xf250ba0dbec065b7ull,
        0xfc6ed66767a457bcull}},
      {{0, 0, 0, 0},
       {0xffffffffffffffffull, 0xffffffffffffffffull},
       {0x44b7493d1acfc229ull, 0x6636af8e997921ddull, 0x3f73e132b5b3780eull,
        0x605644dde03b01b1ull}},
      {{0x85a308d3243f6a89ull, 0x0370734413198a2eull, 0, 0},
       {0x299f31d0a4093822ull, 0},
       {0x7da5671349405bfaull, 0xec602a05f68932faull, 0x3c51ae0372178914ull,
        0x302cac273d92ed2aull}},
      {{1, 0, 0, 0},
       {1, 2},
       {0x4f2f4313b5536b09ull, 0x5b617be3219ff32aull, 0x097293476f9275cbull,
        0xf63f3bf4962c3942ull}},
  };
  for (const auto& kat : vectors)
    CHECK(emrsense::philox4x64(kat.counter, kat.key) == kat.expected);
}

TEST_CASE("streams replay identically") {
  RngStream a(1, 0);
  RngStream b(1, 0);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());

  RngStream c(1, 0), d(1, 0);
  for (int i = 0; i < 100; ++i) {
    const auto p = c.gaussian_pair();
    const auto q = d.gaussian_pair();
    CHECK(p.first == q.first);
    CHECK(p.second == q.second);
  }
}

TEST_CASE("distinct streams differ") {
  RngStream a(1, 0);
  RngStream b(1, 1);
  RngStream c(2, 0);
  int same_ab = 0, same_ac = 0;
  for (int i = 0; i < 64; ++i) {
    const auto va = a.next_u64();
    if (va == b.next_u64()) ++same_ab;
    if (va == c.next_u64()) ++same_ac;
  }
  CHECK(same_ab == 0);
  CHECK(same_ac == 0);
}

TEST_CASE("uniform draws lie in (0, 1]") {
  RngStream rng(7, 3);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.next_uniform();
    CHECK(u > 0.0);
    CHECK(u <= 1.0);
  }
}

TEST_CASE("gaussian moments") {
  // CLT bound on the mean is 3.3/sqrt(N) ~ 0.0033; the contract allows 0.005.
  const std::size_t count = 1'000'000;
  RngStream rng(42, 0);
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t i = 0; i < count / 2; ++i) {
    const auto [a, b] = rng.gaussian_pair();
    sum += a + b;
    sum_sq += a * a + b * b;
  }
  const double mean = sum / count;
  const double var = sum_sq / count - mean * mean;
  CHECK(std::fabs(mean) < 0.005);
  CHECK(var > 0.99);
  CHECK(var < 1.01);
}

TEST_CASE("streams are uncorrelated") {
  const int count = 100000;
  RngStream a(9, 0);
  RngStream b(9, 1);
  double sum_ab = 0.0, sum_a = 0.0, sum_b = 0.0, sum_a2 = 0.0, sum_b2 = 0.0;
  for (int i = 0; i < count; ++i) {
    const double x = a.gaussian_pair().first;
    const double y = b.gaussian_pair().first;
    sum_ab += x * y;
    sum_a += x;
    sum_b += y;
    sum_a2 += x * x;
    sum_b2 += y * y;
  }
  const double n = count;
  const double cov = sum_ab / n - (sum_a / n) * (sum_b / n);
  const double corr = cov / std::sqrt((sum_a2 / n - (sum_a / n) * (sum_a / n)) *
                                      (sum_b2 / n - (sum_b / n) * (sum_b / n)));
  CHECK(std::fabs(corr) < 0.02);
}

TEST_CASE("fill_gaussian consumes pairs in order") {
  RngStream a(5, 11);
  std::vector<double> buf(9);
  a.fill_gaussian(buf);
  RngStream b(5, 11);
  for (int i = 0; i < 4; ++i) {
    const auto [x, y] = b.gaussian_pair();
    CHECK(buf[2 * i] == x);
    CHECK(buf[2 * i + 1] == y);
  }
  CHECK(buf[8] == b.gaussian_pair().first);
}

TEST_CASE("seed derivation") {
  CHECK(emrsense::derive_seed(1, 2) == emrsense::derive_seed(1, 2));
  CHECK(emrsense::derive_seed(1, 2) != emrsense::derive_seed(1, 3));
  CHECK(emrsense::derive_seed(1, 2) != emrsense::derive_seed(2, 2));
  CHECK(emrsense::derive_seed(1, 2, 3) != emrsense::derive_seed(1, 2, 4));
  CHECK(emrsense::derive_seed(1, 2, 3) != emrsense::derive_seed(1, 3, 2));
}

TEST_SUITE_END();
