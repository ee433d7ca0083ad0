#include "emrsense/rng.hpp"

#include <cmath>

namespace emrsense {

namespace {

constexpr std::uint64_t kPhiloxMul0 = 0xD2E7470EE14C6C93ull;
constexpr std::uint64_t kPhiloxMul1 = 0xCA5A826395121157ull;
constexpr std::uint64_t kPhiloxWeyl0 = 0x9E3779B97F4A7C15ull;
constexpr std::uint64_t kPhiloxWeyl1 = 0xBB67AE8584CAA73Bull;

inline void mul_hi_lo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi,
                      std::uint64_t& lo) noexcept {
  const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  hi = static_cast<std::uint64_t>(p >> 64);
  lo = static_cast<std::uint64_t>(p);
}

}  // namespace

std::array<std::uint64_t, 4> philox4x64(const std::array<std::uint64_t, 4>& counter,
                                        const std::array<std::uint64_t, 2>& key) noexcept {
  std::array<std::uint64_t, 4> ctr = counter;
  std::uint64_t k0 = key[0], k1 = key[1];
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      k0 += kPhiloxWeyl0;
      k1 += kPhiloxWeyl1;
    }
    std::uint64_t hi0, lo0, hi1, lo1;
    mul_hi_lo(kPhiloxMul0, ctr[0], hi0, lo0);
    mul_hi_lo(kPhiloxMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ k0, lo1, hi0 ^ ctr[3] ^ k1, lo0};
  }
  return ctr;
}

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t context) noexcept {
  return mix64(mix64(master_seed) ^ context);
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t a,
                          std::uint64_t b) noexcept {
  return mix64(derive_seed(master_seed, a) ^ mix64(b));
}

void RngStream::refill() noexcept {
  block_ = philox4x64(counter_, key_);
  index_ = 0;
  // 256-bit little endian increment; wrap-around is unreachable in practice.
  if (++counter_[0] == 0)
    if (++counter_[1] == 0)
      if (++counter_[2] == 0) ++counter_[3];
}

std::pair<double, double> RngStream::gaussian_pair() noexcept {
  for (;;) {
    const double v1 = 2.0 * next_uniform() - 1.0;
    const double v2 = 2.0 * next_uniform() - 1.0;
    const double s = v1 * v1 + v2 * v2;
    if (s >= 1.0 || s == 0.0) continue;
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    return {v1 * f, v2 * f};
  }
}

void RngStream::fill_gaussian(std::span<double> out) noexcept {
  std::size_t i = 0;
  const std::size_t paired = out.size() & ~std::size_t{1};
  while (i < paired) {
    const auto [a, b] = gaussian_pair();
    out[i++] = a;
    out[i++] = b;
  }
  if (i < out.size()) out[i] = gaussian_pair().first;
}

void RngStream::fill_bits(std::span<std::uint64_t> out) noexcept {
  for (auto& w : out) w = next_u64();
}

}  // namespace emrsense
