#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <utility>

namespace emrsense {

// One Philox 4x64 block (10 rounds): encrypts `counter` under `key`.
// Counter-based, so random access over the counter space is O(1).
std::array<std::uint64_t, 4> philox4x64(const std::array<std::uint64_t, 4>& counter,
                                        const std::array<std::uint64_t, 2>& key) noexcept;

// SplitMix64 finalizer; bijective on 64-bit integers.
std::uint64_t mix64(std::uint64_t x) noexcept;

// Deterministic sub-seed derivation for nested experiments (sweep points,
// per-purpose trial sets). Not a replacement for stream_id: streams within
// one experiment are indexed by trial, sub-seeds separate experiments.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t context) noexcept;
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t a, std::uint64_t b) noexcept;

// A deterministic random stream keyed by (master_seed, stream_id).
// Identical (seed, id) pairs replay the identical sequence regardless of how
// many other streams exist; distinct ids give independent sequences.
// Single-owner: not safe for concurrent use by multiple threads.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_id) noexcept
      : key_{master_seed, stream_id} {}

  std::uint64_t master_seed() const noexcept { return key_[0]; }
  std::uint64_t stream_id() const noexcept { return key_[1]; }

  std::uint64_t next_u64() noexcept {
    if (index_ == 4) refill();
    return block_[index_++];
  }

  // Uniform on (0, 1]; strictly positive so log() is always safe.
  double next_uniform() noexcept {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  // Two independent standard normal variates (Marsaglia polar method).
  std::pair<double, double> gaussian_pair() noexcept;

  // Fills `out` with standard normals. Pairs are consumed in order; an odd
  // count discards the second variate of the final pair.
  void fill_gaussian(std::span<double> out) noexcept;

  // Raw 64-bit words, e.g. for sign/bit sampling.
  void fill_bits(std::span<std::uint64_t> out) noexcept;

 private:
  void refill() noexcept;

  std::array<std::uint64_t, 2> key_;
  std::array<std::uint64_t, 4> counter_{0, 0, 0, 0};
  std::array<std::uint64_t, 4> block_{};
  unsigned index_ = 4;
};

}  // namespace emrsense
