#pragma once

#include <string>

namespace emrsense {

enum class QuantScheme { EightBit, OneBit };

using uint128 = unsigned __int128;

// Flops for one EMR evaluation over an m x n frame: m^2 (n + 1) at 8-bit,
// quadrupled at one bit (real/imaginary parts are processed separately on
// the doubled-size sign matrix).
uint128 flop_count(QuantScheme scheme, long long m, long long n);

// Transistor cost: 1506 per 8-bit flop (748-transistor multiplier plus
// 10-transistor full adders), 2 per one-bit flop (an XNOR gate).
uint128 transistor_count(QuantScheme scheme, long long m, long long n);

long long transistors_per_flop(QuantScheme scheme);

struct CostReport {
  QuantScheme scheme = QuantScheme::EightBit;
  long long m = 1;
  long long n = 1;
  uint128 flops = 0;
  uint128 transistors = 0;
};

CostReport cost_report(QuantScheme scheme, long long m, long long n);

std::string uint128_to_string(uint128 value);
std::string scheme_name(QuantScheme scheme);

}  // namespace emrsense
