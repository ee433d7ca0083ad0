#include "emrsense/cost.hpp"

#include <algorithm>
#include <stdexcept>

namespace emrsense {

namespace {

uint128 base_flops(long long m, long long n) {
  if (m < 1 || n < 1) throw std::invalid_argument("cost: m and n must be >= 1");
  return static_cast<uint128>(m) * static_cast<uint128>(m) *
         static_cast<uint128>(n + 1);
}

}  // namespace

uint128 flop_count(QuantScheme scheme, long long m, long long n) {
  const uint128 base = base_flops(m, n);
  return scheme == QuantScheme::OneBit ? 4 * base : base;
}

uint128 transistor_count(QuantScheme scheme, long long m, long long n) {
  const uint128 base = base_flops(m, n);
  return scheme == QuantScheme::OneBit ? 8 * base : 1506 * base;
}

long long transistors_per_flop(QuantScheme scheme) {
  return scheme == QuantScheme::OneBit ? 2 : 1506;
}

CostReport cost_report(QuantScheme scheme, long long m, long long n) {
  CostReport report;
  report.scheme = scheme;
  report.m = m;
  report.n = n;
  report.flops = flop_count(scheme, m, n);
  report.transistors = transistor_count(scheme, m, n);
  return report;
}

std::string uint128_to_string(uint128 value) {
  if (value == 0) return "0";
  std::string out;
  while (value > 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(value % 10)));
    value /= 10;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::string scheme_name(QuantScheme scheme) {
  return scheme == QuantScheme::OneBit ? "one_bit" : "eight_bit";
}

}  // namespace emrsense
