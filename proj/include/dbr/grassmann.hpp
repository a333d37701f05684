#pragma once

#include <bit>
#include <cstdint>
#include <utility>
#include <vector>

namespace dbr {

// Square-free monomials in odd generators, encoded as bitmasks with the
// generators multiplied in increasing bit order.
using Mono = std::uint64_t;

inline int mono_len(Mono m) { return std::popcount(m); }

// number of set bits of m strictly below bit i
inline int bits_below(Mono m, int i) { return std::popcount(m & ((Mono(1) << i) - 1)); }

// x_A * x_B = sign * x_{A|B}; sign is 0 when A and B overlap
inline int mono_mul_sign(Mono a, Mono b) {
  if (a & b) return 0;
  int parity = 0;
  for (Mono t = b; t; t &= t - 1) parity += std::popcount(a >> (std::countr_zero(t) + 1));
  return (parity & 1) ? -1 : 1;
}

// left partial derivative: sign for pulling x_i to the front
inline int left_deriv_sign(Mono m, int i) { return (bits_below(m, i) & 1) ? -1 : 1; }

// right partial derivative: sign for pushing x_i to the back
inline int right_deriv_sign(Mono m, int i) {
  return (std::popcount(m >> (i + 1)) & 1) ? -1 : 1;
}

// product x_{i1} ... x_{ik} in the given order: (sign, mask), sign 0 on repeats
inline std::pair<int, Mono> mono_from(const std::vector<int>& idx) {
  Mono m = 0;
  int sign = 1;
  for (int i : idx) {
    const int s = mono_mul_sign(m, Mono(1) << i);
    if (s == 0) return {0, 0};
    sign *= s;
    m |= Mono(1) << i;
  }
  return {sign, m};
}

inline std::vector<int> mono_indices(Mono m) {
  std::vector<int> r;
  for (; m; m &= m - 1) r.push_back(std::countr_zero(m));
  return r;
}

// all masks over `n` generators with exactly k bits
std::vector<Mono> masks_of_size(int n, int k);

}  // namespace dbr
