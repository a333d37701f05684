#pragma once

#include <random>
#include <vector>

#include "dbr/scalar.hpp"

namespace dbr::testing {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : g_(seed) {}
  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(g_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(g_); }
  // nonzero-or-zero rational p/q with |p|, q <= height
  Scalar scalar(int height, bool allow_fraction = false) {
    const int p = uniform(-height, height);
    const int q = allow_fraction ? uniform(1, height) : 1;
    return Scalar(Rational(p, q));
  }
  Scalar nonzero(int height) {
    int p = 0;
    while (p == 0) p = uniform(-height, height);
    return Scalar(p);
  }
  template <class T>
  const T& pick(const std::vector<T>& v) { return v[uniform(0, static_cast<int>(v.size()) - 1)]; }
  std::mt19937_64& engine() { return g_; }

 private:
  std::mt19937_64 g_;
};

}  // namespace dbr::testing
