#pragma once

#include "dbr/graded_lie.hpp"
#include "support.hpp"

namespace dbr::testing {

// random homogeneous element of degree d built from up to `terms` basis keys
template <GradedLie A>
LinComb<typename A::Key> random_element(const A& alg, Rng& rng, int d, int terms = 3, int height = 3) {
  LinComb<typename A::Key> x;
  const auto span = alg.spanning_set(d);
  if (span.empty()) return x;
  const int t = rng.uniform(1, terms);
  for (int i = 0; i < t; ++i) x.add(rng.pick(span), rng.nonzero(height));
  return x;
}

template <GradedLie A>
LinComb<typename A::Key> jacobiator(const A& alg, const LinComb<typename A::Key>& x, int dx,
                                    const LinComb<typename A::Key>& y, int dy,
                                    const LinComb<typename A::Key>& z) {
  // [x,[y,z]] - [[x,y],z] - (-1)^{|x||y|} [y,[x,z]]
  auto r = bracket(alg, x, bracket(alg, y, z));
  r -= bracket(alg, bracket(alg, x, y), z);
  r.add_scaled(bracket(alg, y, bracket(alg, x, z)), Scalar(((dx * dy) & 1) ? 1 : -1));
  return r;
}

}  // namespace dbr::testing
