#pragma once

#include <concepts>
#include <optional>
#include <string>
#include <vector>

#include "dbr/lincomb.hpp"

namespace dbr {

// A graded Lie algebra with a homogeneous key basis and finite spanning
// sets in every degree.
template <class A>
concept GradedLie = requires(const A& a, const typename A::Key& k, int d) {
  { a.degree(k) } -> std::convertible_to<int>;
  { a.bracket_keys(k, k) } -> std::same_as<LinComb<typename A::Key>>;
  { a.spanning_set(d) } -> std::same_as<std::vector<typename A::Key>>;
  { a.key_str(k) } -> std::convertible_to<std::string>;
};

template <GradedLie A>
LinComb<typename A::Key> bracket(const A& alg, const LinComb<typename A::Key>& x,
                                 const LinComb<typename A::Key>& y) {
  LinComb<typename A::Key> r;
  for (const auto& [kx, cx] : x)
    for (const auto& [ky, cy] : y) r.add_scaled(alg.bracket_keys(kx, ky), cx * cy);
  return r;
}

// degree of a homogeneous element, nullopt for zero or mixed elements
template <GradedLie A>
std::optional<int> degree_of(const A& alg, const LinComb<typename A::Key>& x) {
  std::optional<int> d;
  for (const auto& [k, c] : x) {
    const int e = alg.degree(k);
    if (d && *d != e) return std::nullopt;
    d = e;
  }
  return d;
}

template <GradedLie A>
std::string to_string(const A& alg, const LinComb<typename A::Key>& x) {
  if (x.is_zero()) return "0";
  std::string s;
  for (const auto& [k, c] : x) {
    if (!s.empty()) s += " + ";
    s += "(" + c.str() + ")" + alg.key_str(k);
  }
  return s;
}

}  // namespace dbr
