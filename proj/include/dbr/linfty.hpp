#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dbr/lincomb.hpp"
#include "dbr/multilinear.hpp"
#include "dbr/permutation.hpp"

namespace dbr {

struct UnverifiableTruncation : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct WindowExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Curved L-infinity[1]-algebra given by a bracket provider. Every m_k has
// degree +1 and is graded symmetric; m_0 is the curvature.
template <class K>
struct LInftyAlg {
  using Key = K;
  using Elem = LinComb<K>;

  std::string name;
  std::string provenance = "direct";
  std::function<int(const K&)> degree;
  std::function<Elem(const std::vector<Elem>&)> bracket;
  bool curved = false;
  int max_arity = -1;    // provider window; -1 means any arity
  // m_n(phi, ..., phi) = 0 for degree-0 phi once n > mc_bound; -1 if unknown
  int mc_bound = -1;
  // same for m_{n+1}(z, phi, ..., phi) with z of degree -1
  int gauge_bound = -1;

  Elem operator()(const std::vector<Elem>& args) const {
    if (max_arity >= 0 && static_cast<int>(args.size()) > max_arity)
      throw WindowExceeded(name + ": arity " + std::to_string(args.size()) + " beyond the bracket window");
    return bracket(args);
  }
};

template <class K>
std::optional<int> elem_degree(const LInftyAlg<K>& alg, const LinComb<K>& x) {
  std::optional<int> d;
  for (const auto& [k, c] : x) {
    const int e = alg.degree(k);
    if (d && *d != e) return std::nullopt;
    d = e;
  }
  return d;
}

// sum_{i+j=n+1} sum_{(i,n-i)-unshuffles s} eps(s) m_j(m_i(x_s(1..i)), x_s(i+1..n)),
// with i starting at 0 for curved algebras. Inputs must be homogeneous.
template <class K>
LinComb<K> relation_residual(const LInftyAlg<K>& alg, const std::vector<LinComb<K>>& xs) {
  const int n = static_cast<int>(xs.size());
  std::vector<int> degs(n);
  for (int k = 0; k < n; ++k) {
    auto d = elem_degree(alg, xs[k]);
    if (!d) {
      if (!xs[k].is_zero()) throw std::invalid_argument("relation_residual: inhomogeneous input");
      return {};
    }
    degs[k] = *d;
  }
  LinComb<K> total;
  for (int i = alg.curved ? 0 : 1; i <= n; ++i) {
    for (const Perm& p : unshuffles(i, n - i)) {
      std::vector<LinComb<K>> inner, outer(1);
      for (int k = 0; k < i; ++k) inner.push_back(xs[p[k]]);
      outer[0] = alg(inner);
      if (outer[0].is_zero()) continue;
      for (int k = i; k < n; ++k) outer.push_back(xs[p[k]]);
      total.add_scaled(alg(outer), Scalar(koszul_sign(p, degs)));
    }
  }
  return total;
}

template <class K>
void require_bound(const LInftyAlg<K>& alg, int bound, int cutoff, const char* what) {
  if (bound < 0)
    throw UnverifiableTruncation(alg.name + ": no vanishing bound for the " + what +
                                 " series (neither nilpotent nor filtered)");
  if (cutoff >= 0 && cutoff < bound)
    throw UnverifiableTruncation(alg.name + ": cutoff " + std::to_string(cutoff) + " is below the " +
                                 what + " bound " + std::to_string(bound));
}

// m_0 + sum_{n=1}^{cutoff} m_n(phi, ..., phi) / n!; cutoff < 0 uses the proven bound
template <class K>
LinComb<K> mc_residual(const LInftyAlg<K>& alg, const LinComb<K>& phi, int cutoff = -1) {
  require_bound(alg, alg.mc_bound, cutoff, "Maurer-Cartan");
  const int top = cutoff >= 0 ? cutoff : alg.mc_bound;
  LinComb<K> r;
  if (alg.curved) r += alg({});
  if (phi.is_zero()) return r;
  std::vector<LinComb<K>> args;
  for (int n = 1; n <= top; ++n) {
    args.push_back(phi);
    r.add_scaled(alg(args), Scalar(Rational(1) / factorial(n)));
  }
  return r;
}

// Y^z at m: sum_{n>=0} m_{n+1}(z, m, ..., m) / n!
template <class K>
LinComb<K> gauge_field(const LInftyAlg<K>& alg, const LinComb<K>& z, const LinComb<K>& m, int cutoff = -1) {
  require_bound(alg, alg.gauge_bound, cutoff, "gauge");
  const int top = cutoff >= 0 ? cutoff : alg.gauge_bound;
  LinComb<K> r;
  if (z.is_zero()) return r;
  std::vector<LinComb<K>> args{z};
  for (int n = 0; n + 1 <= top; ++n) {
    r.add_scaled(alg(args), Scalar(Rational(1) / factorial(n)));
    if (m.is_zero()) break;
    args.push_back(m);
  }
  return r;
}

// first-order change of the MC residual at m along y, via eps-truncated scalars
template <class K>
LinComb<K> mc_tangent_defect(const LInftyAlg<K>& alg, const LinComb<K>& m, const LinComb<K>& y) {
  EpsScope scope(2);
  LinComb<K> pt = m;
  pt.add_scaled(y, Scalar::eps(1));
  return mc_residual(alg, pt).eps_part(1);
}

// Direct algebra from tables m_k on a graded space (already shifted).
LInftyAlg<int> algebra_from_maps(const std::string& name, const std::vector<MultilinearMap>& m,
                                 bool curved = false);

}  // namespace dbr
