#pragma once

// Oracles and samplers for Lie bialgebras.

#include <map>
#include <tuple>

#include "dbr/bialgebra_deform.hpp"
#include "lie_fixtures.hpp"

namespace dbr::testing {

// Lambda^2 U as coefficients of e_p ^ e_q, p < q
using Wedge = std::map<std::pair<int, int>, Scalar>;

inline void add_wedge(Wedge& w, const Vec& a, const Vec& b, const Scalar& s) {
  for (const auto& [p, x] : a)
    for (const auto& [q, y] : b) {
      if (p == q) continue;
      const auto key = p < q ? std::pair{p, q} : std::pair{q, p};
      w[key] += (p < q ? x * y : -(x * y)) * s;
    }
}

inline bool wedge_zero(const Wedge& w) {
  for (const auto& [k, c] : w)
    if (!c.is_zero()) return false;
  return true;
}

// delta(e_i) = sum_{j<k} gamma_i^{jk} e_j ^ e_k
inline Wedge cobracket(const BialgebraPresentation& b, const Vec& x) {
  Wedge w;
  for (const auto& [i, c] : x)
    for (int j = 0; j < b.n(); ++j)
      for (int k = j + 1; k < b.n(); ++k) add_wedge(w, Vec(j), Vec(k), c * b.dual(j, k, i));
  return w;
}

// x . (sum w_pq e_p ^ e_q)
inline Wedge ad(const LiePresentation& g, const Vec& x, const Wedge& w) {
  Wedge r;
  for (const auto& [pq, c] : w) {
    add_wedge(r, g.bracket(x, Vec(pq.first)), Vec(pq.second), c);
    add_wedge(r, Vec(pq.first), g.bracket(x, Vec(pq.second)), c);
  }
  return r;
}

// Chevalley-Eilenberg: delta([x,y]) = x.delta(y) - y.delta(x) on all basis pairs
inline bool cocycle(const BialgebraPresentation& b) {
  for (int i = 0; i < b.n(); ++i)
    for (int j = i + 1; j < b.n(); ++j) {
      Wedge d = cobracket(b, b.lie.bracket(Vec(i), Vec(j)));
      for (const auto& [k, c] : ad(b.lie, Vec(i), cobracket(b, Vec(j)))) d[k] -= c;
      for (const auto& [k, c] : ad(b.lie, Vec(j), cobracket(b, Vec(i)))) d[k] += c;
      if (!wedge_zero(d)) return false;
    }
  return true;
}

inline BBElem bidegree(const BBElem& x, int n, int nxi, int ntheta) {
  const Mono lo = (Mono(1) << n) - 1;
  return x.filter([&](const Mono& k) { return mono_len(k & lo) == nxi && mono_len(k >> n) == ntheta; });
}

inline Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

// the dual map phi^*: V* -> U* as a triple of dual Lie algebras
inline LieTriple dual_triple(const BialgebraPresentation& u, const BialgebraPresentation& v, const Matrix& phi) {
  return {v.dual, u.dual, transpose(phi)};
}

inline bool is_bialgebra_morphism(const BialgebraPresentation& u, const BialgebraPresentation& v, const Matrix& phi) {
  return is_morphism({u.lie, v.lie, phi}) && is_morphism(dual_triple(u, v, phi));
}

inline bool is_bialgebra(const BialgebraPresentation& b) {
  return classical_jacobi(b.lie) && classical_jacobi(b.dual) && cocycle(b);
}

// sum_{i<j} D^eta xi_i xi_j theta_{v eta} with D the Lie defect
inline BBElem lie_defect_oracle(const LieTriple& m) {
  const int du = m.dim_u(), n = du + m.dim_v();
  const auto ds = morphism_defects(m);
  BBElem r;
  int t = 0;
  for (int i = 0; i < du; ++i)
    for (int j = i + 1; j < du; ++j, ++t)
      for (const auto& [eta, c] : ds[t]) r.add((Mono(1) << i) | (Mono(1) << j) | (Mono(1) << (n + du + eta)), c);
  return r;
}

// sum_{b<g} (phi^*[f^b, f^g] - [phi^* f^b, phi^* f^g])_l xi_{u l} theta_{v b} theta_{v g}
inline BBElem dual_defect_oracle(const BialgebraPresentation& u, const BialgebraPresentation& v, const Matrix& phi) {
  const int du = u.n(), dv = v.n(), n = du + dv;
  const auto ds = morphism_defects(dual_triple(u, v, phi));
  BBElem r;
  int t = 0;
  for (int b = 0; b < dv; ++b)
    for (int g = b + 1; g < dv; ++g, ++t)
      for (const auto& [l, c] : ds[t])
        r.add((Mono(1) << l) | (Mono(1) << (n + du + b)) | (Mono(1) << (n + du + g)), c);
  return r;
}

inline BialgebraPresentation with_cobracket(const LiePresentation& lie, std::vector<std::tuple<int, int, int, int>> gammas) {
  LiePresentation d(lie.n);
  for (auto [j, k, i, c] : gammas) {
    Vec v = d.bracket(Vec(j), Vec(k));
    v.add(i, Scalar(c));
    d.set_bracket(j, k, v);
  }
  return BialgebraPresentation(lie, d);
}

inline const BialgebraPresentation aff_bi = with_cobracket(LiePresentation::aff2(), {{0, 1, 0, 1}});

inline BialgebraPresentation random_bialgebra2(Rng& rng) {
  // every pair (bracket, cobracket) on a 2-dimensional space is a bialgebra
  return BialgebraPresentation(random_presentation(rng, 2, 0.6, 1), random_presentation(rng, 2, 0.6, 1));
}

struct BiTriple {
  BialgebraPresentation u, v;
  Matrix phi;
};

// a bialgebra morphism between 2-dimensional bialgebras
inline BiTriple random_bi_morphism(Rng& rng) {
  const BialgebraPresentation u = random_bialgebra2(rng);
  switch (rng.uniform(0, 2)) {
    case 0:
      return {u, random_bialgebra2(rng), Matrix(2, 2)};
    case 1:
      return {u, u, Matrix::identity(2)};
    default: {  // transport along an isomorphism g: bracket by g, cobracket by g^{-T}
      const Matrix g = random_invertible(rng, 2, 1);
      return {u, BialgebraPresentation(pushforward(u.lie, g), pushforward(u.dual, transpose(g).inverse())), g};
    }
  }
}

}  // namespace dbr::testing
