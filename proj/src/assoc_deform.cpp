#include "dbr/assoc_deform.hpp"

#include <algorithm>
#include <stdexcept>

namespace dbr {

namespace {

bool is_u(int letter, int du) { return letter < du; }

// ---- explicit insertions, kept independent of CoderivationAlgebra::compose

struct Inserter {
  std::vector<int> deg;  // letter degrees in (U + V)[1]
  int du;
  int cutoff;

  int word_deg(const Word& w, size_t end) const {
    int s = 0;
    for (size_t i = 0; i < end; ++i) s += deg[w[i]];
    return s;
  }
  int key_deg(const CKey& k) const { return deg[k.out] - word_deg(k.in, k.in.size()); }
  int elem_deg(const Coder& x) const { return x.is_zero() ? 0 : key_deg(x.begin()->first); }

  void add(Coder& r, CKey k, const Scalar& c) const {
    if (static_cast<int>(k.in.size()) <= cutoff) r.add(std::move(k), c);
  }

  // g o_p f
  void insert_at(Coder& r, const CKey& g, size_t p, const CKey& f, const Scalar& c) const {
    if (g.in[p] != f.out) return;
    Word w(g.in.begin(), g.in.begin() + p);
    w.insert(w.end(), f.in.begin(), f.in.end());
    w.insert(w.end(), g.in.begin() + p + 1, g.in.end());
    add(r, {w, g.out}, ((key_deg(f) * word_deg(g.in, p)) & 1) ? -c : c);
  }

  // sum_p g o_p f
  Coder circ(const Coder& g, const Coder& f) const {
    Coder r;
    for (const auto& [kg, cg] : g)
      for (const auto& [kf, cf] : f)
        for (size_t p = 0; p < kg.in.size(); ++p) insert_at(r, kg, p, kf, cg * cf);
    return r;
  }

  Coder gerstenhaber(const Coder& x, const Coder& y) const {
    Coder r = circ(x, y);
    r.add_scaled(circ(y, x), Scalar(((elem_deg(x) * elem_deg(y)) & 1) ? 1 : -1));
    return r;
  }

  // every V input replaced through phi: v_eta <- sum_l A(eta, l) u_l
  Coder fill_phi(const Coder& x, const Matrix& a) const {
    Coder r;
    for (const auto& [k, c] : x) {
      std::vector<std::pair<Word, Scalar>> partial{{Word{}, c}};
      for (int letter : k.in) {
        std::vector<std::pair<Word, Scalar>> next;
        for (auto& [w, s] : partial) {
          if (is_u(letter, du)) {
            Word w2 = w;
            w2.push_back(letter);
            next.emplace_back(std::move(w2), s);
            continue;
          }
          for (int l = 0; l < a.cols(); ++l) {
            const Scalar& e = a(letter - du, l);
            if (e.is_zero()) continue;
            Word w2 = w;
            w2.push_back(l);
            next.emplace_back(std::move(w2), s * e);
          }
        }
        partial = std::move(next);
      }
      for (auto& [w, s] : partial) add(r, {w, k.out}, s);
    }
    return r;
  }

  // phi o x for x with outputs in U
  Coder post_phi(const Coder& x, const Matrix& a) const {
    Coder r;
    for (const auto& [k, c] : x)
      for (int eta = 0; eta < a.rows(); ++eta)
        if (!a(eta, k.out).is_zero()) add(r, {k.in, du + eta}, c * a(eta, k.out));
    return r;
  }

  // sum over ordered tuples I of distinct slots of eps(I) x o_I (a_1, ..., a_m):
  // a_j goes into slot I_j; eps(I) is the Koszul sign that brings the a's
  // into slot order, and each a_j then passes the inputs to its left
  Coder multi_insert(const Coder& x, const std::vector<Coder>& as) const {
    const int m = static_cast<int>(as.size());
    Coder r;
    std::vector<std::vector<std::pair<CKey, Scalar>>> terms(m);
    for (int j = 0; j < m; ++j) terms[j].assign(as[j].begin(), as[j].end());
    for (const auto& [kx, cx] : x) {
      const int n = static_cast<int>(kx.in.size());
      if (n < m) continue;
      std::vector<int> slots(m, 0);
      // enumerate injective slot assignments
      std::function<void(int, std::vector<bool>&)> rec = [&](int j, std::vector<bool>& used) {
        if (j == m) {
          std::vector<int> pick(m, 0);
          std::function<void(int, Scalar)> terms_rec = [&](int t, Scalar c) {
            if (t == m) {
              std::vector<int> order(m), degs(m);
              for (int i = 0; i < m; ++i) {
                order[i] = i;
                degs[i] = key_deg(terms[i][pick[i]].first);
              }
              std::sort(order.begin(), order.end(), [&](int p, int q) { return slots[p] < slots[q]; });
              int sign = koszul_sign(order, degs);
              std::vector<int> at(n, -1);
              for (int i = 0; i < m; ++i) at[slots[i]] = i;
              Word w;
              int before = 0;
              for (int p = 0; p < n; ++p) {
                if (at[p] < 0) {
                  w.push_back(kx.in[p]);
                  before += deg[kx.in[p]];
                  continue;
                }
                const CKey& f = terms[at[p]][pick[at[p]]].first;
                if ((key_deg(f) * before) & 1) sign = -sign;
                w.insert(w.end(), f.in.begin(), f.in.end());
                before += word_deg(f.in, f.in.size());
              }
              add(r, {w, kx.out}, sign > 0 ? c : -c);
              return;
            }
            for (size_t i = 0; i < terms[t].size(); ++i) {
              if (terms[t][i].first.out != kx.in[slots[t]]) continue;
              pick[t] = static_cast<int>(i);
              terms_rec(t + 1, c * terms[t][i].second);
            }
          };
          terms_rec(0, cx);
          return;
        }
        for (int p = 0; p < n; ++p) {
          if (used[p]) continue;
          used[p] = true;
          slots[j] = p;
          rec(j + 1, used);
          used[p] = false;
        }
      };
      std::vector<bool> used(n, false);
      rec(0, used);
    }
    return r;
  }
};

std::pair<Coder, Coder> split_uv(const Coder& x, int du) {
  Coder xu, xv;
  for (const auto& [k, c] : x) {
    if (!in_L_prime(k, du)) throw std::invalid_argument("element outside L(U[1]) + L(V[1])");
    (is_u(k.out, du) ? xu : xv).add(k, c);
  }
  return {xu, xv};
}

bool in_a_key(const CKey& k, int du) {
  if (is_u(k.out, du) || k.in.empty()) return false;
  return std::all_of(k.in.begin(), k.in.end(), [du](int l) { return is_u(l, du); });
}

}  // namespace

// ---------------------------------------------------------------- presentations

AssocPresentation::AssocPresentation(int dim, std::vector<std::string> names)
    : n(dim), labels(std::move(names)), m(static_cast<size_t>(dim) * dim * dim) {
  if (dim < 0) throw std::invalid_argument("negative dimension");
  if (labels.empty())
    for (int i = 0; i < dim; ++i) labels.push_back("e" + std::to_string(i + 1));
  if (static_cast<int>(labels.size()) != dim) throw std::invalid_argument("label count mismatch");
}

AssocPresentation AssocPresentation::zero(int dim) { return AssocPresentation(dim); }

AssocPresentation AssocPresentation::dual_numbers() {
  AssocPresentation p(2, {"1", "x"});
  p.set_product(0, 0, Vec(0));
  p.set_product(0, 1, Vec(1));
  p.set_product(1, 0, Vec(1));
  return p;
}

AssocPresentation AssocPresentation::matrices2() {
  // E_ab E_cd = delta_bc E_ad, index 2a + b
  AssocPresentation p(4, {"E11", "E12", "E21", "E22"});
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (i % 2 == j / 2) p.set_product(i, j, Vec((i / 2) * 2 + j % 2));
  return p;
}

AssocPresentation AssocPresentation::upper2() {
  AssocPresentation p(3, {"E11", "E12", "E22"});
  p.set_product(0, 0, Vec(0));
  p.set_product(0, 1, Vec(1));
  p.set_product(1, 2, Vec(1));
  p.set_product(2, 2, Vec(2));
  return p;
}

void AssocPresentation::set_product(int i, int j, const Vec& v) {
  for (int k = 0; k < n; ++k) (*this)(i, j, k) = v.coeff(k);
}

Vec AssocPresentation::product(const Vec& x, const Vec& y) const {
  Vec r;
  for (const auto& [i, a] : x)
    for (const auto& [j, b] : y)
      for (int k = 0; k < n; ++k)
        if (!(*this)(i, j, k).is_zero()) r.add(k, a * b * (*this)(i, j, k));
  return r;
}

// ---------------------------------------------------------------- encoding

CoderivationAlgebra assoc_space(int dim_u, int dim_v, int cutoff) {
  std::vector<int> deg(dim_u + dim_v, -1);
  std::vector<std::string> labels;
  for (int i = 0; i < dim_u; ++i) labels.push_back("u" + std::to_string(i + 1));
  for (int i = 0; i < dim_v; ++i) labels.push_back("v" + std::to_string(i + 1));
  return CoderivationAlgebra(GradedSpace("(U+V)[1]", deg, labels), Flavor::tensor, false, cutoff, Overflow::quotient);
}

Coder encode_product(const AssocPresentation& p, const CoderivationAlgebra& space, int offset) {
  // all letters sit in degree -1, so the shift introduces no signs
  Coder q;
  for (int i = 0; i < p.n; ++i)
    for (int j = 0; j < p.n; ++j)
      for (int k = 0; k < p.n; ++k)
        if (!p(i, j, k).is_zero()) q += space.key({offset + i, offset + j}, offset + k, p(i, j, k));
  return q;
}

AssocPresentation decode_product(const Coder& q, int n, int offset) {
  AssocPresentation p(n);
  for (const auto& [k, c] : q) {
    const bool ok = k.in.size() == 2 && k.out >= offset && k.out < offset + n &&
                    std::all_of(k.in.begin(), k.in.end(), [&](int l) { return l >= offset && l < offset + n; });
    if (!ok) throw std::invalid_argument("decode_product: term outside the quadratic block");
    p(k.in[0] - offset, k.in[1] - offset, k.out - offset) = c;
  }
  return p;
}

AssocEncoding encode_assoc(const AssocPresentation& p) {
  if (static_cast<int>(p.m.size()) != p.n * p.n * p.n) throw std::invalid_argument("product table has the wrong shape");
  const CoderivationAlgebra space = assoc_space(p.n, 0, 3);
  AssocEncoding e;
  e.q = encode_product(p, space);
  e.square = bracket(space, e.q, e.q);
  e.associative = e.square.is_zero();
  if (!e.associative) {
    const Word& w = e.square.begin()->first.in;
    e.witness = std::array<int, 3>{w[0], w[1], w[2]};
  }
  return e;
}

Coder encode_amap(const Matrix& phi, const CoderivationAlgebra& space, int dim_u) {
  Coder r;
  for (int eta = 0; eta < phi.rows(); ++eta)
    for (int l = 0; l < phi.cols(); ++l)
      if (!phi(eta, l).is_zero()) r += space.key({l}, dim_u + eta, phi(eta, l));
  return r;
}

Coder assoc_morphism_residual(const AssocPresentation& u, const AssocPresentation& v, const Matrix& phi,
                              const CoderivationAlgebra& space) {
  if (phi.rows() != v.n || phi.cols() != u.n) throw std::invalid_argument("map has the wrong shape");
  auto col = [&](int l) {
    Vec c;
    for (int eta = 0; eta < v.n; ++eta) c.add(eta, phi(eta, l));
    return c;
  };
  Coder r;
  for (int i = 0; i < u.n; ++i)
    for (int j = 0; j < u.n; ++j) {
      Vec d = v.product(col(i), col(j));
      for (int k = 0; k < u.n; ++k)
        if (!u(i, j, k).is_zero()) d.add_scaled(col(k), -u(i, j, k));
      for (const auto& [eta, c] : d) r += space.key({i, j}, u.n + eta, c);
    }
  return r;
}

// ---------------------------------------------------------------- V-data

bool in_L_prime(const CKey& k, int dim_u) {
  const bool out_u = is_u(k.out, dim_u);
  return std::all_of(k.in.begin(), k.in.end(), [&](int l) { return is_u(l, dim_u) == out_u; });
}

CoderData assoc_vdata(const AssocPresentation& u, const AssocPresentation& v, int cutoff) {
  if (cutoff < 3) throw std::invalid_argument("assoc_vdata: cutoff must be at least 3");
  if (!encode_assoc(u).associative) throw std::invalid_argument("source is not associative");
  if (!encode_assoc(v).associative) throw std::invalid_argument("target is not associative");
  const int du = u.n;
  CoderData vd;
  vd.name = "associative pair";
  vd.L = std::make_shared<const CoderivationAlgebra>(assoc_space(du, v.n, cutoff));
  vd.in_a = [du](const CKey& k) { return in_a_key(k, du); };
  vd.weight = [du](const CKey& k) {
    const int nu = static_cast<int>(std::count_if(k.in.begin(), k.in.end(), [du](int l) { return is_u(l, du); }));
    return nu - (is_u(k.out, du) ? 1 : 0);
  };
  vd.w_max = cutoff;
  vd.win_lo = 0;
  vd.win_hi = cutoff - 2;
  vd.delta = encode_product(u, *vd.L, 0) + encode_product(v, *vd.L, du);
  return vd;
}

CoderData assoc_twisted(const AssocTriple& t, int cutoff) {
  const CoderData base = assoc_vdata(t.u, t.v, cutoff);
  return twist(base, encode_amap(t.phi, *base.L, t.dim_u()));
}

// ---------------------------------------------------------------- closed formulas

LInftyAlg<CoderBigKey> markl_brackets(const AssocTriple& t, int cutoff) {
  const int du = t.dim_u(), dv = t.dim_v();
  const auto space = std::make_shared<const CoderivationAlgebra>(assoc_space(du, dv, cutoff));
  if (!encode_assoc(t.u).associative || !encode_assoc(t.v).associative)
    throw std::invalid_argument("markl_brackets: non-associative input");
  if (!assoc_morphism_residual(t.u, t.v, t.phi, *space).is_zero())
    throw NotMaurerCartan("markl_brackets: phi is not an algebra morphism");
  const Inserter ins{space->space().deg, du, cutoff};
  const Coder mu = encode_product(t.u, *space, 0), nu = encode_product(t.v, *space, du);
  const Matrix a = t.phi;
  auto check_a = [du](const Coder& x) {
    for (const auto& [k, c] : x)
      if (!in_a_key(k, du)) throw NotInA("markl_brackets: argument outside a");
  };

  auto pure = [=](const std::vector<BigPiece<CKey>>& ps, int n_l) -> CoderBigElem {
    const int n = static_cast<int>(ps.size());
    for (int i = n_l; i < n; ++i) check_a(ps[i].x);
    if (n_l == 0) {
      if (n == 0) return lift_a(ins.fill_phi(nu, a) - ins.post_phi(mu, a));
      if (n == 1) {  // da = nu(a (x) phi) + nu(phi (x) a) - (-1)^{|a|} sum_i a o_i mu
        const Coder& x = ps[0].x;
        Coder r = ins.fill_phi(ins.circ(nu, x), a);
        r.add_scaled(ins.circ(x, mu), Scalar((ps[0].deg & 1) ? 1 : -1));
        return lift_a(r);
      }
      if (n == 2) return lift_a(ins.multi_insert(nu, {ps[0].x, ps[1].x}));
      return {};
    }
    if (n_l == 1) {
      auto [xu, xv] = split_uv(ps[0].x, du);
      const int dx = ps[0].deg + 1;  // degree in L
      if (n == 1) {
        Coder lpart = -ins.gerstenhaber(mu, xu);
        lpart -= ins.gerstenhaber(nu, xv);
        return lift_L(lpart) + lift_a(ins.fill_phi(xv, a) - ins.post_phi(xu, a));
      }
      std::vector<Coder> as;
      for (int i = 1; i < n; ++i) as.push_back(ps[i].x);
      Coder r = ins.fill_phi(ins.multi_insert(xv, as), a);
      if (n == 2) r.add_scaled(ins.circ(as[0], xu), Scalar(((dx * ps[1].deg) & 1) ? 1 : -1));
      return lift_a(r);
    }
    if (n_l == 2 && n == 2) {
      split_uv(ps[0].x, du);
      split_uv(ps[1].x, du);
      Coder r = ins.gerstenhaber(ps[0].x, ps[1].x);
      if ((ps[0].deg + 1) & 1) r *= Scalar(-1);
      return lift_L(r);
    }
    return {};
  };

  LInftyAlg<CoderBigKey> alg;
  alg.name = "associative (closed form)";
  alg.degree = [space](const CoderBigKey& k) { return space->degree(k.second) - (k.first == 0 ? 1 : 0); };
  alg.bracket = piecewise_bracket<CKey>(alg.degree, pure);
  // filtered by weight with w_max = cutoff, as for the V-data
  alg.mc_bound = cutoff + 2;
  alg.gauge_bound = cutoff + 4;
  return alg;
}

}  // namespace dbr
