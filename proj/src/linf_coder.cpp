#include "dbr/linf_coder.hpp"

#include <algorithm>
#include <stdexcept>

namespace dbr {

namespace {

std::optional<int> vec_degree(const GradedSpace& w, const Vec& x) {
  std::optional<int> d;
  for (const auto& [i, c] : x) {
    if (d && *d != w.deg[i]) return std::nullopt;
    d = w.deg[i];
  }
  return d;
}

void require_same_space(const GradedSpace& a, const GradedSpace& b, const char* what) {
  if (!(a == b)) throw std::invalid_argument(std::string(what) + ": map on the wrong space");
}

}  // namespace

// ---------------------------------------------------------------- coalgebra

TruncatedCoalgebra::TruncatedCoalgebra(GradedSpace W, Flavor flavor, bool unital, int cutoff)
    : coder_(std::move(W), flavor, unital, cutoff, unital ? Overflow::strict : Overflow::quotient) {}

LinComb<TruncatedCoalgebra::Triple> TruncatedCoalgebra::coassociativity_defect(const Word& w) const {
  LinComb<Triple> r;
  for (const auto& [pr, c] : coproduct(w)) {
    for (const auto& [ab, c2] : coproduct(pr.first)) r.add({ab.first, ab.second, pr.second}, c * c2);
    for (const auto& [ab, c2] : coproduct(pr.second)) r.add({pr.first, ab.first, ab.second}, -c * c2);
  }
  return r;
}

// ---------------------------------------------------------------- alpha and J

CoderivationAlgebra unital_partner(const CoderivationAlgebra& reduced) {
  return CoderivationAlgebra(reduced.space(), reduced.flavor(), true, reduced.cutoff(), Overflow::strict);
}

Coder alpha(const CoderivationAlgebra& L, const Vec& w) {
  if (!L.unital()) throw std::invalid_argument("alpha: needs the unital coalgebra");
  if (!vec_degree(L.space(), w) && !w.is_zero()) throw std::invalid_argument("alpha: inhomogeneous vector");
  Coder r;
  for (const auto& [i, c] : w) r += L.key({}, i, c);
  return r;
}

Vec alpha_value(const Coder& x) {
  Vec r;
  for (const auto& [k, c] : x)
    if (k.in.empty()) r.add(k.out, c);
  return r;
}

Coder embed_J(const CoderivationAlgebra& unital, const Coder& theta) {
  if (!unital.unital()) throw std::invalid_argument("embed_J: target must be unital");
  Coder r;
  for (const auto& [k, c] : theta) {
    if (k.in.empty()) throw std::invalid_argument("embed_J: arity-0 coefficient");
    r += unital.key(k.in, k.out, c);
  }
  return r;
}

VData<CoderivationAlgebra> alpha_vdata(const CoderivationAlgebra& reduced, const Coder& theta) {
  VData<CoderivationAlgebra> vd;
  vd.name = "alpha";
  vd.L = std::make_shared<const CoderivationAlgebra>(unital_partner(reduced));
  vd.in_a = [](const CKey& k) { return k.in.empty(); };
  vd.delta = embed_J(*vd.L, theta);
  // each bracket with some alpha_w shortens the input words by one
  vd.bracket_bound = reduced.cutoff();
  vd.ad_nilpotency = reduced.cutoff();
  vd.win_lo = -1;
  vd.win_hi = 1;
  return vd;
}

LInftyAlg<int> alpha_algebra(const VData<CoderivationAlgebra>& vd, int max_arity) {
  const auto derived = derived_algebra(vd);
  const auto L = vd.L;
  LInftyAlg<int> alg;
  alg.name = vd.name + " on W";
  alg.provenance = "derived";
  alg.degree = [L](const int& i) { return L->space().deg.at(i); };
  alg.bracket = [derived, L](const std::vector<Vec>& args) -> Vec {
    std::vector<Coder> as;
    for (const Vec& w : args) as.push_back(alpha(*L, w));
    return alpha_value(derived(as));
  };
  alg.max_arity = max_arity;
  alg.mc_bound = derived.mc_bound;
  alg.gauge_bound = derived.gauge_bound;
  return alg;
}

// ---------------------------------------------------------------- presentations

LinfPresentation::LinfPresentation(GradedSpace W, int max_arity) : space(std::move(W)) {
  for (int k = 0; k <= max_arity; ++k) at(k);
}

MultilinearMap& LinfPresentation::at(int k, Symmetry sym) {
  while (static_cast<int>(m.size()) <= k) {
    const int a = static_cast<int>(m.size());
    m.emplace_back(a, space, space, 1, sym);
  }
  return m[k];
}

const MultilinearMap* LinfPresentation::find(int k) const {
  if (k < 0 || k >= static_cast<int>(m.size()) || m[k].is_zero()) return nullptr;
  return &m[k];
}

Coder encode_linf(const LinfPresentation& p, const CoderivationAlgebra& L, int offset) {
  const GradedSpace& w = L.space();
  for (int i = 0; i < p.space.dim(); ++i)
    if (offset + i >= w.dim() || w.deg[offset + i] != p.space.deg[i])
      throw std::invalid_argument("encode_linf: space does not embed at the offset");
  Coder q;
  for (int k = 1; k <= p.max_arity(); ++k) {
    if (p.m[k].is_zero()) continue;
    if (p.m[k].degree() != 1) throw std::invalid_argument("encode_linf: brackets must have degree 1");
    const MultilinearMap t = L.flavor() == Flavor::symmetric ? p.m[k].as_symmetric() : p.m[k].expanded();
    for (const auto& [in, val] : t.table()) {
      Word s = in;
      for (int& l : s) l += offset;
      for (const auto& [o, c] : val) q += L.key(s, offset + o, c);
    }
  }
  return q;
}

LinfPresentation decode_linf(const Coder& q, const CoderivationAlgebra& L, int max_arity) {
  LinfPresentation p(L.space(), max_arity);
  const Symmetry sym = L.flavor() == Flavor::symmetric ? Symmetry::graded_symmetric : Symmetry::none;
  for (int k = 0; k <= max_arity; ++k) p.m[k] = MultilinearMap(k, L.space(), L.space(), 1, sym);
  for (const auto& [k, c] : q) {
    const int a = static_cast<int>(k.in.size());
    if (a > max_arity) throw std::invalid_argument("decode_linf: arity beyond the requested maximum");
    p.m[a].add(k.in, k.out, c);
  }
  return p;
}

// ---------------------------------------------------------------- recovery

namespace {

std::vector<MultilinearMap> taylor_tables(const Coder& q, const GradedSpace& w, int max_arity, Symmetry sym) {
  std::vector<MultilinearMap> t;
  for (int n = 0; n <= max_arity; ++n) t.emplace_back(n, w, w, 1, sym);
  for (const auto& [k, c] : q) {
    const int a = static_cast<int>(k.in.size());
    if (a <= max_arity) t[a].add(k.in, k.out, c);
  }
  return t;
}

void require_homological(const CoderivationAlgebra& L, const Coder& theta, const char* what) {
  if (!bracket(L, theta, theta).is_zero()) throw std::invalid_argument(std::string(what) + ": [theta, theta] != 0");
}

int arity_window(const CoderivationAlgebra& L, int max_arity) {
  if (max_arity < 0) return L.cutoff();
  if (max_arity > L.cutoff())
    throw CutoffOverflow("arity " + std::to_string(max_arity) + " needs a cutoff of at least " +
                         std::to_string(max_arity));
  return max_arity;
}

}  // namespace

KeyliRecovery keyli_recover(const CoderivationAlgebra& reduced, const Coder& theta, int max_arity) {
  if (reduced.flavor() != Flavor::symmetric || reduced.unital())
    throw std::invalid_argument("keyli_recover: needs the reduced symmetric coalgebra");
  const int top = arity_window(reduced, max_arity);
  require_homological(reduced, theta, "keyli_recover");
  const GradedSpace& w = reduced.space();
  KeyliRecovery r{alpha_algebra(alpha_vdata(reduced, theta), top), {}, {}, {}};
  r.original = taylor_tables(theta, w, top, Symmetry::graded_symmetric);
  for (int n = 0; n <= top; ++n) {
    r.recovered.emplace_back(n, w, w, 1, Symmetry::graded_symmetric);
    if (n == 0) continue;
    for (const Word& word : reduced.words(n)) {
      std::vector<Vec> args;
      for (int l : word) args.emplace_back(l);
      for (const auto& [o, c] : r.alg(args)) r.recovered[n].add(word, o, c);
    }
    if (!(r.recovered[n] == r.original[n])) r.mismatched.push_back(n);
  }
  return r;
}

VData<CoderivationAlgebra> pair_vdata(const GradedSpace& W, int cutoff) {
  const CoderivationAlgebra reduced(W, Flavor::symmetric, false, cutoff, Overflow::quotient);
  VData<CoderivationAlgebra> vd = alpha_vdata(reduced, Coder());
  vd.name = "structure and point";
  vd.in_L = [](const CKey& k) { return !k.in.empty(); };
  return vd;
}

LinComb<BigKey<CKey>> pair_residual(const VData<CoderivationAlgebra>& vd, const Coder& theta, const Vec& phi) {
  const Coder jt = embed_J(*vd.L, theta);
  return mc_residual(big_algebra(vd), lift_L(jt) + lift_a(alpha(*vd.L, phi)));
}

// ---------------------------------------------------------------- morphisms

CoderivationAlgebra linf_space(const GradedSpace& u, const GradedSpace& v, int cutoff) {
  std::vector<std::string> labels;
  for (int i = 0; i < u.dim(); ++i) labels.push_back("u" + std::to_string(i + 1));
  for (int i = 0; i < v.dim(); ++i) labels.push_back("v" + std::to_string(i + 1));
  GradedSpace w = u.direct_sum(v, "U+V");
  w.label = labels;
  return CoderivationAlgebra(w, Flavor::symmetric, false, cutoff, Overflow::quotient);
}

Coder encode_lmap(const std::vector<MultilinearMap>& phi, const CoderivationAlgebra& L, int dim_u) {
  Coder r;
  for (size_t n = 0; n < phi.size(); ++n) {
    const MultilinearMap& f = phi[n];
    if (f.is_zero()) continue;
    if (n == 0) throw std::invalid_argument("encode_lmap: arity-0 component");
    if (f.degree() != 0) throw std::invalid_argument("encode_lmap: components must have degree 0");
    const MultilinearMap t = f.as_symmetric();
    for (const auto& [in, val] : t.table())
      for (const auto& [o, c] : val) r += L.key(in, dim_u + o, c);
  }
  return r;
}

VData<CoderivationAlgebra> linf_vdata(const LinfPresentation& u, const LinfPresentation& v, int cutoff) {
  if (u.max_arity() > cutoff || v.max_arity() > cutoff) {
    for (const auto* p : {&u, &v})
      for (int k = cutoff + 1; k <= p->max_arity(); ++k)
        if (!p->m[k].is_zero()) throw CutoffOverflow("linf_vdata: bracket arity beyond the cutoff");
  }
  const int du = u.space.dim();
  VData<CoderivationAlgebra> vd;
  vd.name = "L-infinity pair";
  vd.L = std::make_shared<const CoderivationAlgebra>(linf_space(u.space, v.space, cutoff));
  const Coder mu = encode_linf(u, *vd.L, 0), nu = encode_linf(v, *vd.L, du);
  require_homological(*vd.L, mu, "linf_vdata (source)");
  require_homological(*vd.L, nu, "linf_vdata (target)");
  vd.in_a = [du](const CKey& k) {
    return k.out >= du && std::all_of(k.in.begin(), k.in.end(), [du](int l) { return l < du; });
  };
  vd.weight = [du](const CKey& k) {
    const int nu_in = static_cast<int>(std::count_if(k.in.begin(), k.in.end(), [du](int l) { return l < du; }));
    return nu_in - (k.out < du ? 1 : 0);
  };
  vd.w_max = cutoff;
  vd.win_lo = -1;
  vd.win_hi = 1;
  vd.delta = mu + nu;
  return vd;
}

LinfMorphismResidual linf_morphism_residual(const LinfPresentation& u, const LinfPresentation& v,
                                            const std::vector<MultilinearMap>& phi, int cutoff) {
  for (size_t n = 0; n < phi.size(); ++n) {
    if (phi[n].is_zero()) continue;
    if (static_cast<int>(n) > cutoff) throw CutoffOverflow("linf_morphism_residual: Phi arity beyond the cutoff");
    if (phi[n].degree() != 0) throw std::invalid_argument("linf_morphism_residual: Phi must have degree 0");
    require_same_space(phi[n].source(), u.space, "linf_morphism_residual");
    require_same_space(phi[n].target(), v.space, "linf_morphism_residual");
  }
  const VData<CoderivationAlgebra> vd = linf_vdata(u, v, cutoff);
  const CoderivationAlgebra& L = *vd.L;
  const int du = u.space.dim();
  auto phi_n = [&](int n) -> const MultilinearMap* {
    return n < static_cast<int>(phi.size()) && !phi[n].is_zero() ? &phi[n] : nullptr;
  };

  LinfMorphismResidual r;
  const CoderivationAlgebra su(u.space, Flavor::symmetric, false, cutoff, Overflow::quotient);
  for (int s = 1; s <= cutoff; ++s) {
    for (const Word& w : su.words(s)) {
      std::vector<int> degs(s);
      for (int i = 0; i < s; ++i) degs[i] = u.space.deg[w[i]];
      Vec lhs, rhs;
      // Phi_{|J|+1}(mu_{|I|}(U_I) U_J)
      for (int k = 1; k <= s; ++k) {
        const MultilinearMap* mu = u.find(k);
        const MultilinearMap* f = phi_n(s - k + 1);
        if (!mu || !f) continue;
        for (const Perm& p : unshuffles(k, s - k)) {
          Word wi, wj{0};
          for (int i = 0; i < k; ++i) wi.push_back(w[p[i]]);
          for (int i = k; i < s; ++i) wj.push_back(w[p[i]]);
          const Scalar sign(koszul_sign(p, degs));
          for (const auto& [o, c] : mu->eval(wi)) {
            wj[0] = o;
            lhs.add_scaled(f->eval(wj), sign * c);
          }
        }
      }
      // 1/n! nu_n(Phi(U_I1) ... Phi(U_In)) over ordered partitions into nonempty blocks
      for (int n = 1; n <= s; ++n) {
        const MultilinearMap* nu = v.find(n);
        if (!nu) continue;
        std::vector<int> block(s, 0);
        Vec acc;
        while (true) {
          std::vector<Word> parts(n);
          Perm perm;
          for (int b = 0; b < n; ++b)
            for (int i = 0; i < s; ++i)
              if (block[i] == b) {
                parts[b].push_back(w[i]);
                perm.push_back(i);
              }
          bool ok = true;
          std::vector<Vec> args;
          for (int b = 0; b < n && ok; ++b) {
            const MultilinearMap* f = phi_n(static_cast<int>(parts[b].size()));
            ok = f != nullptr;
            if (ok) args.push_back(f->eval(parts[b]));
            ok = ok && !args.back().is_zero();
          }
          if (ok) acc.add_scaled(nu->eval(args), Scalar(koszul_sign(perm, degs)));
          int i = s - 1;
          while (i >= 0 && ++block[i] == n) block[i--] = 0;
          if (i < 0) break;
        }
        rhs.add_scaled(acc, Scalar(Rational(1) / factorial(n)));
      }
      lhs -= rhs;
      for (const auto& [eta, c] : lhs) r.direct += L.key(w, du + eta, c);
    }
  }
  r.derived = mc_residual(derived_algebra(vd), encode_lmap(phi, L, du));
  r.agree = r.derived == -r.direct;
  return r;
}

// ---------------------------------------------------------------- A-infinity

Symmetrized symmetrize_ainf(const CoderivationAlgebra& reduced_tensor, const Coder& theta, int max_arity) {
  if (reduced_tensor.flavor() != Flavor::tensor || reduced_tensor.unital())
    throw std::invalid_argument("symmetrize_ainf: needs the reduced tensor coalgebra");
  const int top = arity_window(reduced_tensor, max_arity);
  require_homological(reduced_tensor, theta, "symmetrize_ainf");
  const GradedSpace& w = reduced_tensor.space();
  VData<CoderivationAlgebra> vd = alpha_vdata(reduced_tensor, theta);
  vd.name = "alpha (tensor)";
  Symmetrized r{alpha_algebra(vd, top), {}};
  for (int n = 0; n <= top; ++n) {
    r.m.emplace_back(n, w, w, 1, Symmetry::graded_symmetric);
    if (n == 0) continue;
    for (const Word& word : reduced_tensor.words(n)) {
      auto [s, sorted] = canonical_order(word, w.deg);
      if (s == 0 || sorted != word) continue;
      std::vector<Vec> args;
      for (int l : word) args.emplace_back(l);
      for (const auto& [o, c] : r.alg(args)) r.m[n].add(word, o, c);
    }
  }
  return r;
}

// ---------------------------------------------------------------- fixtures

std::vector<NamedLinf> linf_examples() {
  std::vector<NamedLinf> out;
  {  // d(e1) = e2 - e3
    LinfPresentation p(GradedSpace("W", {0, 1, 1}));
    p.at(1).add({0}, 1, Scalar(1));
    p.at(1).add({0}, 2, Scalar(-1));
    out.push_back({"complex", p});
  }
  {  // abelian DGLA with d(e1) = e2, shifted
    LinfPresentation p(GradedSpace("W", {-1, 0}));
    p.at(1).add({0}, 1, Scalar(1));
    out.push_back({"abelian-dgla", p});
  }
  {  // sl2 shifted: [H, E] = 2E, [H, F] = -2F, [E, F] = H
    const GradedSpace g("sl2", {0, 0, 0}, {"H", "E", "F"});
    MultilinearMap br(2, g, g, 0);
    auto set = [&](int i, int j, int k, int c) {
      br.add({i, j}, k, Scalar(c));
      br.add({j, i}, k, Scalar(-c));
    };
    set(0, 1, 1, 2);
    set(0, 2, 2, -2);
    set(1, 2, 0, 1);
    LinfPresentation p(g.shift(1));
    p.at(2) = suspend_coeff(br).as_symmetric();
    out.push_back({"sl2", p});
  }
  {  // DGLA on a (degree 0), b (degree 1) with d a = b and [a, b] = b, shifted
    const GradedSpace g("g", {0, 1}, {"a", "b"});
    MultilinearMap d(1, g, g, 1), br(2, g, g, 0);
    d.add({0}, 1, Scalar(1));
    br.add({0, 1}, 1, Scalar(1));
    br.add({1, 0}, 1, Scalar(-1));
    LinfPresentation p(g.shift(1));
    p.at(1) = suspend_coeff(d).as_symmetric();
    p.at(2) = suspend_coeff(br).as_symmetric();
    out.push_back({"dgla", p});
  }
  {  // m2(x, x) = y and m3(x, x, x) = y
    LinfPresentation p(GradedSpace("W", {0, 1}, {"x", "y"}));
    p.at(2).add({0, 0}, 1, Scalar(1));
    p.at(3).add({0, 0, 0}, 1, Scalar(1));
    out.push_back({"ternary-nilpotent", p});
  }
  return out;
}

}  // namespace dbr
