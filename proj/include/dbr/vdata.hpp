#pragma once

#include <algorithm>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dbr/graded_lie.hpp"
#include "dbr/linfty.hpp"

namespace dbr {

struct NotInA : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NotMaurerCartan : std::domain_error {
  using std::domain_error::domain_error;
};
struct SeriesDivergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Check {
  std::string name;
  bool passed = true;
  std::string witness;
};

struct Report {
  std::vector<Check> checks;
  bool flat = true;
  std::string curvature;  // printed P(Delta) when nonzero

  void add(std::string name, bool ok, std::string witness = "") {
    checks.push_back({std::move(name), ok, std::move(witness)});
  }
  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
  }
  const Check* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

// Bookkeeping for the exponential series of every twist built from a V-data.
struct TwistStats {
  long evaluations = 0;
  int max_order = 0;   // largest power of ad_Phi that contributed
  int max_bound = 0;   // largest predicted bound seen
  int min_slack = std::numeric_limits<int>::max();  // min over evaluations of bound - order
  std::mutex mu;

  void record(int order, int bound) {
    std::lock_guard<std::mutex> lock(mu);
    ++evaluations;
    max_order = std::max(max_order, order);
    max_bound = std::max(max_bound, bound);
    min_slack = std::min(min_slack, bound - order);
  }
};

// (L, a, P, Delta). The abelian subalgebra a is spanned by the keys
// accepted by in_a; P defaults to the key filter and is replaced by
// P o e^{[., Phi]} after twisting.
template <GradedLie A>
struct VData {
  using Key = typename A::Key;
  using Elem = LinComb<Key>;

  std::string name;
  std::shared_ptr<const A> L;
  std::function<bool(const Key&)> in_a;
  std::function<bool(const Key&)> in_L;  // restricts L to a subalgebra; empty = all keys
  std::function<Elem(const Elem&)> P;    // empty = filter by in_a
  Elem delta;
  std::function<int(const Key&)> weight;  // empty = unfiltered
  int w_max = -1;                         // no key has weight above this
  int ad_nilpotency = -1;                 // twist series bound when unfiltered
  int bracket_bound = -1;                 // explicit vanishing bound for derived brackets
  bool curved = false;
  int win_lo = -1, win_hi = 2;  // degree window for spanning-set checks
  Elem phi;                     // twisting element, zero when untwisted
  std::shared_ptr<TwistStats> stats = std::make_shared<TwistStats>();

  Elem project(const Elem& x) const { return P ? P(x) : x.filter(in_a); }
  bool in_L_key(const Key& k) const { return !in_L || in_L(k); }
  bool in_a_elem(const Elem& x) const {
    return std::all_of(x.begin(), x.end(), [&](const auto& t) { return in_a(t.first); });
  }
  std::optional<int> min_weight(const Elem& x) const {
    std::optional<int> w;
    for (const auto& [k, c] : x) w = std::min(w.value_or(std::numeric_limits<int>::max()), weight(k));
    return w;
  }
  std::vector<Key> span(int d) const {
    std::vector<Key> out;
    for (const Key& k : L->spanning_set(d))
      if (in_L_key(k)) out.push_back(k);
    return out;
  }
  std::vector<Key> a_span(int d) const {
    std::vector<Key> out;
    for (const Key& k : L->spanning_set(d))
      if (in_a(k)) out.push_back(k);
    return out;
  }
  // derived brackets of degree-0 arguments vanish beyond this arity
  int mc_bound() const {
    if (bracket_bound >= 0) return bracket_bound;
    return weight ? w_max + 1 : -1;
  }
  // derived m_{n+1}(z, phi^n) with |z| = -1 vanishes beyond this arity
  int gauge_bound() const {
    if (bracket_bound >= 0) return bracket_bound;
    return weight ? w_max + 3 : -1;
  }
  bool is_flat() const { return project(delta).is_zero(); }
};

// ---------------------------------------------------------------- derived

template <GradedLie A>
LInftyAlg<typename A::Key> derived_algebra(const VData<A>& vd) {
  using Elem = typename VData<A>::Elem;
  LInftyAlg<typename A::Key> alg;
  alg.name = vd.name + " derived";
  alg.provenance = "derived";
  auto L = vd.L;
  alg.degree = [L](const typename A::Key& k) { return L->degree(k); };
  alg.bracket = [vd](const std::vector<Elem>& args) -> Elem {
    Elem x = vd.delta;
    for (const Elem& a : args) {
      if (!vd.in_a_elem(a)) throw NotInA(vd.name + ": derived bracket argument outside a");
      if (x.is_zero()) return {};
      x = bracket(*vd.L, x, a);
    }
    return vd.project(x);
  };
  alg.curved = vd.curved || !vd.is_flat();
  alg.mc_bound = vd.mc_bound();
  alg.gauge_bound = vd.gauge_bound();
  return alg;
}

// P_Phi = P o e^{[., Phi]}; the series stops at the first vanishing term and
// must do so within the weight-predicted bound.
template <GradedLie A>
VData<A> twist(const VData<A>& vd, const typename VData<A>::Elem& phi, bool check_mc = true) {
  using Key = typename A::Key;
  using Elem = typename VData<A>::Elem;
  if (!vd.in_a_elem(phi)) throw NotInA(vd.name + ": twisting element outside a");
  if (auto d = degree_of(*vd.L, phi); !phi.is_zero() && (!d || *d != 0))
    throw std::invalid_argument(vd.name + ": twisting element must have degree 0");
  if (check_mc && !mc_residual(derived_algebra(vd), phi).is_zero())
    throw NotMaurerCartan(vd.name + ": twisting element is not Maurer-Cartan");
  if (!vd.weight && vd.ad_nilpotency < 0)
    throw UnverifiableTruncation(vd.name + ": twist needs a filtration or a nilpotency bound");
  VData<A> tw = vd;
  tw.phi = vd.phi + phi;
  if (phi.is_zero()) return tw;
  struct Memo {
    std::mutex mu;
    std::map<Key, Elem> cache;
  };
  auto memo = std::make_shared<Memo>();
  const VData<A> base = vd;
  auto stats = vd.stats;
  auto on_key = [base, phi, memo, stats](const Key& k) -> Elem {
    {
      std::lock_guard<std::mutex> lock(memo->mu);
      auto it = memo->cache.find(k);
      if (it != memo->cache.end()) return it->second;
    }
    const int bound = base.weight ? base.w_max - base.weight(k) : base.ad_nilpotency;
    Elem term(k, Scalar(1)), sum = term;
    int order = 0;
    for (int j = 1;; ++j) {
      term = bracket(*base.L, term, phi);
      if (term.is_zero()) break;
      if (j > bound)
        throw SeriesDivergence(base.name + ": exponential series exceeds its predicted length " +
                               std::to_string(bound));
      term *= Scalar(Rational(1, j));
      sum += term;
      order = j;
    }
    stats->record(order, std::max(bound, 0));
    Elem r = base.project(sum);
    std::lock_guard<std::mutex> lock(memo->mu);
    memo->cache.emplace(k, r);
    return r;
  };
  tw.P = [on_key](const Elem& x) {
    Elem r;
    for (const auto& [k, c] : x) r.add_scaled(on_key(k), c);
    return r;
  };
  tw.name = vd.name + " twisted";
  return tw;
}

// ---------------------------------------------------------------- big algebra

// Keys of L[1] + a: tag 0 is x[1] for x in L, tag 1 is an element of a.
template <class K>
using BigKey = std::pair<int, K>;

template <class K>
LinComb<BigKey<K>> lift_L(const LinComb<K>& x) {
  LinComb<BigKey<K>> r;
  for (const auto& [k, c] : x) r.add({0, k}, c);
  return r;
}
template <class K>
LinComb<BigKey<K>> lift_a(const LinComb<K>& x) {
  LinComb<BigKey<K>> r;
  for (const auto& [k, c] : x) r.add({1, k}, c);
  return r;
}
template <class K>
LinComb<K> part(const LinComb<BigKey<K>>& x, int tag) {
  LinComb<K> r;
  for (const auto& [k, c] : x)
    if (k.first == tag) r.add(k.second, c);
  return r;
}

// One homogeneous single-tag piece of a big-algebra argument (tag 0 = L[1]).
template <class Key>
struct BigPiece {
  int tag, deg;
  LinComb<Key> x;
};

// Multilinear extension of a bracket given on pieces. `pure(ps, n_l)` sees
// the n_l L[1] pieces first, then the a pieces; the Koszul sign of that
// reordering is applied here. Patterns with more than two L[1] pieces vanish.
template <class Key, class Pure>
std::function<LinComb<BigKey<Key>>(const std::vector<LinComb<BigKey<Key>>>&)> piecewise_bracket(
    std::function<int(const BigKey<Key>&)> degree, Pure pure) {
  using Elem = LinComb<Key>;
  using BElem = LinComb<BigKey<Key>>;
  return [degree, pure](const std::vector<BElem>& args) -> BElem {
    const int n = static_cast<int>(args.size());
    std::vector<std::vector<BigPiece<Key>>> split(n);
    for (int i = 0; i < n; ++i) {
      std::map<std::pair<int, int>, Elem> parts;
      for (const auto& [k, c] : args[i]) parts[{k.first, degree(k)}].add(k.second, c);
      for (auto& [td, x] : parts) split[i].push_back({td.first, td.second, std::move(x)});
      if (split[i].empty()) return {};
    }
    BElem total;
    std::vector<int> choice(n, 0);
    while (true) {
      std::vector<int> order, degs(n);
      for (int i = 0; i < n; ++i) {
        degs[i] = split[i][choice[i]].deg;
        if (split[i][choice[i]].tag == 0) order.push_back(i);
      }
      const int n_l = static_cast<int>(order.size());
      if (n_l <= 2) {
        for (int i = 0; i < n; ++i)
          if (split[i][choice[i]].tag == 1) order.push_back(i);
        std::vector<BigPiece<Key>> ps;
        for (int i : order) ps.push_back(split[i][choice[i]]);
        total.add_scaled(pure(ps, n_l), Scalar(koszul_sign(order, degs)));
      }
      int i = n - 1;
      while (i >= 0 && ++choice[i] == static_cast<int>(split[i].size())) choice[i--] = 0;
      if (i < 0) break;
    }
    return total;
  };
}

// The L-infinity[1] structure on L[1] + a of a flat V-data:
//   d(x[1], a)             = (-[Delta, x][1], P(x + [Delta, a]))
//   {x[1], y[1]}           = (-1)^{|x|} [x, y][1]
//   {x[1], a1, ..., an}    = P[...[x, a1], ..., an]
//   {a1, ..., an}          = P[...[[Delta, a1], a2], ..., an]
// and every other pattern vanishes.
template <GradedLie A>
LInftyAlg<BigKey<typename A::Key>> big_algebra(const VData<A>& vd) {
  using Key = typename A::Key;
  using Elem = LinComb<Key>;
  using BElem = LinComb<BigKey<Key>>;
  if (!vd.is_flat()) throw std::domain_error(vd.name + ": the big algebra needs flat V-data");
  LInftyAlg<BigKey<Key>> alg;
  alg.name = vd.name + " big";
  alg.provenance = "derived";
  auto L = vd.L;
  alg.degree = [L](const BigKey<Key>& k) { return L->degree(k.second) - (k.first == 0 ? 1 : 0); };

  // bracket on single-tag homogeneous pieces, L[1] pieces first
  auto pure = [vd](const std::vector<BigPiece<Key>>& ps, int n_l) -> BElem {
    const int n = static_cast<int>(ps.size());
    const Elem& d = vd.delta;
    if (n_l == 0) {
      if (n == 0) return lift_a(vd.project(d));
      Elem x = d;
      for (const auto& p : ps) {
        if (!vd.in_a_elem(p.x)) throw NotInA(vd.name + ": big bracket argument outside a");
        x = bracket(*vd.L, x, p.x);
        if (x.is_zero()) return {};
      }
      return lift_a(vd.project(x));
    }
    if (n_l == 1) {
      if (n == 1) return lift_L(-bracket(*vd.L, d, ps[0].x)) + lift_a(vd.project(ps[0].x));
      Elem x = ps[0].x;
      for (int i = 1; i < n; ++i) {
        if (!vd.in_a_elem(ps[i].x)) throw NotInA(vd.name + ": big bracket argument outside a");
        x = bracket(*vd.L, x, ps[i].x);
        if (x.is_zero()) return {};
      }
      return lift_a(vd.project(x));
    }
    if (n_l == 2 && n == 2) {
      const int dx = ps[0].deg + 1;  // degree of x in L
      Elem r = bracket(*vd.L, ps[0].x, ps[1].x);
      if (dx & 1) r *= Scalar(-1);
      return lift_L(r);
    }
    return {};
  };

  alg.bracket = piecewise_bracket<Key>(alg.degree, pure);
  alg.curved = false;
  const int b = vd.mc_bound();
  alg.mc_bound = b >= 0 ? b + 1 : -1;
  const int g = vd.gauge_bound();
  alg.gauge_bound = g >= 0 ? g + 1 : -1;
  return alg;
}

// ---------------------------------------------------------------- checks

namespace detail {
template <GradedLie A>
std::string show(const VData<A>& vd, const LinComb<typename A::Key>& x) {
  return to_string(*vd.L, x);
}
}  // namespace detail

template <GradedLie A>
Report validate_vdata(const VData<A>& vd) {
  using Key = typename A::Key;
  using Elem = LinComb<Key>;
  Report rep;
  std::vector<std::pair<int, Key>> keys, a_keys;
  for (int d = vd.win_lo; d <= vd.win_hi; ++d) {
    for (const Key& k : vd.span(d)) keys.push_back({d, k});
    for (const Key& k : vd.a_span(d)) a_keys.push_back({d, k});
  }
  auto show = [&](const Key& k) { return vd.L->key_str(k); };

  {  // P is an idempotent projection onto a
    std::string w;
    for (const auto& [d, k] : keys) {
      const Elem x(k, Scalar(1));
      const Elem p = vd.project(x);
      if (vd.project(p) != p) { w = "P(P(" + show(k) + ")) != P(" + show(k) + ")"; break; }
      if (!vd.in_a_elem(p)) { w = "P(" + show(k) + ") leaves a"; break; }
    }
    for (const auto& [d, k] : a_keys) {
      if (!w.empty()) break;
      if (vd.project(Elem(k, Scalar(1))) != Elem(k, Scalar(1))) w = "P is not the identity on " + show(k);
    }
    rep.add("P idempotent onto a", w.empty(), w);
  }
  {
    std::string w;
    for (size_t i = 0; i < a_keys.size() && w.empty(); ++i)
      for (size_t j = i; j < a_keys.size(); ++j) {
        if (!vd.L->bracket_keys(a_keys[i].second, a_keys[j].second).is_zero()) {
          w = "[" + show(a_keys[i].second) + ", " + show(a_keys[j].second) + "] != 0";
          break;
        }
      }
    rep.add("a abelian", w.empty(), w);
  }
  {  // kernel of P spanned by x - P(x) over the spanning keys
    std::vector<Elem> ker;
    for (const auto& [d, k] : keys) {
      Elem y = Elem(k, Scalar(1)) - vd.project(Elem(k, Scalar(1)));
      if (!y.is_zero()) ker.push_back(std::move(y));
    }
    std::string w;
    for (size_t i = 0; i < ker.size() && w.empty(); ++i)
      for (size_t j = i; j < ker.size(); ++j) {
        const Elem b = bracket(*vd.L, ker[i], ker[j]);
        if (!vd.project(b).is_zero()) {
          w = "P[" + detail::show(vd, ker[i]) + ", " + detail::show(vd, ker[j]) + "] != 0";
          break;
        }
      }
    rep.add("ker P subalgebra", w.empty(), w);
  }
  {
    const auto dd = degree_of(*vd.L, vd.delta);
    rep.add("Delta degree 1", vd.delta.is_zero() || (dd && *dd == 1),
            dd ? "" : "Delta is not homogeneous");
    const Elem sq = bracket(*vd.L, vd.delta, vd.delta);
    rep.add("[Delta, Delta] = 0", sq.is_zero(), sq.is_zero() ? "" : detail::show(vd, sq));
    bool inside = true;
    for (const auto& [k, c] : vd.delta) inside &= vd.in_L_key(k);
    rep.add("Delta in L", inside);
  }
  const Elem pd = vd.project(vd.delta);
  rep.flat = pd.is_zero();
  if (!rep.flat) rep.curvature = detail::show(vd, pd);
  // curvature is allowed only when declared
  rep.add("Delta in ker P", rep.flat || vd.curved, rep.flat ? "" : "P(Delta) = " + rep.curvature);
  return rep;
}

template <GradedLie A>
Report check_filtration(const VData<A>& vd) {
  using Key = typename A::Key;
  using Elem = LinComb<Key>;
  Report rep;
  if (!vd.weight) {
    rep.add("weight supplied", false, "no weight function");
    return rep;
  }
  std::vector<Key> keys;
  for (int d = vd.win_lo; d <= vd.win_hi; ++d)
    for (const Key& k : vd.span(d)) keys.push_back(k);
  auto show = [&](const Key& k) { return vd.L->key_str(k) + " (wt " + std::to_string(vd.weight(k)) + ")"; };
  {
    std::string w;
    for (const Key& k : keys)
      if (vd.weight(k) < -1 || vd.weight(k) > vd.w_max) { w = show(k); break; }
    rep.add("weights in [-1, w_max]", w.empty(), w);
  }
  {
    std::string w;
    for (size_t i = 0; i < keys.size() && w.empty(); ++i)
      for (size_t j = i; j < keys.size(); ++j) {
        const Elem b = vd.L->bracket_keys(keys[i], keys[j]);
        if (b.is_zero()) continue;
        if (*vd.min_weight(b) < vd.weight(keys[i]) + vd.weight(keys[j])) {
          w = "[" + show(keys[i]) + ", " + show(keys[j]) + "] has weight " + std::to_string(*vd.min_weight(b));
          break;
        }
      }
    rep.add("(a) bracket adds weights", w.empty(), w);
  }
  {
    std::string w;
    for (const Key& k : vd.a_span(0))
      if (vd.weight(k) < 1) { w = show(k); break; }
    rep.add("(b) degree-0 part of a has weight >= 1", w.empty(), w);
  }
  {
    std::string w;
    for (const Key& k : keys) {
      const Elem p = vd.project(Elem(k, Scalar(1)));
      if (!p.is_zero() && *vd.min_weight(p) < vd.weight(k)) { w = "P(" + show(k) + ")"; break; }
    }
    rep.add("(c) P does not lower weight", w.empty(), w);
  }
  return rep;
}

// ---------------------------------------------------------------- machine

template <class K>
struct MachineResult {
  bool lhs_delta = false;        // [Delta + Dt, Delta + Dt] = 0
  bool lhs_mc = false;           // Phi + Pt is MC for the deformed derived brackets
  bool rhs = false;              // (Dt[1], Pt) is MC in the twisted big algebra
  LinComb<K> delta_witness;
  LinComb<K> lhs_residual;
  LinComb<BigKey<K>> rhs_residual;
  bool lhs() const { return lhs_delta && lhs_mc; }
  bool agree() const { return lhs() == rhs; }
};

template <GradedLie A>
MachineResult<typename A::Key> thm_machine_check(const VData<A>& vd, const LinComb<typename A::Key>& phi,
                                                 const LinComb<typename A::Key>& dt,
                                                 const LinComb<typename A::Key>& pt) {
  MachineResult<typename A::Key> r;
  VData<A> deformed = vd;
  deformed.delta = vd.delta + dt;
  deformed.curved = true;  // the deformed projection of Delta is not assumed to vanish
  r.delta_witness = bracket(*vd.L, deformed.delta, deformed.delta);
  r.lhs_delta = r.delta_witness.is_zero();
  r.lhs_residual = mc_residual(derived_algebra(deformed), phi + pt);
  r.lhs_mc = r.lhs_residual.is_zero();
  const VData<A> tw = twist(vd, phi);
  r.rhs_residual = mc_residual(big_algebra(tw), lift_L(dt) + lift_a(pt));
  r.rhs = r.rhs_residual.is_zero();
  return r;
}

// With m_1 = 0: the operators A_z = {z, .} satisfy [A_z1, A_z2] = A_{z1, z2}
// (z_i of degree -1). Returns A1 A2 m - A2 A1 m - A_{z1,z2} m.
template <class K>
LinComb<K> d0_morphism_defect(const LInftyAlg<K>& alg, const LinComb<K>& z1, const LinComb<K>& z2,
                              const LinComb<K>& m) {
  LinComb<K> r = alg({z1, alg({z2, m})});
  r -= alg({z2, alg({z1, m})});
  r -= alg({alg({z1, z2}), m});
  return r;
}

}  // namespace dbr
