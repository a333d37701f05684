#include "dbr/coderivation.hpp"

#include <algorithm>

namespace dbr {

CoderivationAlgebra::CoderivationAlgebra(GradedSpace W, Flavor flavor, bool unital, int cutoff,
                                         Overflow overflow)
    : w_(std::move(W)), flavor_(flavor), unital_(unital), cutoff_(cutoff), overflow_(overflow) {
  if (cutoff < 1) throw std::invalid_argument("coderivations: cutoff must be at least 1");
  if (unital && overflow == Overflow::quotient)
    throw std::invalid_argument("quotient truncation needs a reduced coalgebra");
}

int CoderivationAlgebra::word_degree(const Word& w) const {
  int d = 0;
  for (int i : w) d += w_.deg[i];
  return d;
}

std::pair<int, Word> CoderivationAlgebra::normalize(const Word& w) const {
  if (flavor_ == Flavor::tensor) return {1, w};
  return canonical_order(w, w_.deg);
}

Coder CoderivationAlgebra::key(const Word& in, int out, const Scalar& c) const {
  if (static_cast<int>(in.size()) < min_arity()) throw std::invalid_argument("arity-0 entry in a reduced coalgebra");
  for (int i : in)
    if (i < 0 || i >= w_.dim()) throw std::out_of_range("basis index");
  if (out < 0 || out >= w_.dim()) throw std::out_of_range("basis index");
  Coder r;
  if (static_cast<int>(in.size()) > cutoff_) {
    if (overflow_ == Overflow::strict)
      throw CutoffOverflow("word length " + std::to_string(in.size()) + " exceeds cutoff " +
                           std::to_string(cutoff_));
    return r;
  }
  auto [s, w] = normalize(in);
  if (s) r.add({w, out}, Scalar(s) * c);
  return r;
}

LinComb<CKey> CoderivationAlgebra::compose_keys(const Key& g, const Key& f) const {
  LinComb<Key> r;
  const int fdeg = degree(f);
  const int n_out = static_cast<int>(g.in.size() + f.in.size()) - 1;
  if (std::find(g.in.begin(), g.in.end(), f.out) == g.in.end()) return r;
  if (n_out > cutoff_) {
    if (overflow_ == Overflow::strict)
      throw CutoffOverflow("composite needs words of length " + std::to_string(n_out) +
                           " beyond cutoff " + std::to_string(cutoff_));
    return r;
  }
  if (flavor_ == Flavor::tensor) {
    int before = 0;  // degree of g.in[0..p)
    for (size_t p = 0; p < g.in.size(); ++p) {
      if (g.in[p] == f.out) {
        Word k(g.in.begin(), g.in.begin() + p);
        k.insert(k.end(), f.in.begin(), f.in.end());
        k.insert(k.end(), g.in.begin() + p + 1, g.in.end());
        r.add({k, g.out}, Scalar(((fdeg * before) & 1) ? -1 : 1));
      }
      before += w_.deg[g.in[p]];
    }
    return r;
  }
  // symmetric: evaluate g^1(f(w_K)) on the sorted word K
  Word k = g.in;
  k.erase(std::find(k.begin(), k.end(), f.out));
  k.insert(k.end(), f.in.begin(), f.in.end());
  std::sort(k.begin(), k.end());
  const int n = static_cast<int>(k.size()), a = static_cast<int>(f.in.size());
  for (size_t i = 0; i + 1 < k.size(); ++i)
    if (k[i] == k[i + 1] && (w_.deg[k[i]] & 1)) return r;
  std::vector<int> degs(n);
  for (int i = 0; i < n; ++i) degs[i] = w_.deg[k[i]];
  int total = 0;
  for (const Perm& p : unshuffles(a, n - a)) {
    Word ka, rest{f.out};
    for (int i = 0; i < a; ++i) ka.push_back(k[p[i]]);
    if (ka != f.in) continue;
    for (int i = a; i < n; ++i) rest.push_back(k[p[i]]);
    auto [s, sorted] = canonical_order(rest, w_.deg);
    if (s == 0 || sorted != g.in) continue;
    total += koszul_sign(p, degs) * s;
  }
  if (total) r.add({k, g.out}, Scalar(total));
  return r;
}

Coder CoderivationAlgebra::compose(const Coder& g, const Coder& f) const {
  Coder r;
  for (const auto& [kg, cg] : g)
    for (const auto& [kf, cf] : f) r.add_scaled(compose_keys(kg, kf), cg * cf);
  return r;
}

LinComb<CKey> CoderivationAlgebra::bracket_keys(const Key& x, const Key& y) const {
  LinComb<Key> r = compose_keys(x, y);
  const int e = degree(x) * degree(y);
  r.add_scaled(compose_keys(y, x), Scalar((e & 1) ? 1 : -1));
  return r;
}

std::vector<Word> CoderivationAlgebra::words(int n) const {
  std::vector<Word> out;
  const int d = w_.dim();
  if (n == 0) return {Word{}};
  if (d == 0) return out;
  Word w(n, 0);
  while (true) {
    bool ok = true;
    if (flavor_ == Flavor::symmetric)
      for (int i = 0; i + 1 < n && ok; ++i)
        ok = w[i] < w[i + 1] || (w[i] == w[i + 1] && !(w_.deg[w[i]] & 1));
    if (ok) out.push_back(w);
    int i = n - 1;
    while (i >= 0 && ++w[i] == d) w[i--] = 0;
    if (i < 0) break;
  }
  return out;
}

std::vector<CKey> CoderivationAlgebra::spanning_set(int deg) const {
  std::vector<Key> out;
  for (int n = min_arity(); n <= cutoff_; ++n)
    for (const Word& w : words(n)) {
      const int wd = word_degree(w);
      for (int o = 0; o < w_.dim(); ++o)
        if (w_.deg[o] - wd == deg) out.push_back({w, o});
    }
  return out;
}

std::string CoderivationAlgebra::key_str(const Key& k) const {
  std::string s = "(";
  for (size_t i = 0; i < k.in.size(); ++i) s += (i ? "," : "") + w_.label[k.in[i]];
  return s + "->" + w_.label[k.out] + ")";
}

Words CoderivationAlgebra::apply(const Coder& q, const Word& word) const {
  Words r;
  auto [s0, w] = normalize(word);
  if (s0 == 0) return r;
  if (s0 < 0) return -apply(q, w);
  const int n = static_cast<int>(w.size());
  for (const auto& [k, c] : q) {
    const int a = static_cast<int>(k.in.size());
    if (a > n) continue;
    const int kd = degree(k);
    if (flavor_ == Flavor::tensor) {
      int before = 0;
      for (int p = 0; p + a <= n; ++p) {
        if (std::equal(k.in.begin(), k.in.end(), w.begin() + p)) {
          Word o(w.begin(), w.begin() + p);
          o.push_back(k.out);
          o.insert(o.end(), w.begin() + p + a, w.end());
          r.add(o, ((kd * before) & 1) ? -c : c);
        }
        if (p < n) before += w_.deg[w[p]];
      }
      continue;
    }
    // w is sorted, so every sub-word taken in position order is sorted too
    std::vector<int> degs(n);
    for (int i = 0; i < n; ++i) degs[i] = w_.deg[w[i]];
    for (const Perm& p : unshuffles(a, n - a)) {
      Word wa, rest{k.out};
      for (int i = 0; i < a; ++i) wa.push_back(w[p[i]]);
      if (wa != k.in) continue;
      for (int i = a; i < n; ++i) rest.push_back(w[p[i]]);
      auto [s, sorted] = canonical_order(rest, w_.deg);
      if (s == 0) continue;
      r.add(sorted, Scalar(koszul_sign(p, degs) * s) * c);
    }
  }
  return r;
}

Words CoderivationAlgebra::apply(const Coder& q, const Words& x) const {
  Words r;
  for (const auto& [w, c] : x) r.add_scaled(apply(q, w), c);
  return r;
}

LinComb<WordPair> CoderivationAlgebra::coproduct(const Word& w) const {
  LinComb<WordPair> r;
  const int n = static_cast<int>(w.size());
  const int lo = unital_ ? 0 : 1, hi = unital_ ? n : n - 1;
  if (flavor_ == Flavor::tensor) {
    for (int k = lo; k <= hi; ++k)
      r.add({Word(w.begin(), w.begin() + k), Word(w.begin() + k, w.end())}, Scalar(1));
    return r;
  }
  std::vector<int> degs(n);
  for (int i = 0; i < n; ++i) degs[i] = w_.deg[w[i]];
  for (int k = lo; k <= hi; ++k)
    for (const Perm& p : unshuffles(k, n - k)) {
      Word a, b;
      for (int i = 0; i < k; ++i) a.push_back(w[p[i]]);
      for (int i = k; i < n; ++i) b.push_back(w[p[i]]);
      r.add({a, b}, Scalar(koszul_sign(p, degs)));
    }
  return r;
}

LinComb<WordPair> CoderivationAlgebra::coleibniz_defect(const Coder& q, const Word& w) const {
  LinComb<WordPair> r;
  for (const auto& [x, c] : apply(q, w)) r.add_scaled(coproduct(x), c);
  for (const auto& [pr, c] : coproduct(w)) {
    for (const auto& [a, ca] : apply(q, pr.first)) r.add({a, pr.second}, -c * ca);
    const int da = word_degree(pr.first);
    for (const auto& [kq, cq] : q) {
      const int s = ((degree(kq) * da) & 1) ? 1 : -1;
      for (const auto& [b, cb] : apply(Coder(kq, cq), pr.second)) r.add({pr.first, b}, Scalar(s) * c * cb);
    }
  }
  return r;
}

MultilinearMap CoderivationAlgebra::coefficient(const Coder& q, int n) const {
  std::optional<int> d = degree_of(*this, q);
  if (!d && !q.is_zero()) throw std::invalid_argument("coefficient of an inhomogeneous coderivation");
  MultilinearMap m(n, w_, w_, d.value_or(0),
                   flavor_ == Flavor::symmetric ? Symmetry::graded_symmetric : Symmetry::none);
  for (const auto& [k, c] : q)
    if (static_cast<int>(k.in.size()) == n) m.add(k.in, k.out, c);
  return m;
}

Coder CoderivationAlgebra::from_coefficient(const MultilinearMap& m) const {
  if (!(m.source() == w_) || !(m.target() == w_)) throw std::invalid_argument("coefficient on the wrong space");
  Coder r;
  if (flavor_ == Flavor::symmetric) {
    const MultilinearMap s = m.as_symmetric();
    for (const auto& [in, v] : s.table())
      for (const auto& [o, c] : v) r += key(in, o, c);
    return r;
  }
  const MultilinearMap full = m.expanded();
  for (const auto& [in, v] : full.table())
    for (const auto& [o, c] : v) r += key(in, o, c);
  return r;
}

Coder CoderivationAlgebra::from_taylor(const std::vector<MultilinearMap>& coeffs) const {
  Coder r;
  std::optional<int> deg;
  for (const auto& m : coeffs) {
    if (m.arity() < min_arity() || m.arity() > cutoff_)
      throw std::invalid_argument("Taylor coefficient arity " + std::to_string(m.arity()) + " out of range");
    if (deg && *deg != m.degree()) throw std::invalid_argument("Taylor coefficients of different degrees");
    deg = m.degree();
    r += from_coefficient(m);
  }
  return r;
}

}  // namespace dbr
