#include "dbr/multilinear.hpp"

#include <stdexcept>

namespace dbr {

MultilinearMap::MultilinearMap(int arity, GradedSpace src, GradedSpace tgt, int degree, Symmetry sym)
    : arity_(arity), degree_(degree), src_(std::move(src)), tgt_(std::move(tgt)), sym_(sym) {
  if (arity < 0) throw std::invalid_argument("negative arity");
}

void MultilinearMap::add(const Word& in, int out, const Scalar& c) {
  if (static_cast<int>(in.size()) != arity_) throw std::invalid_argument("arity mismatch");
  if (out < 0 || out >= tgt_.dim()) throw std::out_of_range("output index");
  int d = degree_;
  for (int i : in) {
    if (i < 0 || i >= src_.dim()) throw std::out_of_range("input index");
    d += src_.deg[i];
  }
  if (d != tgt_.deg[out])
    throw std::invalid_argument("degree mismatch: entry would have degree " + std::to_string(d) +
                                " into a basis vector of degree " + std::to_string(tgt_.deg[out]));
  Word key = in;
  Scalar coef = c;
  if (sym_ == Symmetry::graded_symmetric) {
    auto [s, sorted] = canonical_order(in, src_.deg);
    if (s == 0) return;  // odd repeat: the value is forced to vanish
    key = std::move(sorted);
    coef *= Scalar(s);
  }
  Vec& v = table_[key];
  v.add(out, coef);
  if (v.is_zero()) table_.erase(key);
}

Vec MultilinearMap::eval(const Word& in) const {
  if (static_cast<int>(in.size()) != arity_) throw std::invalid_argument("arity mismatch");
  if (sym_ == Symmetry::none) {
    auto it = table_.find(in);
    return it == table_.end() ? Vec() : it->second;
  }
  auto [s, sorted] = canonical_order(in, src_.deg);
  if (s == 0) return Vec();
  auto it = table_.find(sorted);
  return it == table_.end() ? Vec() : Scalar(s) * it->second;
}

Vec MultilinearMap::eval(const std::vector<Vec>& args) const {
  if (static_cast<int>(args.size()) != arity_) throw std::invalid_argument("arity mismatch");
  Vec out;
  Word w(arity_);
  // expand multilinearly over the basis terms of each argument
  std::vector<Vec::const_iterator> it(arity_);
  for (int i = 0; i < arity_; ++i) {
    if (args[i].is_zero()) return out;
    it[i] = args[i].begin();
  }
  while (true) {
    Scalar c(1);
    for (int i = 0; i < arity_; ++i) {
      w[i] = it[i]->first;
      c *= it[i]->second;
    }
    out.add_scaled(eval(w), c);
    int k = arity_ - 1;
    while (k >= 0) {
      if (++it[k] != args[k].end()) break;
      it[k] = args[k].begin();
      --k;
    }
    if (k < 0) break;
  }
  return out;
}

MultilinearMap MultilinearMap::expanded() const {
  MultilinearMap r(arity_, src_, tgt_, degree_, Symmetry::none);
  if (sym_ == Symmetry::none) {
    r.table_ = table_;
    return r;
  }
  for (const auto& [w, v] : table_) {
    for (const Perm& p : all_permutations(arity_)) {
      Word pw(arity_);
      for (int k = 0; k < arity_; ++k) pw[k] = w[p[k]];
      if (r.table_.count(pw)) continue;  // repeated letters give repeated orderings
      r.table_[pw] = eval(pw);
    }
  }
  return r;
}

bool MultilinearMap::check_graded_symmetric() const {
  MultilinearMap full = expanded();
  for (const auto& [w, v] : full.table_) {
    std::vector<int> degs(arity_);
    for (int k = 0; k < arity_; ++k) degs[k] = src_.deg[w[k]];
    for (const Perm& p : all_permutations(arity_)) {
      Word pw(arity_);
      for (int k = 0; k < arity_; ++k) pw[k] = w[p[k]];
      if (full.eval(pw) != Scalar(koszul_sign(p, degs)) * v) return false;
    }
  }
  return true;
}

MultilinearMap MultilinearMap::as_symmetric() const {
  if (sym_ == Symmetry::graded_symmetric) return *this;
  if (!check_graded_symmetric()) throw std::invalid_argument("map is not graded symmetric");
  MultilinearMap r(arity_, src_, tgt_, degree_, Symmetry::graded_symmetric);
  for (const auto& [w, v] : table_) {
    auto [s, sorted] = canonical_order(w, src_.deg);
    if (s != 0 && sorted == w) r.table_[w] = v;
  }
  return r;
}

bool operator==(const MultilinearMap& a, const MultilinearMap& b) {
  if (a.arity_ != b.arity_ || a.degree_ != b.degree_ || !(a.src_ == b.src_) || !(a.tgt_ == b.tgt_))
    return false;
  if (a.sym_ == b.sym_) return a.table_ == b.table_;
  return a.expanded().table_ == b.expanded().table_;
}

int decalage_sign(const std::vector<int>& v_degrees) {
  const int n = static_cast<int>(v_degrees.size());
  int e = 0;
  for (int i = 0; i + 1 < n; ++i) e += (n - 1 - i) * v_degrees[i];
  return (e & 1) ? -1 : 1;
}

MultilinearMap decalage(const MultilinearMap& f, Decalage dir) {
  const int n = f.arity();
  const int k = dir == Decalage::to_shifted ? 1 : -1;
  GradedSpace src = f.source().shift(k), tgt = f.target().shift(k);
  MultilinearMap g(n, src, tgt, f.degree() + k * (n - 1), Symmetry::none);
  // the sign is always computed from degrees in the unshifted space
  const GradedSpace& v_space = dir == Decalage::to_shifted ? f.source() : src;
  MultilinearMap full = f.expanded();
  for (const auto& [w, val] : full.table()) {
    std::vector<int> degs(n);
    for (int i = 0; i < n; ++i) degs[i] = v_space.deg[w[i]];
    const Scalar s(decalage_sign(degs));
    for (const auto& [o, c] : val) g.add(w, o, s * c);
  }
  return g;
}

}  // namespace dbr
