#include "dbr/vector_fields.hpp"

#include <stdexcept>

namespace dbr {

std::vector<Mono> masks_of_size(int n, int k) {
  std::vector<Mono> out;
  if (k < 0 || k > n) return out;
  if (n > 63) throw std::invalid_argument("too many generators");
  if (k == 0) return {0};
  // Gosper's hack: next mask with the same popcount
  const Mono limit = Mono(1) << n;
  for (Mono m = (Mono(1) << k) - 1; m < limit;) {
    out.push_back(m);
    const Mono c = m & (~m + 1), r = m + c;
    m = (((r ^ m) >> 2) / c) | r;
  }
  return out;
}

VectorFieldAlgebra::VectorFieldAlgebra(int n, std::vector<std::string> labels)
    : n_(n), labels_(std::move(labels)) {
  if (n < 0 || n > 32) throw std::invalid_argument("vector fields: dimension out of range");
  if (labels_.empty())
    for (int i = 0; i < n; ++i) labels_.push_back("u" + std::to_string(i + 1));
  if (static_cast<int>(labels_.size()) != n) throw std::invalid_argument("label count mismatch");
}

std::pair<int, Mono> vf_act(const VFKey& x, Mono m) {
  const Mono bit = Mono(1) << x.target;
  if (!(m & bit)) return {0, 0};
  const int s1 = left_deriv_sign(m, x.target);
  const Mono rest = m & ~bit;
  const int s2 = mono_mul_sign(x.mask, rest);
  if (s2 == 0) return {0, 0};
  return {s1 * s2, x.mask | rest};
}

LinComb<VFKey> VectorFieldAlgebra::bracket_keys(const Key& x, const Key& y) const {
  // [X, Y] = X(g) d_j - (-1)^{|X||Y|} Y(f) d_i  for X = f d_i, Y = g d_j
  LinComb<Key> r;
  auto [s1, m1] = vf_act(x, y.mask);
  if (s1) r.add({m1, y.target}, Scalar(s1));
  auto [s2, m2] = vf_act(y, x.mask);
  if (s2) {
    const int e = degree(x) * degree(y);
    r.add({m2, x.target}, Scalar((e & 1) ? s2 : -s2));
  }
  return r;
}

std::vector<VFKey> VectorFieldAlgebra::spanning_set(int deg) const {
  std::vector<Key> out;
  for (Mono m : masks_of_size(n_, deg + 1))
    for (int t = 0; t < n_; ++t) out.push_back({m, t});
  return out;
}

std::string VectorFieldAlgebra::key_str(const Key& k) const {
  std::string s;
  for (int i : mono_indices(k.mask)) s += labels_[i];
  return s + "d/d" + labels_[k.target];
}

VField VectorFieldAlgebra::field(const std::vector<int>& mono, int target, const Scalar& c) const {
  for (int i : mono)
    if (i < 0 || i >= n_) throw std::out_of_range("coordinate index");
  if (target < 0 || target >= n_) throw std::out_of_range("coordinate index");
  auto [s, m] = mono_from(mono);
  VField r;
  if (s) r.add({m, target}, Scalar(s) * c);
  return r;
}

Poly VectorFieldAlgebra::apply(const VField& x, const Poly& f) const {
  Poly r;
  for (const auto& [k, c] : x)
    for (const auto& [m, d] : f) {
      auto [s, out] = vf_act(k, m);
      if (s) r.add(out, Scalar(s) * c * d);
    }
  return r;
}

Poly VectorFieldAlgebra::commutator_on(const VField& x, const VField& y, const Poly& f) const {
  Poly r = apply(x, apply(y, f));
  for (const auto& [kx, cx] : x)
    for (const auto& [ky, cy] : y) {
      const int e = degree(kx) * degree(ky);
      VField xk(kx, cx), yk(ky, cy);
      r.add_scaled(apply(yk, apply(xk, f)), Scalar((e & 1) ? 1 : -1));
    }
  return r;
}

}  // namespace dbr
