#include "dbr/big_bracket.hpp"

#include <stdexcept>

namespace dbr {

BigBracketAlgebra::BigBracketAlgebra(int n, std::vector<std::string> labels, int min_xi, int min_theta)
    : n_(n), labels_(std::move(labels)), min_xi_(min_xi), min_theta_(min_theta) {
  if (n < 0 || n > 31) throw std::invalid_argument("big bracket: dimension out of range");
  if (labels_.empty())
    for (int i = 0; i < n; ++i) labels_.push_back("x" + std::to_string(i + 1));
  if (static_cast<int>(labels_.size()) != n) throw std::invalid_argument("label count mismatch");
}

std::pair<int, int> BigBracketAlgebra::bidegree(Mono m) const {
  const Mono lo = (Mono(1) << n_) - 1;
  return {mono_len(m & lo), mono_len(m >> n_)};
}

LinComb<Mono> BigBracketAlgebra::bracket_keys(const Key& f, const Key& g) const {
  // {f, g} = sum_a (f <-d/dxi_a)(d/dtheta_a-> g) + (f <-d/dtheta_a)(d/dxi_a-> g)
  LinComb<Key> r;
  for (int a = 0; a < n_; ++a) {
    for (int pass = 0; pass < 2; ++pass) {
      const Mono bf = pass == 0 ? xi(a) : theta(a);
      const Mono bg = pass == 0 ? theta(a) : xi(a);
      if (!(f & bf) || !(g & bg)) continue;
      const Mono fr = f & ~bf, gr = g & ~bg;
      const int s = mono_mul_sign(fr, gr);
      if (s == 0) continue;
      r.add(fr | gr, Scalar(s * right_deriv_sign(f, std::countr_zero(bf)) *
                            left_deriv_sign(g, std::countr_zero(bg))));
    }
  }
  return r;
}

std::vector<Mono> BigBracketAlgebra::spanning_set(int deg) const {
  std::vector<Key> out;
  for (Mono m : masks_of_size(2 * n_, deg + 2)) {
    auto [i, j] = bidegree(m);
    if (i >= min_xi_ && j >= min_theta_) out.push_back(m);
  }
  return out;
}

std::string BigBracketAlgebra::key_str(const Key& k) const {
  if (k == 0) return "1";
  std::string s;
  for (int b : mono_indices(k)) s += b < n_ ? labels_[b] : "d" + labels_[b - n_];
  return s;
}

BBElem BigBracketAlgebra::monomial(const std::vector<int>& gens, const Scalar& c) const {
  for (int g : gens)
    if (g < 0 || g >= 2 * n_) throw std::out_of_range("generator index");
  auto [s, m] = mono_from(gens);
  BBElem r;
  if (s) r.add(m, Scalar(s) * c);
  return r;
}

BBElem BigBracketAlgebra::embed(const VField& x) const {
  BBElem r;
  for (const auto& [k, c] : x) {
    if (k.target >= n_ || (k.mask >> n_)) throw std::out_of_range("field outside the ambient space");
    r.add(k.mask | theta(k.target), c);
  }
  return r;
}

VField BigBracketAlgebra::to_field(const BBElem& f) const {
  VField r;
  const Mono lo = (Mono(1) << n_) - 1;
  for (const auto& [m, c] : f) {
    if (bidegree(m).second != 1) throw std::invalid_argument("not a vector field");
    r.add({m & lo, std::countr_zero(m >> n_)}, c);
  }
  return r;
}

BBElem BigBracketAlgebra::dualize(const BBElem& f) const {
  BBElem r;
  const Mono lo = (Mono(1) << n_) - 1;
  for (const auto& [m, c] : f) {
    const Mono a = m & lo, b = m >> n_;
    // theta_A xi_B = (-1)^{|A||B|} xi_B theta_A
    const int s = ((mono_len(a) * mono_len(b)) & 1) ? -1 : 1;
    r.add(b | (a << n_), Scalar(s) * c);
  }
  return r;
}

}  // namespace dbr
