#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dbr/graded_lie.hpp"
#include "dbr/vector_fields.hpp"

namespace dbr {

using BBElem = LinComb<Mono>;

// Functions on T*[2]W[1] for W with n coordinates. Generators xi_a
// (bit a, the coordinates) and theta_a (bit n + a, the momenta) all have
// degree 1. The Poisson bracket has degree -2 and is shifted to degree 0
// on C[2], so a monomial of length k has degree k - 2.
class BigBracketAlgebra {
 public:
  using Key = Mono;

  // min_xi / min_theta restrict the spanning sets to C_{(>=i, >=j)}
  BigBracketAlgebra(int n, std::vector<std::string> labels = {}, int min_xi = 0, int min_theta = 0);

  int dim() const { return n_; }
  Mono xi(int a) const { return Mono(1) << a; }
  Mono theta(int a) const { return Mono(1) << (n_ + a); }
  std::pair<int, int> bidegree(Mono m) const;

  int degree(const Key& k) const { return mono_len(k) - 2; }
  LinComb<Key> bracket_keys(const Key& f, const Key& g) const;
  std::vector<Key> spanning_set(int deg) const;
  std::string key_str(const Key& k) const;

  // c * (product of the listed generators in the given order); generator
  // a < n is xi_a, n + a is theta_a
  BBElem monomial(const std::vector<int>& gens, const Scalar& c = Scalar(1)) const;
  // x_I d/dx_j  |->  xi_I theta_j
  BBElem embed(const VField& x) const;
  // inverse of embed on bidegree (k, 1) elements; throws otherwise
  VField to_field(const BBElem& f) const;
  // swaps xi_a and theta_a, reordering to normal form
  BBElem dualize(const BBElem& f) const;

 private:
  int n_;
  std::vector<std::string> labels_;
  int min_xi_, min_theta_;
};

}  // namespace dbr
