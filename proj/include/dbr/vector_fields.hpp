#pragma once

#include <compare>
#include <string>
#include <vector>

#include "dbr/graded_lie.hpp"
#include "dbr/grassmann.hpp"

namespace dbr {

// u_mask d/du_target on a shifted space W[1]; every coordinate has degree 1.
struct VFKey {
  Mono mask = 0;
  int target = 0;
  auto operator<=>(const VFKey&) const = default;
};

using VField = LinComb<VFKey>;
using Poly = LinComb<Mono>;  // polynomial in the odd coordinates

class VectorFieldAlgebra {
 public:
  using Key = VFKey;

  explicit VectorFieldAlgebra(int n, std::vector<std::string> labels = {});

  int dim() const { return n_; }
  const std::vector<std::string>& labels() const { return labels_; }
  int degree(const Key& k) const { return mono_len(k.mask) - 1; }
  LinComb<Key> bracket_keys(const Key& x, const Key& y) const;
  std::vector<Key> spanning_set(int deg) const;
  std::string key_str(const Key& k) const;

  // c * u_{i1} ... u_{ik} d/du_target for an arbitrary index order
  VField field(const std::vector<int>& mono, int target, const Scalar& c = Scalar(1)) const;

  // action of a vector field as a derivation on functions
  Poly apply(const VField& x, const Poly& f) const;
  // [x, y] as the graded commutator of derivations, evaluated on a function
  Poly commutator_on(const VField& x, const VField& y, const Poly& f) const;

 private:
  int n_;
  std::vector<std::string> labels_;
};

// X(u_m) for X = u_mask d/du_target, as (sign, mask); sign 0 means zero
std::pair<int, Mono> vf_act(const VFKey& x, Mono m);

}  // namespace dbr
