#pragma once

#include <map>
#include <string>
#include <vector>

#include "dbr/graded_space.hpp"
#include "dbr/lincomb.hpp"
#include "dbr/permutation.hpp"

namespace dbr {

using Vec = LinComb<int>;  // element of a graded space in basis coordinates

enum class Symmetry { none, graded_symmetric };

// Sparse n-linear map src^{(x)n} -> tgt of fixed intrinsic degree.
// With graded_symmetric set, only sorted input words are stored and every
// other ordering is reached through its Koszul sign.
class MultilinearMap {
 public:
  MultilinearMap() = default;
  MultilinearMap(int arity, GradedSpace src, GradedSpace tgt, int degree,
                 Symmetry sym = Symmetry::none);

  int arity() const { return arity_; }
  int degree() const { return degree_; }
  Symmetry symmetry() const { return sym_; }
  const GradedSpace& source() const { return src_; }
  const GradedSpace& target() const { return tgt_; }
  const std::map<Word, Vec>& table() const { return table_; }

  // adds c * e_out to the value on `in`; throws on a degree mismatch
  void add(const Word& in, int out, const Scalar& c);
  Vec eval(const Word& in) const;
  Vec eval(const std::vector<Vec>& args) const;

  bool is_zero() const { return table_.empty(); }
  // full table with every input ordering written out, symmetry flag dropped
  MultilinearMap expanded() const;
  // true when the table is graded symmetric under all input permutations
  bool check_graded_symmetric() const;
  // symmetric-storage copy; requires check_graded_symmetric()
  MultilinearMap as_symmetric() const;

  friend bool operator==(const MultilinearMap& a, const MultilinearMap& b);

 private:
  int arity_ = 0;
  int degree_ = 0;
  GradedSpace src_, tgt_;
  Symmetry sym_ = Symmetry::none;
  std::map<Word, Vec> table_;
};

enum class Decalage { to_shifted, from_shifted };

// Transports an n-ary map on V to V[1] (or back). Each entry picks up
// (-1)^{sum_{i=1}^{n-1} (n-i)|v_i|} with |v_i| the degrees in V; the
// intrinsic degree moves by n - 1.
MultilinearMap decalage(const MultilinearMap& f, Decalage dir);

// Sign exponent parity for one input word, degrees taken in V.
int decalage_sign(const std::vector<int>& v_degrees);

}  // namespace dbr
