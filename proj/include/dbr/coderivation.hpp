#pragma once

#include <compare>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dbr/graded_lie.hpp"
#include "dbr/multilinear.hpp"

namespace dbr {

enum class Flavor { tensor, symmetric };
// What happens when a composite needs words longer than the cutoff.
// quotient drops those terms, which is exact for reduced coalgebras because
// word length never decreases under composition there.
enum class Overflow { strict, quotient };

struct CutoffOverflow : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One Taylor coefficient entry: basis word `in` goes to basis vector `out`.
// Symmetric flavor keeps `in` sorted.
struct CKey {
  Word in;
  int out = 0;
  auto operator<=>(const CKey&) const = default;
};

using Coder = LinComb<CKey>;
using Words = LinComb<Word>;
using WordPair = std::pair<Word, Word>;

// Coderivations of the tensor or symmetric coalgebra on W, truncated at
// word length `cutoff`, stored through their Taylor coefficients.
class CoderivationAlgebra {
 public:
  using Key = CKey;

  CoderivationAlgebra(GradedSpace W, Flavor flavor, bool unital, int cutoff,
                      Overflow overflow = Overflow::strict);

  const GradedSpace& space() const { return w_; }
  Flavor flavor() const { return flavor_; }
  bool unital() const { return unital_; }
  int cutoff() const { return cutoff_; }
  Overflow overflow() const { return overflow_; }
  int min_arity() const { return unital_ ? 0 : 1; }

  int word_degree(const Word& w) const;
  int degree(const Key& k) const { return w_.deg[k.out] - word_degree(k.in); }
  LinComb<Key> bracket_keys(const Key& x, const Key& y) const;
  std::vector<Key> spanning_set(int deg) const;
  std::string key_str(const Key& k) const;

  // Taylor coefficient of g^1 o f, i.e. g applied after f
  LinComb<Key> compose_keys(const Key& g, const Key& f) const;
  Coder compose(const Coder& g, const Coder& f) const;

  // c * (in -> out) in normal form; respects the overflow policy
  Coder key(const Word& in, int out, const Scalar& c = Scalar(1)) const;
  // basis words of length n (sorted without odd repeats for the symmetric flavor)
  std::vector<Word> words(int n) const;
  // normal form of a word: (sign, word); sign 0 when it vanishes
  std::pair<int, Word> normalize(const Word& w) const;

  // action of the full coderivation on the coalgebra
  Words apply(const Coder& q, const Word& w) const;
  Words apply(const Coder& q, const Words& x) const;
  LinComb<WordPair> coproduct(const Word& w) const;
  // Delta(Q x) - (Q (x) 1 + 1 (x) Q)(Delta x); zero for every coderivation
  LinComb<WordPair> coleibniz_defect(const Coder& q, const Word& w) const;

  // n-th Taylor coefficient as a multilinear map W^n -> W (homogeneous q)
  MultilinearMap coefficient(const Coder& q, int n) const;
  Coder from_coefficient(const MultilinearMap& m) const;
  Coder from_taylor(const std::vector<MultilinearMap>& coeffs) const;

 private:
  GradedSpace w_;
  Flavor flavor_;
  bool unital_;
  int cutoff_;
  Overflow overflow_;
};

// desuspension of a Taylor coefficient on W = V[1] back to V
inline MultilinearMap desuspend_coeff(const MultilinearMap& q) {
  return decalage(q, Decalage::from_shifted);
}
inline MultilinearMap suspend_coeff(const MultilinearMap& m) {
  return decalage(m, Decalage::to_shifted);
}

}  // namespace dbr
