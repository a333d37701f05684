#pragma once

#include <array>
#include <string>
#include <vector>

#include "dbr/coderivation.hpp"
#include "dbr/linfty.hpp"
#include "dbr/vdata.hpp"

namespace dbr {

// Symmetric or tensor coalgebra on W truncated at word length `cutoff`,
// with or without the unit 1 (the empty word).
class TruncatedCoalgebra {
 public:
  using Triple = std::array<Word, 3>;

  TruncatedCoalgebra(GradedSpace W, Flavor flavor, bool unital, int cutoff);

  const GradedSpace& space() const { return coder_.space(); }
  Flavor flavor() const { return coder_.flavor(); }
  bool unital() const { return coder_.unital(); }
  int cutoff() const { return coder_.cutoff(); }

  std::vector<Word> words(int n) const { return coder_.words(n); }
  LinComb<WordPair> coproduct(const Word& w) const { return coder_.coproduct(w); }
  // (Delta (x) 1) Delta w - (1 (x) Delta) Delta w
  LinComb<Triple> coassociativity_defect(const Word& w) const;
  // coderivations of this coalgebra; unital ones need strict truncation
  const CoderivationAlgebra& coderivations() const { return coder_; }

 private:
  CoderivationAlgebra coder_;
};

// the unital algebra on the same space, flavor and cutoff, strict truncation
CoderivationAlgebra unital_partner(const CoderivationAlgebra& reduced);

// alpha_w: the coderivation of SW (or TW) with alpha_w(1) = w and no other
// Taylor coefficient. Throws unless L is unital and w is homogeneous.
Coder alpha(const CoderivationAlgebra& L, const Vec& w);
// alpha_w(1), i.e. the arity-0 part read back as a vector
Vec alpha_value(const Coder& x);

// the same Taylor coefficients viewed in the unital algebra; throws on an
// arity-0 entry
Coder embed_J(const CoderivationAlgebra& unital, const Coder& theta);

// (Coder(SW), {alpha_w}, tau -> alpha_{tau(1)}, J theta); the tensor flavor
// gives the same quadruple on TW
VData<CoderivationAlgebra> alpha_vdata(const CoderivationAlgebra& reduced, const Coder& theta);
// the derived brackets of alpha_vdata read on W through w -> alpha_w
LInftyAlg<int> alpha_algebra(const VData<CoderivationAlgebra>& vd, int max_arity);

// tables m_1..m_n of an L-infinity[1] algebra, or of an A-infinity[1]
// algebra when the maps are not graded symmetric; m[k] is k-ary, m[0] unused
struct LinfPresentation {
  GradedSpace space;
  std::vector<MultilinearMap> m;

  LinfPresentation() = default;
  explicit LinfPresentation(GradedSpace W, int max_arity = 0);

  int max_arity() const { return static_cast<int>(m.size()) - 1; }
  // k-ary entry, growing the table as needed
  MultilinearMap& at(int k, Symmetry sym = Symmetry::graded_symmetric);
  const MultilinearMap* find(int k) const;
};

// Taylor coefficients as a coderivation on letters offset..
Coder encode_linf(const LinfPresentation& p, const CoderivationAlgebra& L, int offset = 0);
LinfPresentation decode_linf(const Coder& q, const CoderivationAlgebra& L, int max_arity);

struct KeyliRecovery {
  LInftyAlg<int> alg;
  std::vector<MultilinearMap> recovered;  // m_k read off the derived brackets
  std::vector<MultilinearMap> original;   // Taylor coefficients of theta
  std::vector<int> mismatched;            // arities where the two differ
  bool exact() const { return mismatched.empty(); }
};
// Derived brackets of alpha_vdata against the Taylor coefficients of theta
// for arities 1..max_arity (default: the cutoff). Throws
// std::invalid_argument unless [theta, theta] = 0 and CutoffOverflow when
// max_arity is beyond the cutoff.
KeyliRecovery keyli_recover(const CoderivationAlgebra& reduced, const Coder& theta, int max_arity = -1);

// The pair problem for structures on W: L' = {tau : tau(1) = 0} inside the
// unital algebra, a = {alpha_w}, Delta = 0.
VData<CoderivationAlgebra> pair_vdata(const GradedSpace& W, int cutoff);
// MC residual of (J theta[1], phi) in the big algebra of pair_vdata
LinComb<BigKey<CKey>> pair_residual(const VData<CoderivationAlgebra>& vd, const Coder& theta, const Vec& phi);

// ---------------------------------------------------------------- morphisms

// reduced symmetric coderivations of (U + V), letters of U first
CoderivationAlgebra linf_space(const GradedSpace& u, const GradedSpace& v, int cutoff);

// Phi = sum Phi_n with Phi_n: S^n U -> V of degree 0, as keys of linf_space
Coder encode_lmap(const std::vector<MultilinearMap>& phi, const CoderivationAlgebra& L, int dim_u);

// (Coder(S(U + V)), L(SU, V), P, mu + nu), filtered by the number of U
// inputs minus one when the output is in U. Throws std::invalid_argument
// unless both structures square to zero within the cutoff.
VData<CoderivationAlgebra> linf_vdata(const LinfPresentation& u, const LinfPresentation& v, int cutoff);

struct LinfMorphismResidual {
  // sum Phi(mu(U_I) U_J) - sum_n 1/n! sum nu_n(Phi(U_I1) ... Phi(U_In))
  // on every basis word of S^s U, s <= cutoff, keyed like linf_space
  Coder direct;
  // Maurer-Cartan residual of Phi for the derived brackets of linf_vdata
  Coder derived;
  bool agree = false;  // derived == -direct
  bool zero() const { return direct.is_zero(); }
};
// Throws CutoffOverflow when an input arity exceeds the cutoff and
// std::invalid_argument on a Phi_n of nonzero degree.
LinfMorphismResidual linf_morphism_residual(const LinfPresentation& u, const LinfPresentation& v,
                                            const std::vector<MultilinearMap>& phi, int cutoff);

// ---------------------------------------------------------------- A-infinity

struct Symmetrized {
  LInftyAlg<int> alg;
  std::vector<MultilinearMap> m;  // graded symmetric tables, m[0] unused
};
// L-infinity[1] brackets of an A-infinity[1] structure on TW through the
// derived brackets of alpha_vdata in the tensor flavor. Throws
// std::invalid_argument unless [theta, theta] = 0.
Symmetrized symmetrize_ainf(const CoderivationAlgebra& reduced_tensor, const Coder& theta, int max_arity = -1);

// small L-infinity[1] algebras used as fixtures by the tests and the CLI
struct NamedLinf {
  std::string name;
  LinfPresentation p;
};
std::vector<NamedLinf> linf_examples();

}  // namespace dbr
