#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "dbr/coderivation.hpp"
#include "dbr/linfty.hpp"
#include "dbr/matrix.hpp"
#include "dbr/vdata.hpp"

namespace dbr {

// Non-unital algebra on e_1..e_n with e_i e_j = m_ij^k e_k. Associativity
// is checked, never assumed.
struct AssocPresentation {
  int n = 0;
  std::vector<std::string> labels;
  std::vector<Scalar> m;  // m[(i n + j) n + k]

  AssocPresentation() = default;
  explicit AssocPresentation(int dim, std::vector<std::string> labels = {});

  static AssocPresentation zero(int dim);
  static AssocPresentation dual_numbers();  // basis 1, x with x^2 = 0
  static AssocPresentation matrices2();     // matrix units E11, E12, E21, E22
  static AssocPresentation upper2();        // E11, E12, E22

  const Scalar& operator()(int i, int j, int k) const { return m[(i * n + j) * n + k]; }
  Scalar& operator()(int i, int j, int k) { return m[(i * n + j) * n + k]; }
  void set_product(int i, int j, const Vec& v);
  Vec product(const Vec& x, const Vec& y) const;
  bool operator==(const AssocPresentation& o) const { return n == o.n && m == o.m; }
};

// Coderivations of the reduced tensor coalgebra on (U + V)[1], every basis
// vector in degree -1, words up to length `cutoff`. Letters 0..du-1 are U.
// Longer composites are dropped, which is exact since word length never
// decreases under composition.
CoderivationAlgebra assoc_space(int dim_u, int dim_v, int cutoff);

// the product as the quadratic Taylor coefficient on letters offset..
Coder encode_product(const AssocPresentation& p, const CoderivationAlgebra& space, int offset = 0);
AssocPresentation decode_product(const Coder& q, int n, int offset = 0);

struct AssocEncoding {
  Coder q;
  Coder square;                              // [Q, Q]
  bool associative = true;
  std::optional<std::array<int, 3>> witness;  // a basis triple where [Q, Q] is nonzero
};
AssocEncoding encode_assoc(const AssocPresentation& p);

// phi: U -> V as the linear coderivation u_l -> A(eta, l) v_eta
Coder encode_amap(const Matrix& phi, const CoderivationAlgebra& space, int dim_u);

// nu(phi (x) phi) - phi o mu as a bilinear map U[1]^2 -> V[1]
Coder assoc_morphism_residual(const AssocPresentation& u, const AssocPresentation& v, const Matrix& phi,
                              const CoderivationAlgebra& space);

struct AssocTriple {
  AssocPresentation u, v;
  Matrix phi;
  int dim_u() const { return u.n; }
  int dim_v() const { return v.n; }
};

using CoderData = VData<CoderivationAlgebra>;
using CoderBigKey = BigKey<CKey>;
using CoderBigElem = LinComb<CoderBigKey>;

// key lives in L'= L(U[1]) + L(V[1])
bool in_L_prime(const CKey& k, int dim_u);

// (Coder(T(U + V)[1]), L(T U[1], V[1]), P, mu + nu), filtered by the number
// of U inputs minus one when the output is in U. Throws std::invalid_argument
// on non-associative input.
CoderData assoc_vdata(const AssocPresentation& u, const AssocPresentation& v, int cutoff = 4);
// twisted at a morphism; throws NotMaurerCartan otherwise
CoderData assoc_twisted(const AssocTriple& t, int cutoff = 4);

// Closed formulas for the brackets on L'[1] + a twisted at a morphism,
// built from explicit insertions. Results are truncated at `cutoff` like
// the coderivation algebra.
LInftyAlg<CoderBigKey> markl_brackets(const AssocTriple& t, int cutoff = 4);

}  // namespace dbr
