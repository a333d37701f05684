#pragma once

#include "dbr/big_bracket.hpp"
#include "dbr/lie_deform.hpp"
#include "dbr/vdata.hpp"

namespace dbr {

// Lie bialgebra on U: the bracket of U and the bracket of U*, written in
// the dual basis as [e^j, e^k] = gamma_i^{jk} e^i.
struct BialgebraPresentation {
  LiePresentation lie;
  LiePresentation dual;

  BialgebraPresentation() = default;
  BialgebraPresentation(LiePresentation l, LiePresentation d);
  // zero cobracket
  static BialgebraPresentation trivial(const LiePresentation& l);
  int n() const { return lie.n; }
};

// functions on T*[2](U x V)[1]: xi_a are the coordinates u, v and theta_a
// the momenta d/du, d/dv
BigBracketAlgebra bialgebra_space(int dim_u, int dim_v = 0, int min_xi = 0, int min_theta = 0);

struct BialgebraEncoding {
  BBElem q;         // bidegree (2,1), the image of the bracket field
  BBElem q_dual;    // bidegree (1,2), the dual bracket moved across xi <-> theta
  BBElem residual;  // {q + q_dual, q + q_dual}
  bool compatible() const { return residual.is_zero(); }
};
// coordinates offset..offset+n-1 inside `space`
BialgebraEncoding encode_bialgebra(const BialgebraPresentation& b, const BigBracketAlgebra& space, int offset = 0);
BialgebraEncoding encode_bialgebra(const BialgebraPresentation& b);

// phi: U -> V as -A(eta, l) xi_{u_l} theta_{v_eta}; -Phi represents phi^*
BBElem encode_bimap(const Matrix& phi, const BigBracketAlgebra& space, int dim_u);

struct BialgebraMorphismResidual {
  BBElem lie;    // {Q_U, Phi} + 1/2 {{Q_V, Phi}, Phi}
  BBElem colie;  // {Q_V*, -Phi} + 1/2 {{Q_U*, -Phi}, -Phi}
  bool zero() const { return lie.is_zero() && colie.is_zero(); }
};
BialgebraMorphismResidual bialgebra_morphism_residual(const BialgebraPresentation& u,
                                                      const BialgebraPresentation& v, const Matrix& phi);

using BBData = VData<BigBracketAlgebra>;

// Q_U + Q_U* + Q_V - Q_V* on the pair space
BBElem bialgebra_delta(const BialgebraPresentation& u, const BialgebraPresentation& v);

// (C_{>=1,>=1}[2], (U* (x) V)-part with at least one of each, P, Delta),
// filtered by #xi_u + #theta_v - 1; throws std::invalid_argument on an
// incompatible presentation
BBData bialgebra_vdata(const BialgebraPresentation& u, const BialgebraPresentation& v);

}  // namespace dbr
