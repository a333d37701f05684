#pragma once

#include <array>
#include <string>
#include <vector>

#include "dbr/linfty.hpp"
#include "dbr/matrix.hpp"
#include "dbr/vdata.hpp"
#include "dbr/vector_fields.hpp"

namespace dbr {

// Lie algebra on a basis e_1..e_n given by constants c_ij^k.
struct LiePresentation {
  int n = 0;
  std::vector<std::string> labels;
  std::vector<Scalar> c;  // c[(i n + j) n + k]

  LiePresentation() = default;
  explicit LiePresentation(int dim, std::vector<std::string> labels = {});

  static LiePresentation abelian(int dim);
  static LiePresentation aff2();        // [e1, e2] = e1
  static LiePresentation sl2();         // basis H, E, F
  static LiePresentation heisenberg();  // [e1, e2] = e3

  const Scalar& operator()(int i, int j, int k) const { return c[(i * n + j) * n + k]; }
  Scalar& operator()(int i, int j, int k) { return c[(i * n + j) * n + k]; }
  // sets [e_i, e_j] = v and [e_j, e_i] = -v
  void set_bracket(int i, int j, const Vec& v);
  Vec bracket(const Vec& x, const Vec& y) const;
  // throws std::invalid_argument unless c_ij^k = -c_ji^k
  void validate() const;
  bool operator==(const LiePresentation& o) const { return n == o.n && c == o.c; }
};

// Q = -1/2 c_ij^k u_i u_j d/du_k on coordinates offset..offset+n-1
VField encode_lie(const LiePresentation& p, int offset = 0);
// inverse of encode_lie; throws if q has terms outside the quadratic block
LiePresentation decode_lie(const VField& q, int n, int offset = 0);

struct JacobiResult {
  bool ok = true;
  std::array<int, 3> triple{-1, -1, -1};  // basis triple where [Q, Q] is nonzero
  VField square;                          // [Q, Q]
};
JacobiResult jacobi(const LiePresentation& p);

// phi: U -> V as a (dim V x dim U) matrix, encoded as -A(eta, l) u_l d/dv_eta
VField encode_map(const Matrix& a, int u_offset, int v_offset);
Matrix decode_map(const VField& phi, int dim_u, int dim_v, int u_offset, int v_offset);

// (bracket on U, bracket on V, phi), the data of a Lie algebra morphism
struct LieTriple {
  LiePresentation u, v;
  Matrix phi;
  int dim_u() const { return u.n; }
  int dim_v() const { return v.n; }
};

// vector fields on (U x V)[1]: coordinates u_1..u_m then v_1..v_n
VectorFieldAlgebra pair_algebra(int dim_u, int dim_v);

// [Q_U, Phi] + 1/2 [[Q_V, Phi], Phi]; zero iff phi is a morphism
VField lie_morphism_residual(const VField& q_u, const VField& q_v, const VField& phi, int dim_u, int dim_v);
VField lie_morphism_residual(const LieTriple& m);

using VFData = VData<VectorFieldAlgebra>;
using PairKey = BigKey<VFKey>;
using PairElem = LinComb<PairKey>;

// (chi((U x V)[1]), C(U[1]) (x) V[1], P, Q_U + Q_V), filtered by
// #u + #d/dv - 1
VFData lie_pair_vdata(const LiePresentation& u, const LiePresentation& v);
// the same quadruple with Delta = 0
VFData lie_moduli_vdata(int dim_u, int dim_v);
// pair V-data twisted at the morphism; throws NotMaurerCartan otherwise
VFData lie_pair_twisted(const LieTriple& m);

// Nijenhuis-Richardson DGLA on a: d = [Q_U + [Q_V, Phi], .],
// {a, b} = [[Q_V, a], b]; evaluated directly, window <= 3
LInftyAlg<VFKey> nr_algebra(const LieTriple& m);

// L' = chi(U[1]) + chi(V[1]) inside chi((U x V)[1])
bool in_L_prime(const VFKey& k, int dim_u);

// Brackets on L'[1] + a from the closed formulas of the simultaneous
// deformation problem at the morphism m. Keys agree with big_algebra.
LInftyAlg<PairKey> simultaneous_algebra(const LieTriple& m);

// the three blocks of the cubic Maurer-Cartan system at m for a
// deformation (Qt_U, Qt_V, Phit)
struct CubicResidual {
  VField jac_u;  // [Q_U, Qt_U] + 1/2 [Qt_U, Qt_U]
  VField jac_v;  // same on V
  VField mixed;  // the morphism block
  bool zero() const { return jac_u.is_zero() && jac_v.is_zero() && mixed.is_zero(); }
};
CubicResidual cubic_residual(const LieTriple& m, const VField& qt_u, const VField& qt_v, const VField& phit);

// ---------------------------------------------------------------- subalgebras

// g = U + V: the columns of `basis` are the new basis vectors written in
// the old basis; the first dim_u of them span U.
struct SubalgebraSplit {
  LiePresentation g;
  Matrix basis;
  int dim_u = 0;

  static SubalgebraSplit partition(const LiePresentation& g, const std::vector<int>& u_indices);
  int dim_v() const { return g.n - dim_u; }
  // structure constants of g in the adapted basis
  LiePresentation adapted() const;
};

// (chi(g[1]), C(U[1]) (x) V[1], P, Q_g); curved unless U is a subalgebra
VFData subalgebra_vdata(const SubalgebraSplit& s);
// curved Maurer-Cartan residual at phi: U -> V (adapted coordinates)
VField graph_residual(const SubalgebraSplit& s, const Matrix& phi);
bool graph_is_subalgebra(const SubalgebraSplit& s, const Matrix& phi);

// The other problem: deform the inclusion map U -> g rather than its
// image. Different inclusions with the same image are distinct Maurer-Cartan
// points here but the same point of the subspace problem.
VFData inclusion_vdata(const LiePresentation& u, const LiePresentation& g, const Matrix& inclusion);

// ---------------------------------------------------------------- GL action

// g_*[x, y] = g [g^{-1} x, g^{-1} y]
LiePresentation pushforward(const LiePresentation& p, const Matrix& g);
// (g_*[,]_U, h_*[,]_V, h phi g^{-1}); throws NotMaurerCartan on a non-morphism
LieTriple gl_action(const Matrix& g, const Matrix& h, const LieTriple& m);

// (Q_U + Q_V)[1] + Phi in L[1] + a of lie_moduli_vdata
PairElem triple_point(const LieTriple& m);
LieTriple point_triple(const PairElem& x, int dim_u, int dim_v);

// gauge parameter z = (z_U[1], z_V[1], 0) with
// d/dt gl_action(e^{tG}, e^{tH}, m) = Y^z at m
PairElem gl_generator(const Matrix& gen_u, const Matrix& gen_v);

// Y^z at m by the closed formula
// [z_U, m_U][1] + [z_V, m_V][1] + ([z_U + z_V, m_a] + [[m_V, z_a], m_a])
PairElem gauge_closed_form(const PairElem& z, const PairElem& m, int dim_u, int dim_v);

}  // namespace dbr
