#include "dbr/bialgebra_deform.hpp"

#include <stdexcept>

namespace dbr {

BialgebraPresentation::BialgebraPresentation(LiePresentation l, LiePresentation d)
    : lie(std::move(l)), dual(std::move(d)) {
  if (lie.n != dual.n) throw std::invalid_argument("bracket and cobracket dimensions differ");
  lie.validate();
  dual.validate();
}

BialgebraPresentation BialgebraPresentation::trivial(const LiePresentation& l) {
  return BialgebraPresentation(l, LiePresentation(l.n));
}

BigBracketAlgebra bialgebra_space(int dim_u, int dim_v, int min_xi, int min_theta) {
  std::vector<std::string> labels;
  for (int i = 0; i < dim_u; ++i) labels.push_back("u" + std::to_string(i + 1));
  for (int i = 0; i < dim_v; ++i) labels.push_back("v" + std::to_string(i + 1));
  return BigBracketAlgebra(dim_u + dim_v, labels, min_xi, min_theta);
}

BialgebraEncoding encode_bialgebra(const BialgebraPresentation& b, const BigBracketAlgebra& space, int offset) {
  if (b.lie.n != b.dual.n) throw std::invalid_argument("bracket and cobracket dimensions differ");
  BialgebraEncoding e;
  e.q = space.embed(encode_lie(b.lie, offset));
  e.q_dual = space.dualize(space.embed(encode_lie(b.dual, offset)));
  const BBElem s = e.q + e.q_dual;
  e.residual = bracket(space, s, s);
  return e;
}

BialgebraEncoding encode_bialgebra(const BialgebraPresentation& b) {
  return encode_bialgebra(b, bialgebra_space(b.n()), 0);
}

BBElem encode_bimap(const Matrix& phi, const BigBracketAlgebra& space, int dim_u) {
  return space.embed(encode_map(phi, 0, dim_u));
}

BialgebraMorphismResidual bialgebra_morphism_residual(const BialgebraPresentation& u,
                                                      const BialgebraPresentation& v, const Matrix& phi) {
  const int du = u.n(), dv = v.n();
  if (phi.rows() != dv || phi.cols() != du) throw std::invalid_argument("map has the wrong shape");
  const BigBracketAlgebra space = bialgebra_space(du, dv);
  const BialgebraEncoding eu = encode_bialgebra(u, space, 0), ev = encode_bialgebra(v, space, du);
  const BBElem p = encode_bimap(phi, space, du), mp = -p;
  const Scalar half(Rational(1, 2));
  auto br = [&](const BBElem& x, const BBElem& y) { return bracket(space, x, y); };
  BialgebraMorphismResidual r;
  r.lie = br(eu.q, p);
  r.lie.add_scaled(br(br(ev.q, p), p), half);
  r.colie = br(ev.q_dual, mp);
  r.colie.add_scaled(br(br(eu.q_dual, mp), mp), half);
  return r;
}

BBElem bialgebra_delta(const BialgebraPresentation& u, const BialgebraPresentation& v) {
  const BigBracketAlgebra space = bialgebra_space(u.n(), v.n());
  const BialgebraEncoding eu = encode_bialgebra(u, space, 0), ev = encode_bialgebra(v, space, u.n());
  return eu.q + eu.q_dual + ev.q - ev.q_dual;
}

BBData bialgebra_vdata(const BialgebraPresentation& u, const BialgebraPresentation& v) {
  if (!encode_bialgebra(u).compatible()) throw std::invalid_argument("source is not a Lie bialgebra");
  if (!encode_bialgebra(v).compatible()) throw std::invalid_argument("target is not a Lie bialgebra");
  const int du = u.n(), dv = v.n(), n = du + dv;
  BBData vd;
  vd.name = "bialgebra pair";
  vd.L = std::make_shared<const BigBracketAlgebra>(bialgebra_space(du, dv, 1, 1));
  const Mono xi_u = (Mono(1) << du) - 1;                  // xi of U
  const Mono theta_v = ((Mono(1) << dv) - 1) << (n + du);  // theta of V
  vd.in_L = [n](const Mono& k) {
    const Mono lo = (Mono(1) << n) - 1;
    return (k & lo) != 0 && (k >> n) != 0;
  };
  vd.in_a = [xi_u, theta_v](const Mono& k) {
    return (k & ~(xi_u | theta_v)) == 0 && (k & xi_u) != 0 && (k & theta_v) != 0;
  };
  vd.weight = [xi_u, theta_v](const Mono& k) { return mono_len(k & (xi_u | theta_v)) - 1; };
  vd.w_max = n - 1;
  vd.win_lo = 0;
  vd.win_hi = 2;
  vd.delta = bialgebra_delta(u, v);
  return vd;
}

}  // namespace dbr
