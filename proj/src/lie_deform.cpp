#include "dbr/lie_deform.hpp"

#include <stdexcept>

namespace dbr {

namespace {

Mono low_mask(int k) { return k >= 64 ? ~Mono(0) : (Mono(1) << k) - 1; }

VField lie_bracket(const VectorFieldAlgebra& alg, const VField& x, const VField& y) { return bracket(alg, x, y); }

// split an element of L' into its chi(U[1]) and chi(V[1]) parts
std::pair<VField, VField> split_uv(const VField& x, int du) {
  VField xu, xv;
  for (const auto& [k, c] : x) {
    if (!in_L_prime(k, du)) throw std::invalid_argument("element outside chi(U[1]) + chi(V[1])");
    (k.target < du ? xu : xv).add(k, c);
  }
  return {xu, xv};
}

Vec column(const Matrix& a, int j) {
  Vec v;
  for (int i = 0; i < a.rows(); ++i) v.add(i, a(i, j));
  return v;
}

Vec apply_matrix(const Matrix& a, const Vec& x) {
  Vec r;
  for (const auto& [j, c] : x)
    for (int i = 0; i < a.rows(); ++i) r.add(i, a(i, j) * c);
  return r;
}

}  // namespace

// ---------------------------------------------------------------- presentations

LiePresentation::LiePresentation(int dim, std::vector<std::string> names)
    : n(dim), labels(std::move(names)), c(static_cast<size_t>(dim) * dim * dim) {
  if (dim < 0) throw std::invalid_argument("negative dimension");
  if (labels.empty())
    for (int i = 0; i < dim; ++i) labels.push_back("e" + std::to_string(i + 1));
  if (static_cast<int>(labels.size()) != dim) throw std::invalid_argument("label count mismatch");
}

LiePresentation LiePresentation::abelian(int dim) { return LiePresentation(dim); }

LiePresentation LiePresentation::aff2() {
  LiePresentation p(2);
  p.set_bracket(0, 1, Vec(0));
  return p;
}

LiePresentation LiePresentation::sl2() {
  LiePresentation p(3, {"H", "E", "F"});
  p.set_bracket(0, 1, Vec(1, Scalar(2)));
  p.set_bracket(0, 2, Vec(2, Scalar(-2)));
  p.set_bracket(1, 2, Vec(0));
  return p;
}

LiePresentation LiePresentation::heisenberg() {
  LiePresentation p(3);
  p.set_bracket(0, 1, Vec(2));
  return p;
}

void LiePresentation::set_bracket(int i, int j, const Vec& v) {
  if (i == j) throw std::invalid_argument("[e_i, e_i] is forced to vanish");
  for (int k = 0; k < n; ++k) {
    (*this)(i, j, k) = v.coeff(k);
    (*this)(j, i, k) = -v.coeff(k);
  }
}

Vec LiePresentation::bracket(const Vec& x, const Vec& y) const {
  Vec r;
  for (const auto& [i, a] : x)
    for (const auto& [j, b] : y)
      for (int k = 0; k < n; ++k) r.add(k, (*this)(i, j, k) * a * b);
  return r;
}

void LiePresentation::validate() const {
  if (static_cast<int>(c.size()) != n * n * n) throw std::invalid_argument("structure constant shape");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if ((*this)(i, j, k) != -(*this)(j, i, k))
          throw std::invalid_argument("structure constants not antisymmetric at (" + std::to_string(i + 1) +
                                      "," + std::to_string(j + 1) + "," + std::to_string(k + 1) + ")");
}

VField encode_lie(const LiePresentation& p, int offset) {
  p.validate();
  VField q;
  for (int i = 0; i < p.n; ++i)
    for (int j = i + 1; j < p.n; ++j)
      for (int k = 0; k < p.n; ++k)
        q.add({(Mono(1) << (i + offset)) | (Mono(1) << (j + offset)), k + offset}, -p(i, j, k));
  return q;
}

LiePresentation decode_lie(const VField& q, int n, int offset) {
  LiePresentation p(n);
  const Mono block = low_mask(n) << offset;
  for (const auto& [k, c] : q) {
    if (mono_len(k.mask) != 2 || (k.mask & ~block) || k.target < offset || k.target >= offset + n)
      throw std::invalid_argument("field is not a quadratic vector field on the block");
    const auto idx = mono_indices(k.mask);
    const int i = idx[0] - offset, j = idx[1] - offset, t = k.target - offset;
    p(i, j, t) = -c;
    p(j, i, t) = c;
  }
  return p;
}

JacobiResult jacobi(const LiePresentation& p) {
  VectorFieldAlgebra alg(p.n);
  const VField q = encode_lie(p);
  JacobiResult r;
  r.square = lie_bracket(alg, q, q);
  r.ok = r.square.is_zero();
  if (!r.ok) {
    const auto idx = mono_indices(r.square.begin()->first.mask);
    for (int t = 0; t < 3; ++t) r.triple[t] = idx[t];
  }
  return r;
}

VField encode_map(const Matrix& a, int u_offset, int v_offset) {
  VField phi;
  for (int eta = 0; eta < a.rows(); ++eta)
    for (int l = 0; l < a.cols(); ++l) phi.add({Mono(1) << (u_offset + l), v_offset + eta}, -a(eta, l));
  return phi;
}

Matrix decode_map(const VField& phi, int dim_u, int dim_v, int u_offset, int v_offset) {
  Matrix a(dim_v, dim_u);
  for (const auto& [k, c] : phi) {
    const int l = mono_len(k.mask) == 1 ? std::countr_zero(k.mask) - u_offset : -1;
    const int eta = k.target - v_offset;
    if (l < 0 || l >= dim_u || eta < 0 || eta >= dim_v)
      throw std::invalid_argument("field does not encode a linear map U -> V");
    a(eta, l) = -c;
  }
  return a;
}

VectorFieldAlgebra pair_algebra(int dim_u, int dim_v) {
  std::vector<std::string> labels;
  for (int i = 0; i < dim_u; ++i) labels.push_back("u" + std::to_string(i + 1));
  for (int i = 0; i < dim_v; ++i) labels.push_back("v" + std::to_string(i + 1));
  return VectorFieldAlgebra(dim_u + dim_v, labels);
}

VField lie_morphism_residual(const VField& q_u, const VField& q_v, const VField& phi, int dim_u, int dim_v) {
  const VectorFieldAlgebra alg = pair_algebra(dim_u, dim_v);
  VField r = lie_bracket(alg, q_u, phi);
  r.add_scaled(lie_bracket(alg, lie_bracket(alg, q_v, phi), phi), Scalar(Rational(1, 2)));
  return r;
}

VField lie_morphism_residual(const LieTriple& m) {
  const int du = m.dim_u(), dv = m.dim_v();
  if (m.phi.rows() != dv || m.phi.cols() != du) throw std::invalid_argument("map has the wrong shape");
  return lie_morphism_residual(encode_lie(m.u, 0), encode_lie(m.v, du), encode_map(m.phi, 0, du), du, dv);
}

// ---------------------------------------------------------------- V-data

namespace {

VFData pair_skeleton(int du, int dv, const std::string& name) {
  VFData vd;
  vd.name = name;
  vd.L = std::make_shared<const VectorFieldAlgebra>(pair_algebra(du, dv));
  const Mono umask = low_mask(du);
  vd.in_a = [umask, du](const VFKey& k) { return (k.mask & ~umask) == 0 && k.target >= du; };
  vd.weight = [umask, du](const VFKey& k) { return mono_len(k.mask & umask) + (k.target >= du ? 1 : 0) - 1; };
  vd.w_max = du;
  return vd;
}

}  // namespace

VFData lie_pair_vdata(const LiePresentation& u, const LiePresentation& v) {
  VFData vd = pair_skeleton(u.n, v.n, "lie pair");
  vd.delta = encode_lie(u, 0) + encode_lie(v, u.n);
  return vd;
}

VFData lie_moduli_vdata(int dim_u, int dim_v) { return pair_skeleton(dim_u, dim_v, "lie moduli"); }

VFData lie_pair_twisted(const LieTriple& m) {
  return twist(lie_pair_vdata(m.u, m.v), encode_map(m.phi, 0, m.dim_u()));
}

LInftyAlg<VFKey> nr_algebra(const LieTriple& m) {
  const int du = m.dim_u(), dv = m.dim_v();
  if (!lie_morphism_residual(m).is_zero()) throw NotMaurerCartan("nr_algebra: phi is not a Lie algebra morphism");
  auto alg_vf = std::make_shared<const VectorFieldAlgebra>(pair_algebra(du, dv));
  const VField qv = encode_lie(m.v, du);
  const VField d0 = encode_lie(m.u, 0) + lie_bracket(*alg_vf, qv, encode_map(m.phi, 0, du));
  const Mono umask = low_mask(du);
  LInftyAlg<VFKey> alg;
  alg.name = "Nijenhuis-Richardson";
  alg.degree = [alg_vf](const VFKey& k) { return alg_vf->degree(k); };
  alg.bracket = [alg_vf, qv, d0, umask, du](const std::vector<VField>& args) -> VField {
    for (const auto& a : args)
      for (const auto& [k, c] : a)
        if ((k.mask & ~umask) || k.target < du) throw NotInA("nr_algebra: argument outside C(U[1]) (x) V[1]");
    switch (args.size()) {
      case 1:
        return lie_bracket(*alg_vf, d0, args[0]);
      case 2:
        return lie_bracket(*alg_vf, lie_bracket(*alg_vf, qv, args[0]), args[1]);
      case 3: {
        const VField t =
            lie_bracket(*alg_vf, lie_bracket(*alg_vf, lie_bracket(*alg_vf, qv, args[0]), args[1]), args[2]);
        if (!t.is_zero()) throw std::logic_error("nr_algebra: ternary bracket does not vanish");
        return {};
      }
      default:
        return {};
    }
  };
  alg.max_arity = 3;
  alg.mc_bound = 2;
  alg.gauge_bound = 2;
  return alg;
}

bool in_L_prime(const VFKey& k, int dim_u) {
  const Mono umask = low_mask(dim_u);
  if (k.target < dim_u) return (k.mask & ~umask) == 0;
  return (k.mask & umask) == 0;
}

// ---------------------------------------------------------------- simultaneous

namespace {

// full substitution v_b -> sum_l A(b, l) u_l in a d/dv-valued field
VField substitute(const VField& x, const Matrix& a, int du) {
  const Mono umask = low_mask(du);
  VField out;
  for (const auto& [k, c] : x) {
    if (k.target < du) throw std::logic_error("substitution needs a d/dv target");
    LinComb<Mono> poly(k.mask & umask, c);
    for (int b : mono_indices(k.mask & ~umask)) {
      LinComb<Mono> next;
      for (const auto& [mono, coef] : poly)
        for (int l = 0; l < du; ++l) {
          const Scalar w = a(b - du, l);
          if (w.is_zero()) continue;
          const int s = mono_mul_sign(mono, Mono(1) << l);
          if (s) next.add(mono | (Mono(1) << l), coef * w * Scalar(s));
        }
      poly = std::move(next);
    }
    for (const auto& [mono, coef] : poly) out.add({mono, k.target}, coef);
  }
  return out;
}

// [x_U, Phi] for x_U = f d/du_i:  -A(eta, i) f d/dv_eta
VField against_phi(const VField& xu, const Matrix& a, int du) {
  VField out;
  for (const auto& [k, c] : xu)
    for (int eta = 0; eta < a.rows(); ++eta) out.add({k.mask, du + eta}, -a(eta, k.target) * c);
  return out;
}

}  // namespace

LInftyAlg<PairKey> simultaneous_algebra(const LieTriple& m) {
  const int du = m.dim_u(), dv = m.dim_v();
  if (!lie_morphism_residual(m).is_zero())
    throw NotMaurerCartan("simultaneous_algebra: phi is not a Lie algebra morphism");
  auto L = std::make_shared<const VectorFieldAlgebra>(pair_algebra(du, dv));
  const VField qu = encode_lie(m.u, 0), qv = encode_lie(m.v, du);
  const Matrix a = m.phi;
  const VField d0 = qu + lie_bracket(*L, qv, encode_map(a, 0, du));
  const Mono umask = low_mask(du);

  auto check_a = [umask, du](const VField& x) {
    for (const auto& [k, c] : x)
      if ((k.mask & ~umask) || k.target < du) throw NotInA("simultaneous_algebra: argument outside a");
  };
  // one L'[1] piece (if n_l = 1) or two (n_l = 2) followed by a-pieces
  auto pure = [=](const std::vector<BigPiece<VFKey>>& ps, int n_l) -> PairElem {
    const int n = static_cast<int>(ps.size());
    for (int i = n_l; i < n; ++i) check_a(ps[i].x);
    if (n_l == 0) {
      if (n == 1) return lift_a(lie_bracket(*L, d0, ps[0].x));
      if (n == 2) return lift_a(lie_bracket(*L, lie_bracket(*L, qv, ps[0].x), ps[1].x));
      return {};
    }
    if (n_l == 1) {
      auto [xu, xv] = split_uv(ps[0].x, du);
      if (n == 1) {
        VField lpart = -lie_bracket(*L, qu, xu);
        lpart -= lie_bracket(*L, qv, xv);
        return lift_L(lpart) + lift_a(against_phi(xu, a, du) + substitute(xv, a, du));
      }
      VField out;
      if (n == 2) out = lie_bracket(*L, xu, ps[1].x);
      VField t = xv;
      for (int i = 1; i < n && !t.is_zero(); ++i) t = lie_bracket(*L, t, ps[i].x);
      out += substitute(t, a, du);
      if (n > dv + 1 && !out.is_zero()) throw std::logic_error("bracket beyond arity dim V + 1 is nonzero");
      return lift_a(out);
    }
    if (n_l == 2 && n == 2) {
      auto [xu, xv] = split_uv(ps[0].x, du);
      auto [yu, yv] = split_uv(ps[1].x, du);
      VField r = lie_bracket(*L, xu, yu) + lie_bracket(*L, xv, yv);
      if ((ps[0].deg + 1) & 1) r *= Scalar(-1);
      return lift_L(r);
    }
    return {};
  };

  LInftyAlg<PairKey> alg;
  alg.name = "simultaneous (closed form)";
  alg.degree = [L](const PairKey& k) { return L->degree(k.second) - (k.first == 0 ? 1 : 0); };
  alg.bracket = piecewise_bracket<VFKey>(alg.degree, pure);
  alg.mc_bound = dv + 1;
  alg.gauge_bound = dv + 1;
  return alg;
}

CubicResidual cubic_residual(const LieTriple& m, const VField& qt_u, const VField& qt_v, const VField& phit) {
  const int du = m.dim_u(), dv = m.dim_v();
  const VectorFieldAlgebra L = pair_algebra(du, dv);
  for (const VField* f : {&qt_u, &qt_v})
    for (const auto& [k, c] : *f)
      if (L.degree(k) != 1 || !in_L_prime(k, du)) throw std::invalid_argument("cubic_residual: bad deformation");
  for (const auto& [k, c] : qt_u)
    if (k.target >= du) throw std::invalid_argument("cubic_residual: Qt_U must live on U");
  for (const auto& [k, c] : qt_v)
    if (k.target < du) throw std::invalid_argument("cubic_residual: Qt_V must live on V");
  const VField qu = encode_lie(m.u, 0), qv = encode_lie(m.v, du), phi = encode_map(m.phi, 0, du);
  const Scalar half(Rational(1, 2));
  auto br = [&](const VField& x, const VField& y) { return lie_bracket(L, x, y); };
  CubicResidual r;
  r.jac_u = br(qu, qt_u);
  r.jac_u.add_scaled(br(qt_u, qt_u), half);
  r.jac_v = br(qv, qt_v);
  r.jac_v.add_scaled(br(qt_v, qt_v), half);
  r.mixed = br(qt_u, phi);
  r.mixed.add_scaled(br(br(qt_v, phi), phi), half);
  r.mixed += br(qu + br(qv, phi), phit);
  r.mixed += br(qt_u, phit);
  r.mixed += br(br(qt_v, phit), phi);
  r.mixed.add_scaled(br(br(qv, phit), phit), half);
  r.mixed.add_scaled(br(br(qt_v, phit), phit), half);
  return r;
}

// ---------------------------------------------------------------- subalgebras

SubalgebraSplit SubalgebraSplit::partition(const LiePresentation& g, const std::vector<int>& u_indices) {
  std::vector<int> order;
  std::vector<bool> used(g.n, false);
  for (int i : u_indices) {
    if (i < 0 || i >= g.n || used[i]) throw std::invalid_argument("bad subspace index list");
    used[i] = true;
    order.push_back(i);
  }
  for (int i = 0; i < g.n; ++i)
    if (!used[i]) order.push_back(i);
  SubalgebraSplit s;
  s.g = g;
  s.dim_u = static_cast<int>(u_indices.size());
  s.basis = Matrix(g.n, g.n);
  for (int col = 0; col < g.n; ++col) s.basis(order[col], col) = Scalar(1);
  return s;
}

LiePresentation SubalgebraSplit::adapted() const {
  if (basis.rows() != g.n || basis.cols() != g.n) throw std::invalid_argument("basis has the wrong shape");
  if (dim_u < 0 || dim_u > g.n) throw std::invalid_argument("bad subspace dimension");
  const Matrix inv = basis.inverse();
  std::vector<std::string> labels;
  for (int i = 0; i < dim_u; ++i) labels.push_back("u" + std::to_string(i + 1));
  for (int i = dim_u; i < g.n; ++i) labels.push_back("v" + std::to_string(i - dim_u + 1));
  LiePresentation p(g.n, labels);
  for (int i = 0; i < g.n; ++i)
    for (int j = i + 1; j < g.n; ++j)
      p.set_bracket(i, j, apply_matrix(inv, g.bracket(column(basis, i), column(basis, j))));
  return p;
}

VFData subalgebra_vdata(const SubalgebraSplit& s) {
  const LiePresentation p = s.adapted();
  VFData vd = pair_skeleton(s.dim_u, s.dim_v(), "subalgebra");
  vd.delta = encode_lie(p, 0);
  vd.curved = !vd.is_flat();
  return vd;
}

VField graph_residual(const SubalgebraSplit& s, const Matrix& phi) {
  if (phi.rows() != s.dim_v() || phi.cols() != s.dim_u) throw std::invalid_argument("map has the wrong shape");
  const VFData vd = subalgebra_vdata(s);
  return mc_residual(derived_algebra(vd), encode_map(phi, 0, s.dim_u));
}

bool graph_is_subalgebra(const SubalgebraSplit& s, const Matrix& phi) { return graph_residual(s, phi).is_zero(); }

VFData inclusion_vdata(const LiePresentation& u, const LiePresentation& g, const Matrix& inclusion) {
  VFData vd = lie_pair_twisted({u, g, inclusion});
  vd.name = "inclusion";
  return vd;
}

// ---------------------------------------------------------------- GL action

LiePresentation pushforward(const LiePresentation& p, const Matrix& g) {
  const Matrix inv = g.inverse();
  LiePresentation r(p.n, p.labels);
  for (int i = 0; i < p.n; ++i)
    for (int j = i + 1; j < p.n; ++j)
      r.set_bracket(i, j, apply_matrix(g, p.bracket(column(inv, i), column(inv, j))));
  return r;
}

LieTriple gl_action(const Matrix& g, const Matrix& h, const LieTriple& m) {
  if (!lie_morphism_residual(m).is_zero()) throw NotMaurerCartan("gl_action: input is not a morphism");
  LieTriple r{pushforward(m.u, g), pushforward(m.v, h), h * m.phi * g.inverse()};
  if (!lie_morphism_residual(r).is_zero()) throw std::logic_error("gl_action: output is not a morphism");
  return r;
}

PairElem triple_point(const LieTriple& m) {
  const int du = m.dim_u();
  return lift_L(encode_lie(m.u, 0) + encode_lie(m.v, du)) + lift_a(encode_map(m.phi, 0, du));
}

LieTriple point_triple(const PairElem& x, int dim_u, int dim_v) {
  auto [qu, qv] = split_uv(part(x, 0), dim_u);
  return {decode_lie(qu, dim_u, 0), decode_lie(qv, dim_v, dim_u), decode_map(part(x, 1), dim_u, dim_v, 0, dim_u)};
}

PairElem gl_generator(const Matrix& gen_u, const Matrix& gen_v) {
  // the linear field x -> Gx pushes structures forward along e^{tG} with
  // velocity -[x, .], hence the minus sign
  const int du = gen_u.rows();
  VField z;
  for (int k = 0; k < du; ++k)
    for (int i = 0; i < du; ++i) z.add({Mono(1) << i, k}, -gen_u(k, i));
  for (int k = 0; k < gen_v.rows(); ++k)
    for (int i = 0; i < gen_v.rows(); ++i) z.add({Mono(1) << (du + i), du + k}, -gen_v(k, i));
  return lift_L(z);
}

PairElem gauge_closed_form(const PairElem& z, const PairElem& m, int dim_u, int dim_v) {
  const VectorFieldAlgebra L = pair_algebra(dim_u, dim_v);
  auto [zu, zv] = split_uv(part(z, 0), dim_u);
  auto [mu, mv] = split_uv(part(m, 0), dim_u);
  const VField za = part(z, 1), ma = part(m, 1);
  auto br = [&](const VField& x, const VField& y) { return lie_bracket(L, x, y); };
  return lift_L(br(zu, mu) + br(zv, mv)) + lift_a(br(zu + zv, ma) + br(br(mv, za), ma));
}

}  // namespace dbr
