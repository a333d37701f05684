#include "dbr/newton.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace dbr {

namespace {

double mono_value(const PolySystem::Monomial& m, const std::vector<double>& x) {
  double v = 1;
  for (size_t i = 0; i < m.size(); ++i)
    for (int e = 0; e < m[i]; ++e) v *= x[i];
  return v;
}

double norm(const std::vector<double>& r) {
  double s = 0;
  for (double v : r) s += v * v;
  return std::sqrt(s);
}

// plain damped Newton over the variables marked free
struct Stage {
  bool converged = false, singular = false;
  int iterations = 0;
  double residual = 0;
};

Stage newton_stage(const PolySystem& sys, std::vector<double>& x, const std::vector<bool>& free_var,
                   const NewtonOptions& opt) {
  Stage st;
  std::vector<int> cols;
  for (int i = 0; i < sys.nvars; ++i)
    if (free_var[i]) cols.push_back(i);
  std::vector<double> r = sys.eval(x);
  double nr = norm(r);
  for (int it = 0; it < opt.max_iter; ++it) {
    st.iterations = it;
    if (nr < opt.tol) {
      st.converged = true;
      break;
    }
    if (cols.empty() || !std::isfinite(nr)) break;
    const auto jac = sys.jacobian(x);
    Eigen::MatrixXd J(static_cast<int>(r.size()), static_cast<int>(cols.size()));
    Eigen::VectorXd rhs(static_cast<int>(r.size()));
    for (size_t e = 0; e < r.size(); ++e) {
      rhs(e) = -r[e];
      for (size_t c = 0; c < cols.size(); ++c) J(e, c) = jac[e][cols[c]];
    }
    if (J.norm() < 1e-14) {
      st.singular = true;
      break;
    }
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(J);
    const Eigen::VectorXd step = cod.solve(rhs);
    if (!step.allFinite()) {
      st.singular = true;
      break;
    }
    double t = 1;
    bool accepted = false;
    while (t > 1e-6) {
      std::vector<double> xn = x;
      for (size_t c = 0; c < cols.size(); ++c) xn[cols[c]] += t * step(c);
      const auto rn = sys.eval(xn);
      const double nn = norm(rn);
      if (std::isfinite(nn) && nn < nr * (1 - 1e-4 * t)) {
        x = std::move(xn);
        r = rn;
        nr = nn;
        accepted = true;
        break;
      }
      t /= 2;
    }
    if (!accepted) break;
    if (norm(x) > 1e8) break;
  }
  st.residual = nr;
  st.converged = nr < opt.tol;
  return st;
}

}  // namespace

std::vector<double> PolySystem::eval(const std::vector<double>& x) const {
  std::vector<double> r;
  r.reserve(eqs.size());
  for (const auto& eq : eqs) {
    double v = 0;
    for (const auto& [m, c] : eq) v += c.get_d() * mono_value(m, x);
    r.push_back(v);
  }
  return r;
}

std::vector<std::vector<double>> PolySystem::jacobian(const std::vector<double>& x) const {
  std::vector<std::vector<double>> j(eqs.size(), std::vector<double>(nvars, 0.0));
  for (size_t e = 0; e < eqs.size(); ++e)
    for (const auto& [m, c] : eqs[e])
      for (int i = 0; i < nvars; ++i) {
        if (m[i] == 0) continue;
        PolySystem::Monomial d = m;
        --d[i];
        j[e][i] += c.get_d() * m[i] * mono_value(d, x);
      }
  return j;
}

std::vector<Rational> PolySystem::eval_exact(const std::vector<Rational>& x) const {
  std::vector<Rational> r;
  for (const auto& eq : eqs) {
    Rational v(0);
    for (const auto& [m, c] : eq) {
      Rational t = c;
      for (size_t i = 0; i < m.size(); ++i)
        for (int e = 0; e < m[i]; ++e) t *= x[i];
      v += t;
    }
    r.push_back(v);
  }
  return r;
}

int PolySystem::degree() const {
  int d = 0;
  for (const auto& eq : eqs)
    for (const auto& [m, c] : eq) {
      int s = 0;
      for (int e : m) s += e;
      d = std::max(d, s);
    }
  return d;
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::exact_solution: return "exact-solution";
    case Verdict::float_only: return "float-only";
    case Verdict::diverged: return "diverged";
    case Verdict::singular: return "singular";
  }
  return "?";
}

Rational rationalize(double x, long max_den) {
  if (!std::isfinite(x)) throw std::invalid_argument("rationalize: non-finite value");
  // convergents h/k of the continued fraction of x
  long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double f = x;
  for (int i = 0; i < 64; ++i) {
    const double a = std::floor(f);
    if (std::abs(a) > 1e15) break;
    const long ai = static_cast<long>(a);
    const long h2 = ai * h1 + h0, k2 = ai * k1 + k0;
    if (k2 > max_den) break;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    const double rest = f - a;
    if (rest < 1e-12) break;
    f = 1.0 / rest;
  }
  if (k1 == 0) return Rational(static_cast<long>(std::llround(x)));
  Rational q(h1, k1);
  q.canonicalize();
  return q;
}

NewtonResult solve_mc_newton(const PolySystem& sys, const std::vector<double>& seed, const NewtonOptions& opt,
                             const std::function<bool(const std::vector<Rational>&)>& verify) {
  if (static_cast<int>(seed.size()) != sys.nvars) throw std::invalid_argument("seed dimension mismatch");
  NewtonResult res;
  res.x = seed;
  std::vector<bool> free_var(sys.nvars, true);
  Stage st = newton_stage(sys, res.x, free_var, opt);
  res.iterations = st.iterations;
  res.residual = st.residual;
  if (!st.converged) {
    res.verdict = st.singular ? Verdict::singular : Verdict::diverged;
    res.message = st.singular ? "Jacobian vanishes at the iterate" : "no convergence within the iteration budget";
    return res;
  }
  // snap one coordinate at a time, letting the others re-settle
  std::vector<Rational> q(sys.nvars);
  std::vector<double> x = res.x;
  bool snapped_all = true;
  for (int i = 0; i < sys.nvars; ++i) {
    const Rational r = rationalize(x[i], opt.max_den);
    std::vector<double> trial = x;
    trial[i] = r.get_d();
    free_var[i] = false;
    Stage s2 = newton_stage(sys, trial, free_var, opt);
    if (!s2.converged) {
      snapped_all = false;
      break;
    }
    q[i] = r;
    x = trial;
  }
  res.x = x;
  if (!snapped_all) {
    res.verdict = Verdict::float_only;
    res.message = "converged in floating point; no rational point found nearby";
    return res;
  }
  const bool ok = verify ? verify(q) : [&] {
    for (const auto& v : sys.eval_exact(q))
      if (sgn(v) != 0) return false;
    return true;
  }();
  if (ok) {
    res.verdict = Verdict::exact_solution;
    res.exact = q;
    res.residual = 0;
  } else {
    res.verdict = Verdict::float_only;
    res.message = "rational candidate failed the exact check";
  }
  return res;
}

}  // namespace dbr
