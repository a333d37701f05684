#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dbr/linfty.hpp"

namespace dbr {

// Polynomial map Q^n -> Q^m with exact coefficients.
struct PolySystem {
  using Monomial = std::vector<int>;  // exponent per variable
  int nvars = 0;
  std::vector<std::map<Monomial, Rational>> eqs;
  std::vector<std::string> eq_labels;

  std::vector<double> eval(const std::vector<double>& x) const;
  // rows = equations, columns = variables
  std::vector<std::vector<double>> jacobian(const std::vector<double>& x) const;
  std::vector<Rational> eval_exact(const std::vector<Rational>& x) const;
  int degree() const;
};

// R(x) = m_0 + sum over multisets alpha of x^alpha / alpha! * m_|alpha|(b_alpha)
// for phi = sum x_i b_i; exact when the algebra has a vanishing bound.
template <class K>
PolySystem mc_polynomial_system(const LInftyAlg<K>& alg, const std::vector<LinComb<K>>& basis, int bound = -1) {
  require_bound(alg, alg.mc_bound, bound, "Maurer-Cartan");
  const int top = bound >= 0 ? bound : alg.mc_bound;
  const int n = static_cast<int>(basis.size());
  std::map<K, std::map<PolySystem::Monomial, Rational>> rows;
  auto put = [&](const LinComb<K>& val, const PolySystem::Monomial& mono, const Rational& w) {
    for (const auto& [k, c] : val) {
      if (!c.is_rational()) throw std::invalid_argument("polynomial system needs rational brackets");
      Rational& slot = rows[k][mono];
      slot += c.head() * w;
    }
  };
  if (alg.curved) put(alg({}), PolySystem::Monomial(n, 0), Rational(1));
  std::vector<int> idx;
  for (int len = 1; len <= top && n > 0; ++len) {
    idx.assign(len, 0);
    while (true) {
      std::vector<LinComb<K>> args;
      PolySystem::Monomial mono(n, 0);
      for (int i : idx) {
        args.push_back(basis[i]);
        ++mono[i];
      }
      Rational w(1);
      for (int e : mono) w /= factorial(e);
      put(alg(args), mono, w);
      int p = len - 1;
      while (p >= 0 && idx[p] == n - 1) --p;
      if (p < 0) break;
      ++idx[p];
      for (int q = p + 1; q < len; ++q) idx[q] = idx[p];
    }
  }
  PolySystem sys;
  sys.nvars = n;
  for (auto& [k, poly] : rows) {
    std::map<PolySystem::Monomial, Rational> clean;
    for (auto& [m, c] : poly)
      if (sgn(c) != 0) clean.emplace(m, c);
    if (clean.empty()) continue;
    sys.eqs.push_back(std::move(clean));
    sys.eq_labels.push_back(std::to_string(sys.eqs.size() - 1));
  }
  return sys;
}

enum class Verdict { exact_solution, float_only, diverged, singular };
std::string verdict_name(Verdict v);

struct NewtonOptions {
  double tol = 1e-10;
  int max_iter = 100;
  long max_den = 64;  // denominator bound for rationalization
};

struct NewtonResult {
  Verdict verdict = Verdict::diverged;
  std::vector<double> x;        // last float iterate
  std::vector<Rational> exact;  // set only for exact solutions
  int iterations = 0;
  double residual = 0;
  std::string message;
};

// best rational approximation with denominator <= max_den (continued fractions)
Rational rationalize(double x, long max_den);

// Damped Newton with minimum-norm steps, then coordinate-by-coordinate
// snapping to rationals and an exact check. `verify` defaults to exact
// evaluation of the system itself.
NewtonResult solve_mc_newton(const PolySystem& sys, const std::vector<double>& seed, const NewtonOptions& opt,
                             const std::function<bool(const std::vector<Rational>&)>& verify = {});

}  // namespace dbr
