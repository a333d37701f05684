#include "cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <random>
#include <set>
#include <sstream>

#include "dbr/grassmann.hpp"
#include "dbr/newton.hpp"

namespace dbr::cli {

namespace {

using Entries = std::map<std::tuple<int, int, int>, Scalar>;

// --------------------------------------------------------------- report bits

void check(Json& r, const std::string& name, bool ok, const std::string& witness = "") {
  Json c;
  c["name"] = name;
  c["passed"] = ok;
  if (!witness.empty()) c["witness"] = witness;
  r["checks"].push_back(std::move(c));
}

void add_checks(Json& r, const Report& rep, const std::string& prefix) {
  for (const auto& c : rep.checks) check(r, prefix + c.name, c.passed, c.witness);
}

bool checks_pass(const Json& r) {
  if (!r.contains("checks")) return true;
  for (const auto& c : r["checks"])
    if (!c["passed"].get<bool>()) return false;
  return true;
}

std::string vec_str(const Vec& v, const std::vector<std::string>& labels) {
  if (v.is_zero()) return "0";
  std::string s;
  for (const auto& [k, c] : v) {
    if (!s.empty()) s += " + ";
    s += "(" + c.str() + ")" + labels.at(k);
  }
  return s;
}

Json triples(const Entries& e) {
  Json a = Json::array();
  for (const auto& [k, c] : e) {
    if (c.is_zero()) continue;
    a.push_back(Json::array({Json::array({std::get<0>(k), std::get<1>(k)}), std::get<2>(k), c.str()}));
  }
  return a;
}

Entries nonzero(const Entries& e) {
  Entries r;
  for (const auto& [k, c] : e)
    if (!c.is_zero()) r.emplace(k, c);
  return r;
}

std::string first_entry(const Entries& e, const std::vector<std::string>& in_labels,
                        const std::vector<std::string>& out_labels, const std::string& what) {
  for (const auto& [k, c] : e)
    if (!c.is_zero())
      return what + "(" + in_labels.at(std::get<0>(k)) + ", " + in_labels.at(std::get<1>(k)) + ") has " + c.str() +
             " on " + out_labels.at(std::get<2>(k));
  return "";
}

Vec apply(const Matrix& a, const Vec& x) {
  Vec y;
  for (const auto& [j, c] : x)
    for (int i = 0; i < a.rows(); ++i)
      if (!a(i, j).is_zero()) y.add(i, a(i, j) * c);
  return y;
}

Vec column(const Matrix& a, int j) {
  Vec v;
  for (int i = 0; i < a.rows(); ++i) v.add(i, a(i, j));
  return v;
}

Json matrix_json(const Matrix& m) {
  Json a = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j).str());
    a.push_back(row);
  }
  return a;
}

Json lie_json(const LiePresentation& p) {
  Json j;
  j["dim"] = p.n;
  j["labels"] = p.labels;
  Json b = Json::array();
  for (int i = 0; i < p.n; ++i)
    for (int k = i + 1; k < p.n; ++k)
      for (int t = 0; t < p.n; ++t)
        if (!p(i, k, t).is_zero()) b.push_back(Json::array({Json::array({i, k}), t, p(i, k, t).str()}));
  j["brackets"] = b;
  return j;
}

Json assoc_json(const AssocPresentation& p) {
  Json j;
  j["dim"] = p.n;
  j["labels"] = p.labels;
  Json b = Json::array();
  for (int i = 0; i < p.n; ++i)
    for (int k = 0; k < p.n; ++k)
      for (int t = 0; t < p.n; ++t)
        if (!p(i, k, t).is_zero()) b.push_back(Json::array({Json::array({i, k}), t, p(i, k, t).str()}));
  j["products"] = b;
  return j;
}

std::string sci(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6e", x);
  return buf;
}

std::string fixed12(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

// ------------------------------------------------------------ Lie helpers

std::string triple_str(const LiePresentation& p, const std::array<int, 3>& t) {
  return "(" + p.labels[t[0]] + ", " + p.labels[t[1]] + ", " + p.labels[t[2]] + ")";
}

void jacobi_check(Json& r, const std::string& name, const LiePresentation& p) {
  const JacobiResult j = jacobi(p);
  std::string w;
  if (!j.ok) {
    VectorFieldAlgebra alg(p.n, p.labels);
    w = "basis triple " + triple_str(p, j.triple) + "; [Q, Q] = " + to_string(alg, j.square);
  }
  check(r, name, j.ok, w);
}

// phi[e_i, e_j] - [phi e_i, phi e_j] for i < j
Entries lie_defects(const LiePresentation& u, const LiePresentation& v, const Matrix& phi) {
  Entries e;
  for (int i = 0; i < u.n; ++i)
    for (int j = i + 1; j < u.n; ++j) {
      Vec d = apply(phi, u.bracket(Vec(i), Vec(j)));
      d -= v.bracket(column(phi, i), column(phi, j));
      for (const auto& [eta, c] : d) e[{i, j, eta}] = c;
    }
  return e;
}

// coefficients of u_i u_j d/dv_eta; anything else goes to `stray`
Entries quadratic_entries(const VField& x, int du, VField* stray) {
  Entries e;
  for (const auto& [k, c] : x) {
    if (mono_len(k.mask) == 2 && k.target >= du && (k.mask >> du) == 0) {
      const auto ix = mono_indices(k.mask);
      e[{ix[0], ix[1], k.target - du}] = c;
    } else if (stray) {
      stray->add(k, c);
    }
  }
  return e;
}

LiePresentation lie_sum(const LiePresentation& a, const LiePresentation& b) {
  LiePresentation r = a;
  for (size_t i = 0; i < r.c.size(); ++i) r.c[i] += b.c[i];
  return r;
}

AssocPresentation assoc_sum(const AssocPresentation& a, const AssocPresentation& b) {
  AssocPresentation r = a;
  for (size_t i = 0; i < r.m.size(); ++i) r.m[i] += b.m[i];
  return r;
}

bool lie_is_morphism(const LiePresentation& u, const LiePresentation& v, const Matrix& phi) {
  return nonzero(lie_defects(u, v, phi)).empty();
}

// --------------------------------------------------------- tabulation

struct TableStats {
  long evaluated = 0;
  long nonzero = 0;
  std::string mismatch;  // first input where the two providers differ
};

template <class K>
struct Input {
  std::string name;
  LinComb<K> x;
  int tag = 1;  // 0 for structure deformations, 1 for maps
};

template <class K>
using Show = std::function<std::string(const LinComb<K>&)>;

// all multisets of `arity` inputs; rows named by `row`; only nonzero values
// are listed. When `other` is given every value is compared against it.
template <class K>
Json tabulate(const LInftyAlg<K>& alg, const LInftyAlg<K>* other, const std::vector<Input<K>>& in, int arity,
              const std::function<std::string(const std::vector<int>&)>& row, const Show<K>& show,
              TableStats& st, const std::function<bool(const std::vector<int>&)>& keep = {}) {
  Json out = Json::object();
  const int n = static_cast<int>(in.size());
  if (n == 0) return out;
  std::vector<int> idx(arity, 0);
  while (true) {
    if (!keep || keep(idx)) {
      std::vector<LinComb<K>> args;
      for (int i : idx) args.push_back(in[i].x);
      const LinComb<K> v = alg(args);
      ++st.evaluated;
      if (other && st.mismatch.empty()) {
        const LinComb<K> w = (*other)(args);
        if (w != v) {
          std::string s;
          for (int i : idx) s += (s.empty() ? "" : ", ") + in[i].name;
          st.mismatch = "{" + s + "}: generic " + show(v) + " vs explicit " + show(w);
        }
      }
      if (!v.is_zero()) {
        ++st.nonzero;
        Json e;
        Json names = Json::array();
        for (int i : idx) names.push_back(in[i].name);
        e["inputs"] = names;
        e["value"] = show(v);
        out[row(idx)].push_back(std::move(e));
      }
    }
    int p = arity - 1;
    while (p >= 0 && idx[p] == n - 1) --p;
    if (p < 0) break;
    ++idx[p];
    for (int q = p + 1; q < arity; ++q) idx[q] = idx[p];
  }
  return out;
}

// row names of the simultaneous tables by input pattern
template <class K>
std::function<std::string(const std::vector<int>&)> pattern_rows(const std::vector<Input<K>>& in) {
  return [&in](const std::vector<int>& idx) -> std::string {
    int nl = 0;
    for (int i : idx) nl += in[i].tag == 0;
    const int n = static_cast<int>(idx.size());
    if (n == 1) return "differential";
    if (nl == 0) return "maps";
    if (nl == 1) return n == 2 ? "structure-map" : "structure-maps";
    if (nl == 2 && n == 2) return "structure-structure";
    return "other";
  };
}

template <class K>
std::function<bool(const std::vector<int>&)> at_most_one_structure(const std::vector<Input<K>>& in) {
  return [&in](const std::vector<int>& idx) {
    int nl = 0;
    for (int i : idx) nl += in[i].tag == 0;
    return nl <= 1;
  };
}

std::function<std::string(const std::vector<int>&)> arity_row() {
  return [](const std::vector<int>& idx) { return "arity " + std::to_string(idx.size()); };
}

// --------------------------------------------------------------- solving

template <class K>
void solve_system(const Options& opt, const SolverSettings& base_settings, Json& r, const LInftyAlg<K>& alg,
                  const std::vector<LinComb<K>>& basis, const std::vector<std::string>& names,
                  const std::function<Json(const std::vector<Rational>&)>& echo, int& exit_code) {
  SolverSettings s = base_settings;
  if (opt.tol) s.tol = *opt.tol;
  if (opt.max_iter) s.max_iter = *opt.max_iter;
  if (opt.seed) s.seed = *opt.seed;
  const int n = static_cast<int>(basis.size());
  if (!s.start.empty() && static_cast<int>(s.start.size()) != n)
    throw InputError("solver start has " + std::to_string(s.start.size()) + " coordinates, expected " +
                     std::to_string(n) + " (unknowns: " + [&] {
                       std::string t;
                       for (const auto& x : names) t += (t.empty() ? "" : ", ") + x;
                       return t;
                     }() + ")");
  const PolySystem sys = mc_polynomial_system(alg, basis);
  Json sj;
  sj["unknowns"] = names;
  sj["equations"] = sys.eqs.size();
  sj["degree"] = sys.degree();
  sj["settings"] = {{"tol", sci(s.tol)}, {"max_iter", s.max_iter}, {"max_den", s.max_den},
                    {"restarts", s.restarts}, {"spread", fixed12(s.spread)}, {"seed", s.seed}};
  auto verify = [&](const std::vector<Rational>& q) {
    LinComb<K> x;
    for (size_t i = 0; i < q.size(); ++i) x.add_scaled(basis[i], Scalar(q[i]));
    return mc_residual(alg, x).is_zero();
  };
  NewtonOptions no;
  no.tol = s.tol;
  no.max_iter = s.max_iter;
  no.max_den = s.max_den;
  std::mt19937 rng(s.seed);
  std::uniform_real_distribution<double> dist(-s.spread, s.spread);
  Json attempts = Json::array();
  NewtonResult best;
  bool have = false;
  const int total = (s.start.empty() ? 0 : 1) + s.restarts;
  for (int a = 0; a < total; ++a) {
    std::vector<double> seed;
    const bool given = !s.start.empty() && a == 0;
    if (given) {
      seed = s.start;
    } else {
      for (int i = 0; i < n; ++i) seed.push_back(dist(rng));
    }
    NewtonResult res;
    if (sys.eqs.empty()) {
      res.verdict = Verdict::exact_solution;
      for (double v : seed) res.exact.push_back(rationalize(v, s.max_den));
      res.x = seed;
    } else {
      res = solve_mc_newton(sys, seed, no, verify);
    }
    attempts.push_back({{"seed", given ? "start" : "random " + std::to_string(a - (s.start.empty() ? 0 : 1) + 1)},
                        {"verdict", verdict_name(res.verdict)},
                        {"iterations", res.iterations},
                        {"residual", sci(res.residual)}});
    auto rank = [](Verdict v) {
      return v == Verdict::exact_solution ? 3 : v == Verdict::float_only ? 2 : v == Verdict::singular ? 1 : 0;
    };
    if (!have || rank(res.verdict) > rank(best.verdict)) {
      best = res;
      have = true;
    }
    if (res.verdict == Verdict::exact_solution) break;
  }
  sj["attempts"] = attempts;
  r["solver"] = sj;
  r["outcome"] = have ? verdict_name(best.verdict) : "diverged";
  if (have && best.verdict == Verdict::exact_solution) {
    Json sol = Json::object();
    for (int i = 0; i < n; ++i) sol[names[i]] = Scalar(best.exact[i]).str();
    r["solution"] = sol;
    r["problem"] = echo(best.exact);
    exit_code = kPass;
  } else {
    Json last = Json::object();
    if (have)
      for (int i = 0; i < n && i < static_cast<int>(best.x.size()); ++i) last[names[i]] = fixed12(best.x[i]);
    r["last_iterate"] = last;
    if (have && !best.message.empty()) r["message"] = best.message;
    exit_code = kTruncation;
  }
}

// ============================================================== kinds

struct Ctx {
  const Options& opt;
  const Problem& p;
  Json& r;
  int exit_code = kPass;
};

void require(const Problem& p, const std::string& ptr, const std::string& what) {
  if (!p.has(ptr)) p.fail(ptr, "this command needs " + what);
}

// math failure with a witness; ends the command
struct Failure {
  std::string witness;
};

// ----------------------------------------------------------------- lie

void lie_kind(Ctx& c) {
  const Problem& p = c.p;
  const LiePresentation g = p.lie("/algebra");
  if (c.opt.command == "validate") {
    jacobi_check(c.r, "Jacobi", g);
    check(c.r, "encoding round trip", decode_lie(encode_lie(g), g.n) == g);
    if (checks_pass(c.r)) {
      const VFData vd = lie_pair_vdata(g, g);
      add_checks(c.r, validate_vdata(vd), "pair V-data: ");
      add_checks(c.r, check_filtration(vd), "filtration: ");
    }
    return;
  }
  if (c.opt.command == "residual") {
    require(p, "/deformation", "a \"deformation\" with \"brackets\"");
    p.allow_keys("/deformation", {"brackets"});
    const LiePresentation gt = p.lie_brackets("/deformation/brackets", g.n);
    if (!jacobi(g).ok) throw Failure{"the base bracket fails Jacobi, so its deformation problem is undefined"};
    VectorFieldAlgebra L(g.n, g.labels);
    const VField q = encode_lie(g), qt = encode_lie(gt);
    VField generic = bracket(L, q, qt);
    generic.add_scaled(bracket(L, qt, qt), Scalar(Rational(1, 2)));
    const JacobiResult direct = jacobi(lie_sum(g, gt));
    VField twice = generic;
    twice *= Scalar(2);
    Json res;
    res["explicit"] = {{"description", "[Q', Q'] for the deformed bracket Q' = Q + Qt"},
                       {"zero", direct.ok},
                       {"value", to_string(L, direct.square)}};
    res["generic"] = {{"description", "[Q, Qt] + 1/2 [Qt, Qt]"},
                      {"zero", generic.is_zero()},
                      {"value", to_string(L, generic)}};
    res["agree"] = twice == direct.square;
    c.r["residual"] = res;
    check(c.r, "paths agree", twice == direct.square);
    check(c.r, "residual vanishes", direct.ok,
          direct.ok ? "" : "basis triple " + triple_str(g, direct.triple) + " fails Jacobi after deformation");
    return;
  }
  throw InputError("kind \"lie\" supports validate and residual");
}

// ---------------------------------------------------------- lie-morphism

struct LieDeformation {
  LiePresentation u, v;
  Matrix phi;
};

LieDeformation lie_deformation(const Problem& p, const LieTriple& m) {
  p.allow_keys("/deformation", {"u", "v", "phi"});
  LieDeformation d{LiePresentation(m.dim_u()), LiePresentation(m.dim_v()), Matrix(m.dim_v(), m.dim_u())};
  if (p.has("/deformation/u")) d.u = p.lie_brackets("/deformation/u", m.dim_u());
  if (p.has("/deformation/v")) d.v = p.lie_brackets("/deformation/v", m.dim_v());
  if (p.has("/deformation/phi")) d.phi = p.matrix("/deformation/phi", m.dim_v(), m.dim_u());
  return d;
}

void lie_tables(Ctx& c, const LieTriple& m) {
  const int k = c.opt.arity;
  const VFData tw = lie_pair_twisted(m);
  const VectorFieldAlgebra& L = *tw.L;
  const Show<VFKey> show = [&L](const VField& x) { return to_string(L, x); };
  // deformations of the map alone
  std::vector<Input<VFKey>> a_in;
  for (int d = -1; d <= 1; ++d)
    for (const auto& key : tw.a_span(d)) a_in.push_back({L.key_str(key), VField(key, Scalar(1)), 1});
  const auto generic = derived_algebra(tw);
  const auto nr = nr_algebra(m);
  Json maps = Json::object();
  TableStats st;
  for (int n = 1; n <= k; ++n) {
    const Json t = tabulate<VFKey>(generic, n <= 3 ? &nr : nullptr, a_in, n, arity_row(), show, st);
    for (const auto& [row, list] : t.items()) maps[row] = list;
  }
  TableStats high;
  if (k < 3) tabulate<VFKey>(generic, nullptr, a_in, 3, arity_row(), show, high);
  else for (auto& [row, list] : maps.items()) if (row != "arity 1" && row != "arity 2") high.nonzero += list.size();
  check(c.r, "map deformations: explicit formulas agree", st.mismatch.empty(), st.mismatch);
  check(c.r, "map deformations: arity >= 3 vanishes", high.nonzero == 0,
        high.nonzero ? std::to_string(high.nonzero) + " nonzero entries" : "");

  // simultaneous deformations, degree-0 inputs
  const auto big = big_algebra(tw);
  const auto closed = simultaneous_algebra(m);
  std::vector<Input<PairKey>> in;
  for (const auto& key : L.spanning_set(1))
    if (in_L_prime(key, m.dim_u())) in.push_back({L.key_str(key) + "[1]", lift_L(VField(key, Scalar(1))), 0});
  for (const auto& key : tw.a_span(0)) in.push_back({L.key_str(key), lift_a(VField(key, Scalar(1))), 1});
  const Show<PairKey> bshow = [&L](const PairElem& x) {
    const VField l = part(x, 0), a = part(x, 1);
    std::string s;
    if (!l.is_zero()) s = "(" + to_string(L, l) + ")[1]";
    if (!a.is_zero()) s += (s.empty() ? "" : " + ") + to_string(L, a);
    return s.empty() ? std::string("0") : s;
  };
  Json sim = Json::object();
  TableStats st2;
  const auto rows = pattern_rows(in);
  for (int n = 1; n <= k; ++n) {
    Json t = tabulate<PairKey>(big, &closed, in, n, rows, bshow, st2);
    if (!t.empty()) sim["arity " + std::to_string(n)] = t;
  }
  const int top = m.dim_v() + 2;
  TableStats van;
  tabulate<PairKey>(big, nullptr, in, top, rows, bshow, van, at_most_one_structure(in));
  check(c.r, "simultaneous: explicit formulas agree", st2.mismatch.empty(), st2.mismatch);
  check(c.r, "simultaneous: arity " + std::to_string(top) + " vanishes on degree-0 inputs", van.nonzero == 0,
        van.nonzero ? std::to_string(van.nonzero) + " nonzero entries" : "");
  c.r["tables"] = {{"map deformations", maps}, {"simultaneous", sim}};
  c.r["evaluations"] = st.evaluated + high.evaluated + st2.evaluated + van.evaluated;
}

void lie_morphism_kind(Ctx& c) {
  const Problem& p = c.p;
  const LiePresentation u = p.lie("/u"), v = p.lie("/v");
  const Matrix phi = p.has("/phi") ? p.matrix("/phi", v.n, u.n) : Matrix(v.n, u.n);
  const LieTriple m{u, v, phi};
  const std::string& cmd = c.opt.command;
  if (cmd == "validate") {
    jacobi_check(c.r, "Jacobi U", u);
    jacobi_check(c.r, "Jacobi V", v);
    if (checks_pass(c.r)) {
      const VFData vd = lie_pair_vdata(u, v);
      add_checks(c.r, validate_vdata(vd), "pair V-data: ");
      add_checks(c.r, check_filtration(vd), "filtration: ");
    }
    const Entries d = lie_defects(u, v, phi);
    check(c.r, "phi is a morphism", nonzero(d).empty(), first_entry(d, u.labels, v.labels, "defect on "));
    return;
  }
  if (cmd == "residual") {
    require(p, "/phi", "a map \"phi\"");
    for (const auto* q : {&u, &v})
      if (const JacobiResult j = jacobi(*q); !j.ok)
        throw Failure{(q == &u ? "U" : "V") + std::string(" fails Jacobi on ") + triple_str(*q, j.triple)};
    const VectorFieldAlgebra L = pair_algebra(u.n, v.n);
    if (!p.has("/deformation")) {
      const Entries direct = lie_defects(u, v, phi);
      const VField gen = mc_residual(derived_algebra(lie_pair_vdata(u, v)), encode_map(phi, 0, u.n));
      VField stray;
      const Entries generic = quadratic_entries(gen, u.n, &stray);
      const bool agree = nonzero(direct) == nonzero(generic) && stray.is_zero();
      Json res;
      res["explicit"] = {{"description", "phi[e_i, e_j] - [phi e_i, phi e_j], i < j"},
                         {"zero", nonzero(direct).empty()},
                         {"entries", triples(direct)}};
      res["generic"] = {{"description", "Maurer-Cartan residual of the derived brackets"},
                        {"zero", gen.is_zero()},
                        {"value", to_string(L, gen)},
                        {"entries", triples(generic)}};
      res["agree"] = agree;
      c.r["residual"] = res;
      check(c.r, "paths agree", agree);
      check(c.r, "residual vanishes", gen.is_zero(), first_entry(direct, u.labels, v.labels, "defect on "));
      return;
    }
    const LieDeformation d = lie_deformation(p, m);
    if (!lie_is_morphism(u, v, phi)) throw Failure{"the base map is not a morphism; deformations need a base point"};
    const VField qtu = encode_lie(d.u, 0), qtv = encode_lie(d.v, u.n), pt = encode_map(d.phi, 0, u.n);
    const CubicResidual cub = cubic_residual(m, qtu, qtv, pt);
    const PairElem gen = mc_residual(big_algebra(lie_pair_twisted(m)), lift_L(qtu + qtv) + lift_a(pt));
    const LiePresentation nu = lie_sum(u, d.u), nv = lie_sum(v, d.v);
    Matrix nphi = phi + d.phi;
    const bool classical = jacobi(nu).ok && jacobi(nv).ok && lie_is_morphism(nu, nv, nphi);
    const bool blocks = part(gen, 0) == -(cub.jac_u + cub.jac_v) && part(gen, 1) == cub.mixed;
    Json res;
    res["explicit"] = {{"description", "Jacobi of both deformed brackets and the deformed morphism defect"},
                       {"zero", classical},
                       {"jacobi_u", to_string(L, cub.jac_u)},
                       {"jacobi_v", to_string(L, cub.jac_v)},
                       {"mixed", to_string(L, cub.mixed)}};
    res["generic"] = {{"description", "Maurer-Cartan residual in the big algebra twisted at phi"},
                      {"zero", gen.is_zero()},
                      {"structure_part", to_string(L, part(gen, 0))},
                      {"map_part", to_string(L, part(gen, 1))}};
    res["agree"] = blocks && classical == gen.is_zero();
    c.r["residual"] = res;
    check(c.r, "paths agree", blocks && classical == gen.is_zero());
    check(c.r, "residual vanishes", gen.is_zero(), gen.is_zero() ? "" : "deformed data is not a morphism of Lie algebras");
    return;
  }
  if (cmd == "brackets") {
    if (!lie_is_morphism(u, v, phi)) throw Failure{"phi is not a morphism; the tables are taken at a base point"};
    lie_tables(c, m);
    return;
  }
  // solve
  const SolverSettings s = p.solver();
  const VFData vd = lie_pair_vdata(u, v);
  const VectorFieldAlgebra& L = *vd.L;
  if (s.unknowns == "map") {
    std::vector<VField> basis;
    std::vector<std::string> names;
    for (const auto& key : vd.a_span(0)) {
      basis.emplace_back(key, Scalar(1));
      names.push_back(L.key_str(key));
    }
    const auto alg = derived_algebra(vd);
    auto echo = [&](const std::vector<Rational>& q) {
      VField x;
      for (size_t i = 0; i < q.size(); ++i) x.add_scaled(basis[i], Scalar(q[i]));
      Json j;
      j["schema"] = kProblemSchema;
      j["kind"] = "lie-morphism";
      j["u"] = lie_json(u);
      j["v"] = lie_json(v);
      j["phi"] = matrix_json(decode_map(x, u.n, v.n, 0, u.n));
      return j;
    };
    solve_system<VFKey>(c.opt, s, c.r, alg, basis, names, echo, c.exit_code);
    return;
  }
  if (!lie_is_morphism(u, v, phi)) throw Failure{"phi is not a morphism; simultaneous deformations need a base point"};
  const auto big = big_algebra(lie_pair_twisted(m));
  std::vector<PairElem> basis;
  std::vector<std::string> names;
  for (const auto& key : L.spanning_set(1))
    if (in_L_prime(key, u.n)) {
      basis.push_back(lift_L(VField(key, Scalar(1))));
      names.push_back(L.key_str(key) + "[1]");
    }
  for (const auto& key : vd.a_span(0)) {
    basis.push_back(lift_a(VField(key, Scalar(1))));
    names.push_back(L.key_str(key));
  }
  auto echo = [&](const std::vector<Rational>& q) {
    PairElem x = triple_point(m);
    for (size_t i = 0; i < q.size(); ++i) x.add_scaled(basis[i], Scalar(q[i]));
    LieTriple t = point_triple(x, u.n, v.n);
    t.u.labels = u.labels;
    t.v.labels = v.labels;
    Json j;
    j["schema"] = kProblemSchema;
    j["kind"] = "lie-morphism";
    j["u"] = lie_json(t.u);
    j["v"] = lie_json(t.v);
    j["phi"] = matrix_json(t.phi);
    return j;
  };
  solve_system<PairKey>(c.opt, s, c.r, big, basis, names, echo, c.exit_code);
}

// ------------------------------------------------------------ subalgebra

void subalgebra_kind(Ctx& c) {
  const Problem& p = c.p;
  const LiePresentation g = p.lie("/algebra");
  const std::vector<int> idx = p.indices("/u", g.n);
  if (idx.empty() || static_cast<int>(idx.size()) >= g.n) p.fail("/u", "U must be a nonempty proper subset");
  if (std::set<int>(idx.begin(), idx.end()).size() != idx.size()) p.fail("/u", "repeated index");
  const SubalgebraSplit s = SubalgebraSplit::partition(g, idx);
  const int du = s.dim_u, dv = s.dim_v();
  const Matrix phi = p.has("/phi") ? p.matrix("/phi", dv, du) : Matrix(dv, du);
  const VFData vd = subalgebra_vdata(s);
  const LiePresentation ad = s.adapted();
  const VectorFieldAlgebra& L = *vd.L;
  const std::string& cmd = c.opt.command;
  if (cmd != "validate" && !jacobi(g).ok) throw Failure{"the ambient bracket fails Jacobi"};
  c.r["curvature"] = vd.is_flat() ? "0" : to_string(L, vd.project(vd.delta));
  if (cmd == "validate") {
    jacobi_check(c.r, "Jacobi", g);
    if (checks_pass(c.r)) {
      add_checks(c.r, validate_vdata(vd), "V-data: ");
      add_checks(c.r, check_filtration(vd), "filtration: ");
      check(c.r, "graph of phi is a subalgebra", graph_is_subalgebra(s, phi));
    }
    return;
  }
  if (cmd == "residual") {
    require(p, "/phi", "a map \"phi\"");
    // [x_i, x_j] for x = e + phi(e), split along U + V in the adapted basis
    Entries direct;
    std::vector<std::string> ul, vl;
    for (int i = 0; i < du; ++i) ul.push_back(ad.labels[i]);
    for (int i = 0; i < dv; ++i) vl.push_back(ad.labels[du + i]);
    for (int i = 0; i < du; ++i)
      for (int j = i + 1; j < du; ++j) {
        auto lift = [&](int a) {
          Vec x(a);
          for (int r = 0; r < dv; ++r) x.add(du + r, phi(r, a));
          return x;
        };
        const Vec w = ad.bracket(lift(i), lift(j));
        Vec wu, wv;
        for (const auto& [k, cf] : w) (k < du ? wu : wv).add(k < du ? k : k - du, cf);
        Vec dlt = wv;
        dlt -= apply(phi, wu);
        for (const auto& [eta, cf] : dlt) direct[{i, j, eta}] = cf;
      }
    const VField gen = graph_residual(s, phi);
    VField stray;
    Entries generic = quadratic_entries(gen, du, &stray);
    // the residual is minus the closure defect
    Entries neg;
    for (const auto& [k, cf] : generic) neg[k] = -cf;
    const bool agree = nonzero(neg) == nonzero(direct) && stray.is_zero();
    Json res;
    res["explicit"] = {{"description", "V-part minus phi of the U-part of [x_i, x_j], x = e + phi(e)"},
                       {"zero", nonzero(direct).empty()},
                       {"entries", triples(direct)}};
    res["generic"] = {{"description", "curved Maurer-Cartan residual, curvature included"},
                      {"zero", gen.is_zero()},
                      {"value", to_string(L, gen)},
                      {"entries", triples(generic)}};
    res["agree"] = agree;
    c.r["residual"] = res;
    check(c.r, "paths agree", agree);
    check(c.r, "residual vanishes", gen.is_zero(), first_entry(direct, ul, vl, "closure defect on "));
    return;
  }
  if (cmd == "brackets") {
    std::vector<Input<VFKey>> in;
    for (int d = -1; d <= 1; ++d)
      for (const auto& key : vd.a_span(d)) in.push_back({L.key_str(key), VField(key, Scalar(1)), 1});
    const auto alg = derived_algebra(vd);
    const Show<VFKey> show = [&L](const VField& x) { return to_string(L, x); };
    Json t = Json::object();
    if (!vd.is_flat()) {
      Json e;
      e["inputs"] = Json::array();
      e["value"] = to_string(L, alg({}));
      t["arity 0"].push_back(e);
    }
    TableStats st;
    for (int n = 1; n <= c.opt.arity; ++n) {
      const Json tb = tabulate<VFKey>(alg, nullptr, in, n, arity_row(), show, st);
      for (const auto& [row, list] : tb.items()) t[row] = list;
    }
    c.r["tables"] = {{"derived brackets", t}};
    return;
  }
  throw InputError("kind \"subalgebra\" supports validate, residual and brackets");
}

// ------------------------------------------------------------- bialgebra

void bialgebra_checks(Json& r, const std::string& tag, const BialgebraPresentation& b) {
  jacobi_check(r, "Jacobi " + tag, b.lie);
  jacobi_check(r, "co-Jacobi " + tag, b.dual);
  const BialgebraEncoding e = encode_bialgebra(b);
  const BigBracketAlgebra sp = bialgebra_space(b.n());
  check(r, "compatibility " + tag, e.compatible(), e.compatible() ? "" : to_string(sp, e.residual));
}

void bialgebra_kind(Ctx& c) {
  const Problem& p = c.p;
  const BialgebraPresentation u = p.bialgebra("/u");
  const bool pair = p.has("/v");
  const std::string& cmd = c.opt.command;
  if (!pair) {
    if (cmd != "validate") throw InputError("kind \"bialgebra\" needs \"v\" and \"phi\" for " + cmd);
    bialgebra_checks(c.r, "U", u);
    return;
  }
  const BialgebraPresentation v = p.bialgebra("/v");
  const Matrix phi = p.has("/phi") ? p.matrix("/phi", v.n(), u.n()) : Matrix(v.n(), u.n());
  const int du = u.n(), dv = v.n(), n = du + dv;
  auto defects = [&] {
    Entries lie = lie_defects(u.lie, v.lie, phi);
    Entries co = lie_defects(v.dual, u.dual, phi.transpose());
    return std::make_pair(lie, co);
  };
  if (cmd == "validate") {
    bialgebra_checks(c.r, "U", u);
    bialgebra_checks(c.r, "V", v);
    if (checks_pass(c.r)) {
      const BBData vd = bialgebra_vdata(u, v);
      add_checks(c.r, validate_vdata(vd), "pair V-data: ");
      add_checks(c.r, check_filtration(vd), "filtration: ");
    }
    const auto [lie, co] = defects();
    check(c.r, "phi is a Lie morphism", nonzero(lie).empty(), first_entry(lie, u.lie.labels, v.lie.labels, "defect on "));
    std::vector<std::string> vd_l, ud_l;
    for (const auto& s : v.lie.labels) vd_l.push_back(s + "*");
    for (const auto& s : u.lie.labels) ud_l.push_back(s + "*");
    check(c.r, "phi* is a Lie morphism of the duals", nonzero(co).empty(), first_entry(co, vd_l, ud_l, "defect on "));
    return;
  }
  bialgebra_checks(c.r, "U", u);
  bialgebra_checks(c.r, "V", v);
  if (!checks_pass(c.r)) throw Failure{"an input is not a Lie bialgebra"};
  c.r["checks"] = Json::array();
  const BBData vd = bialgebra_vdata(u, v);
  const BigBracketAlgebra& L = *vd.L;
  if (cmd == "residual") {
    require(p, "/phi", "a map \"phi\"");
    const BBElem gen = mc_residual(derived_algebra(vd), encode_bimap(phi, L, du));
    Entries glie, gco;
    BBElem stray;
    for (const auto& [k, cf] : gen) {
      const auto [nx, nt] = L.bidegree(k);
      const auto ix = mono_indices(k);
      if (nx == 2 && nt == 1 && ix[1] < du && ix[2] >= n + du) glie[{ix[0], ix[1], ix[2] - n - du}] = cf;
      else if (nx == 1 && nt == 2 && ix[0] < du && ix[1] >= n + du) gco[{ix[1] - n - du, ix[2] - n - du, ix[0]}] = cf;
      else stray.add(k, cf);
    }
    const auto [lie, co] = defects();
    const bool agree = nonzero(lie) == nonzero(glie) && nonzero(co) == nonzero(gco) && stray.is_zero();
    Json res;
    res["explicit"] = {{"description", "Lie defect of phi and of its transpose on the duals"},
                       {"zero", nonzero(lie).empty() && nonzero(co).empty()},
                       {"lie", triples(lie)},
                       {"colie", triples(co)}};
    res["generic"] = {{"description", "Maurer-Cartan residual of the derived brackets, split by bidegree"},
                      {"zero", gen.is_zero()},
                      {"value", to_string(L, gen)}};
    res["agree"] = agree;
    c.r["residual"] = res;
    check(c.r, "paths agree", agree);
    check(c.r, "residual vanishes", gen.is_zero(), gen.is_zero() ? "" : to_string(L, gen));
    return;
  }
  if (cmd == "brackets") {
    const BBData tw = twist(vd, encode_bimap(phi, L, du));
    std::vector<Input<Mono>> in;
    for (int d = -1; d <= 1; ++d)
      for (const auto& key : tw.a_span(d)) in.push_back({L.key_str(key), BBElem(key, Scalar(1)), 1});
    const auto alg = derived_algebra(tw);
    const Show<Mono> show = [&L](const BBElem& x) { return to_string(L, x); };
    Json t = Json::object();
    TableStats st;
    for (int k = 1; k <= c.opt.arity; ++k) {
      const Json tb = tabulate<Mono>(alg, nullptr, in, k, arity_row(), show, st);
      for (const auto& [row, list] : tb.items()) t[row] = list;
    }
    c.r["tables"] = {{"map deformations", t}};
    return;
  }
  throw InputError("kind \"bialgebra\" supports validate, residual and brackets");
}

// ---------------------------------------------------------------- assoc

void assoc_check(Json& r, const std::string& name, const AssocPresentation& a) {
  const AssocEncoding e = encode_assoc(a);
  std::string w;
  if (!e.associative && e.witness) {
    const auto& t = *e.witness;
    w = "basis triple (" + a.labels[t[0]] + ", " + a.labels[t[1]] + ", " + a.labels[t[2]] + ")";
  }
  check(r, name, e.associative, w);
}

Entries assoc_defects(const AssocPresentation& u, const AssocPresentation& v, const Matrix& phi) {
  Entries e;
  for (int i = 0; i < u.n; ++i)
    for (int j = 0; j < u.n; ++j) {
      Vec d = v.product(column(phi, i), column(phi, j));
      d -= apply(phi, u.product(Vec(i), Vec(j)));
      for (const auto& [eta, cf] : d) e[{i, j, eta}] = cf;
    }
  return e;
}

bool assoc_ok(const AssocPresentation& a) { return encode_assoc(a).associative; }

void assoc_kind(Ctx& c) {
  const AssocPresentation a = c.p.assoc("/algebra");
  if (c.opt.command != "validate") throw InputError("kind \"assoc\" supports validate");
  assoc_check(c.r, "associativity", a);
  check(c.r, "encoding round trip", decode_product(encode_assoc(a).q, a.n) == a);
  if (checks_pass(c.r)) {
    const CoderData vd = assoc_vdata(a, a, c.opt.cutoff);
    add_checks(c.r, validate_vdata(vd), "pair V-data: ");
    add_checks(c.r, check_filtration(vd), "filtration: ");
  }
}

void assoc_tables(Ctx& c, const AssocTriple& t) {
  const int k = c.opt.arity, du = t.dim_u();
  const CoderData tw = assoc_twisted(t, c.opt.cutoff);
  const CoderivationAlgebra& L = *tw.L;
  const Show<CKey> show = [&L](const Coder& x) { return to_string(L, x); };
  std::vector<Input<CKey>> a_in;
  for (int d = -1; d <= 1; ++d)
    for (const auto& key : tw.a_span(d)) a_in.push_back({L.key_str(key), Coder(key, Scalar(1)), 1});
  const auto generic = derived_algebra(tw);
  Json maps = Json::object();
  TableStats st;
  for (int n = 1; n <= k; ++n) {
    const Json t = tabulate<CKey>(generic, nullptr, a_in, n, arity_row(), show, st);
    for (const auto& [row, list] : t.items()) maps[row] = list;
  }

  const auto big = big_algebra(tw);
  const auto closed = markl_brackets(t, c.opt.cutoff);
  std::vector<Input<CoderBigKey>> in;
  for (const auto& key : L.spanning_set(1))
    if (in_L_prime(key, du)) in.push_back({L.key_str(key) + "[1]", lift_L(Coder(key, Scalar(1))), 0});
  for (const auto& key : tw.a_span(0)) in.push_back({L.key_str(key), lift_a(Coder(key, Scalar(1))), 1});
  const Show<CoderBigKey> bshow = [&L](const CoderBigElem& x) {
    const Coder l = part(x, 0), a = part(x, 1);
    std::string s;
    if (!l.is_zero()) s = "(" + to_string(L, l) + ")[1]";
    if (!a.is_zero()) s += (s.empty() ? "" : " + ") + to_string(L, a);
    return s.empty() ? std::string("0") : s;
  };
  Json sim = Json::object();
  TableStats st2;
  const auto rows = pattern_rows(in);
  for (int n = 1; n <= k; ++n) {
    Json tb = tabulate<CoderBigKey>(big, &closed, in, n, rows, bshow, st2);
    if (!tb.empty()) sim["arity " + std::to_string(n)] = tb;
  }
  // a product has two slots: one structure input takes at most two maps
  TableStats van;
  if (c.opt.cutoff >= 4) tabulate<CoderBigKey>(big, nullptr, in, 4, rows, bshow, van, at_most_one_structure(in));
  check(c.r, "simultaneous: explicit formulas agree", st2.mismatch.empty(), st2.mismatch);
  if (c.opt.cutoff >= 4)
    check(c.r, "simultaneous: arity 4 vanishes on degree-0 inputs", van.nonzero == 0,
          van.nonzero ? std::to_string(van.nonzero) + " nonzero entries" : "");
  c.r["tables"] = {{"map deformations", maps}, {"simultaneous", sim}};
  c.r["evaluations"] = st.evaluated + st2.evaluated + van.evaluated;
}

void assoc_morphism_kind(Ctx& c) {
  const Problem& p = c.p;
  const AssocPresentation u = p.assoc("/u"), v = p.assoc("/v");
  const Matrix phi = p.has("/phi") ? p.matrix("/phi", v.n, u.n) : Matrix(v.n, u.n);
  const AssocTriple t{u, v, phi};
  const std::string& cmd = c.opt.command;
  const int cutoff = c.opt.cutoff;
  if (cmd == "validate") {
    assoc_check(c.r, "associativity U", u);
    assoc_check(c.r, "associativity V", v);
    if (checks_pass(c.r)) {
      const CoderData vd = assoc_vdata(u, v, cutoff);
      add_checks(c.r, validate_vdata(vd), "pair V-data: ");
      add_checks(c.r, check_filtration(vd), "filtration: ");
    }
    const Entries d = assoc_defects(u, v, phi);
    check(c.r, "phi is an algebra map", nonzero(d).empty(), first_entry(d, u.labels, v.labels, "defect on "));
    return;
  }
  if (!assoc_ok(u) || !assoc_ok(v)) throw Failure{"an input algebra is not associative"};
  if (cmd == "residual") {
    require(p, "/phi", "a map \"phi\"");
    const CoderData vd = assoc_vdata(u, v, cutoff);
    const CoderivationAlgebra& L = *vd.L;
    if (!p.has("/deformation")) {
      const Entries direct = assoc_defects(u, v, phi);
      const Coder gen = mc_residual(derived_algebra(vd), encode_amap(phi, L, u.n));
      Entries generic;
      Coder stray;
      for (const auto& [k, cf] : gen) {
        if (k.in.size() == 2 && k.in[0] < u.n && k.in[1] < u.n && k.out >= u.n) generic[{k.in[0], k.in[1], k.out - u.n}] = cf;
        else stray.add(k, cf);
      }
      const bool agree = nonzero(direct) == nonzero(generic) && stray.is_zero();
      Json res;
      res["explicit"] = {{"description", "phi(e_i) phi(e_j) - phi(e_i e_j)"},
                         {"zero", nonzero(direct).empty()},
                         {"entries", triples(direct)}};
      res["generic"] = {{"description", "Maurer-Cartan residual of the derived brackets"},
                        {"zero", gen.is_zero()},
                        {"value", to_string(L, gen)},
                        {"entries", triples(generic)}};
      res["agree"] = agree;
      c.r["residual"] = res;
      check(c.r, "paths agree", agree);
      check(c.r, "residual vanishes", gen.is_zero(), first_entry(direct, u.labels, v.labels, "defect on "));
      return;
    }
    p.allow_keys("/deformation", {"u", "v", "phi"});
    if (!nonzero(assoc_defects(u, v, phi)).empty()) throw Failure{"the base map is not an algebra map"};
    const AssocPresentation ut = p.has("/deformation/u") ? p.assoc_products("/deformation/u", u.n) : AssocPresentation(u.n);
    const AssocPresentation vt = p.has("/deformation/v") ? p.assoc_products("/deformation/v", v.n) : AssocPresentation(v.n);
    const Matrix pt = p.has("/deformation/phi") ? p.matrix("/deformation/phi", v.n, u.n) : Matrix(v.n, u.n);
    const CoderData tw = assoc_twisted(t, cutoff);
    const CoderBigElem gen = mc_residual(big_algebra(tw), lift_L(encode_product(ut, L, 0) + encode_product(vt, L, u.n)) +
                                                              lift_a(encode_amap(pt, L, u.n)));
    const AssocPresentation nu = assoc_sum(u, ut), nv = assoc_sum(v, vt);
    const Matrix nphi = phi + pt;
    const bool classical = assoc_ok(nu) && assoc_ok(nv) && nonzero(assoc_defects(nu, nv, nphi)).empty();
    Json res;
    res["explicit"] = {{"description", "associativity of both deformed products and the deformed map defect"},
                       {"zero", classical}};
    res["generic"] = {{"description", "Maurer-Cartan residual in the big algebra twisted at phi"},
                      {"zero", gen.is_zero()},
                      {"structure_part", to_string(L, part(gen, 0))},
                      {"map_part", to_string(L, part(gen, 1))}};
    res["agree"] = classical == gen.is_zero();
    c.r["residual"] = res;
    check(c.r, "paths agree", classical == gen.is_zero());
    check(c.r, "residual vanishes", gen.is_zero(), gen.is_zero() ? "" : "deformed data is not an algebra map");
    return;
  }
  if (cmd == "brackets") {
    if (!nonzero(assoc_defects(u, v, phi)).empty()) throw Failure{"phi is not an algebra map; tables need a base point"};
    assoc_tables(c, t);
    return;
  }
  const SolverSettings s = p.solver();
  if (s.unknowns != "map") p.fail("/solver/unknowns", "assoc-morphism solves for the map only");
  const CoderData vd = assoc_vdata(u, v, cutoff);
  const CoderivationAlgebra& L = *vd.L;
  std::vector<Coder> basis;
  std::vector<std::string> names;
  for (const auto& key : vd.a_span(0)) {
    basis.emplace_back(key, Scalar(1));
    names.push_back(L.key_str(key));
  }
  auto echo = [&](const std::vector<Rational>& q) {
    Matrix m(v.n, u.n);
    for (size_t i = 0; i < q.size(); ++i) {
      const CKey& key = basis[i].begin()->first;
      m(key.out - u.n, key.in[0]) += Scalar(q[i]);
    }
    Json j;
    j["schema"] = kProblemSchema;
    j["kind"] = "assoc-morphism";
    j["u"] = assoc_json(u);
    j["v"] = assoc_json(v);
    j["phi"] = matrix_json(m);
    return j;
  };
  solve_system<CKey>(c.opt, s, c.r, derived_algebra(vd), basis, names, echo, c.exit_code);
}

// ------------------------------------------------------- L-infinity kinds

int top_arity(const LinfPresentation& p) {
  int k = 0;
  for (int a = 0; a <= p.max_arity(); ++a)
    if (!p.m[a].is_zero()) k = a;
  return k;
}

void require_within(const LinfPresentation& p, int cutoff, const std::string& what) {
  if (top_arity(p) > cutoff)
    throw CutoffOverflow(what + " has a bracket of arity " + std::to_string(top_arity(p)) + " beyond the cutoff " +
                         std::to_string(cutoff));
}

bool curved(const LinfPresentation& p) { return !p.m.empty() && !p.m[0].is_zero(); }

std::vector<MultilinearMap> padded(const LinfPresentation& p) {
  std::vector<MultilinearMap> m = p.m;
  if (m.size() < 2) m.emplace_back(1, p.space, p.space, 1, m.empty() ? Symmetry::graded_symmetric : m[0].symmetry());
  return m;
}

std::string word_str(const Word& w, const GradedSpace& s) {
  std::string r;
  for (int i : w) r += (r.empty() ? "" : ", ") + s.label[i];
  return "(" + r + ")";
}

Vec degree0_point(const Problem& p, const std::string& ptr, const GradedSpace& w) {
  const Vec x = p.vector(ptr, w.dim());
  for (const auto& [i, cf] : x)
    if (w.deg[i] != 0) p.fail(ptr + "/" + std::to_string(i), "a Maurer-Cartan point has degree 0");
  return x;
}

Json tables_json(const std::vector<MultilinearMap>& m, int from, int to, const GradedSpace& s) {
  Json t = Json::object();
  for (int k = from; k <= to && k < static_cast<int>(m.size()); ++k) {
    Json rows = Json::array();
    for (const auto& [in, val] : m[k].table())
      rows.push_back({{"inputs", word_str(in, s)}, {"value", vec_str(val, s.label)}});
    if (!rows.empty()) t["arity " + std::to_string(k)] = rows;
  }
  return t;
}

// generalized Jacobi over every sorted word of length <= cutoff
void relations_check(Json& r, const std::string& name, const LInftyAlg<int>& alg, const GradedSpace& w, int cutoff) {
  const CoderivationAlgebra words(w, Flavor::symmetric, false, cutoff, Overflow::quotient);
  std::string witness;
  long count = 0;
  for (int n = 1; n <= cutoff && witness.empty(); ++n)
    for (const Word& word : words.words(n)) {
      std::vector<Vec> xs;
      for (int l : word) xs.emplace_back(l);
      const Vec res = relation_residual(alg, xs);
      ++count;
      if (!res.is_zero()) {
        witness = "inputs " + word_str(word, w) + ": " + vec_str(res, w.label);
        break;
      }
    }
  check(r, name, witness.empty(), witness);
  r["relation_words"] = count;
}

void linf_kind(Ctx& c) {
  const Problem& p = c.p;
  const LinfPresentation s = p.structure("/structure", Symmetry::graded_symmetric);
  const GradedSpace& w = s.space;
  const int cutoff = c.opt.cutoff;
  const bool cv = curved(s);
  const auto direct_alg = algebra_from_maps("direct", padded(s), cv);
  const std::string& cmd = c.opt.command;
  if (cmd == "validate") {
    require_within(s, cutoff, "the structure");
    relations_check(c.r, "L-infinity relations", direct_alg, w, cutoff);
    if (!cv) {
      const CoderivationAlgebra red(w, Flavor::symmetric, false, cutoff, Overflow::quotient);
      const Coder th = encode_linf(s, red);
      const Coder sq = bracket(red, th, th);
      check(c.r, "[theta, theta] = 0", sq.is_zero(), sq.is_zero() ? "" : to_string(red, sq));
      if (sq.is_zero()) {
        const KeyliRecovery k = keyli_recover(red, th);
        std::string mm;
        for (int a : k.mismatched) mm += (mm.empty() ? "arity " : ", ") + std::to_string(a);
        check(c.r, "derived brackets recover the structure", k.exact(), mm);
      }
    }
    return;
  }
  if (cmd == "residual") {
    require(p, "/phi", "a degree-0 point \"phi\"");
    const Vec x = degree0_point(p, "/phi", w);
    const Vec direct = mc_residual(direct_alg, x);
    Json res;
    res["explicit"] = {{"description", "sum over n of m_n(phi, ..., phi) / n!"},
                       {"zero", direct.is_zero()},
                       {"value", vec_str(direct, w.label)}};
    bool agree = true;
    if (!cv) {
      require_within(s, cutoff, "the structure");
      const auto vd = pair_vdata(w, cutoff);
      const CoderivationAlgebra red(w, Flavor::symmetric, false, cutoff, Overflow::quotient);
      const auto big = pair_residual(vd, encode_linf(s, red), x);
      Vec a;
      for (const auto& [k, cf] : part(big, 1))
        if (k.in.empty()) a.add(k.out, cf);
        else agree = false;
      const Coder lpart = part(big, 0);
      agree = agree && a == direct;
      res["generic"] = {{"description", "Maurer-Cartan residual of (J theta[1], alpha_phi) in the big algebra"},
                        {"zero", big.is_zero()},
                        {"value", vec_str(a, w.label)},
                        {"structure_part", to_string(*vd.L, lpart)}};
      if (!lpart.is_zero()) check(c.r, "structure squares to zero", false, to_string(*vd.L, lpart));
    } else {
      res["generic"] = {{"description", "not available for curved structures"}};
    }
    res["agree"] = agree;
    c.r["residual"] = res;
    check(c.r, "paths agree", agree);
    check(c.r, "residual vanishes", direct.is_zero(), vec_str(direct, w.label));
    return;
  }
  if (cmd == "brackets") {
    if (cv) throw InputError("derived-bracket recovery needs an uncurved structure");
    require_within(s, cutoff, "the structure");
    const CoderivationAlgebra red(w, Flavor::symmetric, false, cutoff, Overflow::quotient);
    const KeyliRecovery k = keyli_recover(red, encode_linf(s, red), c.opt.arity);
    std::string mm;
    for (int a : k.mismatched) mm += (mm.empty() ? "arity " : ", ") + std::to_string(a);
    check(c.r, "derived brackets recover the structure", k.exact(), mm);
    c.r["tables"] = {{"recovered", tables_json(k.recovered, 1, c.opt.arity, w)}};
    return;
  }
  const SolverSettings st = p.solver();
  std::vector<Vec> basis;
  std::vector<std::string> names;
  for (int i : w.basis_of_degree(0)) {
    basis.emplace_back(i);
    names.push_back(w.label[i]);
  }
  if (basis.empty()) throw InputError("the space has no degree-0 part to solve in");
  auto echo = [&](const std::vector<Rational>& q) {
    Json j = p.doc();
    j.erase("solver");
    Json pt = Json::array();
    Vec x;
    for (size_t i = 0; i < q.size(); ++i) x.add(basis[i].begin()->first, Scalar(q[i]));
    for (int i = 0; i < w.dim(); ++i) pt.push_back(x.coeff(i).str());
    j["phi"] = pt;
    return j;
  };
  solve_system<int>(c.opt, st, c.r, direct_alg, basis, names, echo, c.exit_code);
}

void linf_morphism_kind(Ctx& c) {
  const Problem& p = c.p;
  const LinfPresentation u = p.structure("/u", Symmetry::graded_symmetric);
  const LinfPresentation v = p.structure("/v", Symmetry::graded_symmetric);
  if (curved(u) || curved(v)) throw InputError("morphisms are handled for uncurved structures only");
  const std::vector<MultilinearMap> phi = p.has("/phi") ? p.lmap("/phi", u.space, v.space) : std::vector<MultilinearMap>{};
  const int cutoff = c.opt.cutoff;
  require_within(u, cutoff, "U");
  require_within(v, cutoff, "V");
  if (static_cast<int>(phi.size()) - 1 > cutoff) throw CutoffOverflow("a component of phi is beyond the cutoff");
  const std::string& cmd = c.opt.command;
  if (cmd == "validate") {
    for (const auto* q : {&u, &v}) {
      const CoderivationAlgebra red(q->space, Flavor::symmetric, false, cutoff, Overflow::quotient);
      const Coder th = encode_linf(*q, red);
      const Coder sq = bracket(red, th, th);
      check(c.r, std::string("[theta, theta] = 0 on ") + (q == &u ? "U" : "V"), sq.is_zero(),
            sq.is_zero() ? "" : to_string(red, sq));
    }
    if (checks_pass(c.r)) {
      const auto vd = linf_vdata(u, v, cutoff);
      add_checks(c.r, validate_vdata(vd), "pair V-data: ");
      add_checks(c.r, check_filtration(vd), "filtration: ");
      const LinfMorphismResidual m = linf_morphism_residual(u, v, phi, cutoff);
      const CoderivationAlgebra L = linf_space(u.space, v.space, cutoff);
      check(c.r, "phi is a morphism", m.zero(), m.zero() ? "" : to_string(L, m.direct));
    }
    return;
  }
  if (cmd == "residual") {
    require(p, "/phi", "the components \"phi\"");
    const LinfMorphismResidual m = linf_morphism_residual(u, v, phi, cutoff);
    const CoderivationAlgebra L = linf_space(u.space, v.space, cutoff);
    Json res;
    res["explicit"] = {{"description", "sum Phi(mu(U_I) U_J) - sum_n 1/n! nu_n(Phi(U_I1), ..., Phi(U_In))"},
                       {"zero", m.direct.is_zero()},
                       {"value", to_string(L, m.direct)}};
    res["generic"] = {{"description", "Maurer-Cartan residual of the derived brackets (equals minus the explicit one)"},
                      {"zero", m.derived.is_zero()},
                      {"value", to_string(L, m.derived)}};
    res["agree"] = m.agree;
    c.r["residual"] = res;
    check(c.r, "paths agree", m.agree);
    check(c.r, "residual vanishes", m.zero(), m.zero() ? "" : to_string(L, m.direct));
    return;
  }
  throw InputError("kind \"linf-morphism\" supports validate and residual");
}

void ainf_kind(Ctx& c) {
  const Problem& p = c.p;
  const LinfPresentation s = p.structure("/structure", Symmetry::none);
  const GradedSpace& w = s.space;
  const int cutoff = c.opt.cutoff;
  require_within(s, cutoff, "the structure");
  const CoderivationAlgebra red(w, Flavor::tensor, false, cutoff, Overflow::quotient);
  const Coder th = encode_linf(s, red);
  const Coder sq = bracket(red, th, th);
  const std::string& cmd = c.opt.command;
  if (cmd == "validate") {
    check(c.r, "A-infinity relations ([theta, theta] = 0)", sq.is_zero(), sq.is_zero() ? "" : to_string(red, sq));
    if (sq.is_zero()) {
      const Symmetrized sym = symmetrize_ainf(red, th);
      LinfPresentation q(w);
      q.m = sym.m;
      relations_check(c.r, "symmetrized L-infinity relations", algebra_from_maps("symmetrized", padded(q)), w, cutoff);
    }
    return;
  }
  if (!sq.is_zero()) throw Failure{"the structure fails the A-infinity relations: " + to_string(red, sq)};
  const Symmetrized sym = symmetrize_ainf(red, th);
  if (cmd == "residual") {
    require(p, "/phi", "a degree-0 point \"phi\"");
    const Vec x = degree0_point(p, "/phi", w);
    Vec direct;
    for (int k = 1; k <= s.max_arity(); ++k)
      if (!s.m[k].is_zero()) direct += s.m[k].eval(std::vector<Vec>(k, x));
    const Vec gen = mc_residual(sym.alg, x);
    Json res;
    res["explicit"] = {{"description", "sum over n of m_n(phi, ..., phi)"},
                       {"zero", direct.is_zero()},
                       {"value", vec_str(direct, w.label)}};
    res["generic"] = {{"description", "Maurer-Cartan residual of the symmetrized derived brackets"},
                      {"zero", gen.is_zero()},
                      {"value", vec_str(gen, w.label)}};
    res["agree"] = gen == direct;
    c.r["residual"] = res;
    check(c.r, "paths agree", gen == direct);
    check(c.r, "residual vanishes", direct.is_zero(), vec_str(direct, w.label));
    return;
  }
  if (cmd == "brackets") {
    c.r["tables"] = {{"symmetrized", tables_json(sym.m, 1, c.opt.arity, w)}};
    return;
  }
  throw InputError("kind \"ainf\" supports validate, residual and brackets");
}

// -------------------------------------------------------------- text form

void render_value(std::ostringstream& os, const std::string& key, const Json& v, int indent) {
  const std::string pad(indent, ' ');
  if (v.is_object()) {
    os << pad << key << ":\n";
    for (const auto& [k, x] : v.items()) render_value(os, k, x, indent + 2);
  } else if (v.is_array()) {
    bool flat = std::all_of(v.begin(), v.end(), [](const Json& e) { return e.is_primitive(); });
    if (flat) {
      os << pad << key << ": [";
      for (size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << (v[i].is_string() ? v[i].get<std::string>() : v[i].dump());
      os << "]\n";
      return;
    }
    os << pad << key << ":\n";
    for (const auto& e : v) {
      if (e.is_object() && e.contains("inputs") && e.contains("value")) {
        std::string in;
        if (e["inputs"].is_string()) in = e["inputs"].get<std::string>();
        else
          for (const auto& x : e["inputs"]) in += (in.empty() ? "" : ", ") + x.get<std::string>();
        os << pad << "  {" << in << "} = " << e["value"].get<std::string>() << "\n";
      } else {
        os << pad << "  " << e.dump() << "\n";
      }
    }
  } else {
    os << pad << key << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
  }
}

}  // namespace

// ================================================================= public

Outcome run_on(const Options& opt, const Problem& problem) {
  Outcome o;
  Json& r = o.report;
  r["schema"] = kReportSchema;
  r["command"] = opt.command;
  r["kind"] = problem.kind();
  r["truncation"] = {{"cutoff", opt.cutoff}, {"arity", opt.arity}};
  r["checks"] = Json::array();
  const auto t0 = std::chrono::steady_clock::now();
  Ctx c{opt, problem, r};
  try {
    if (opt.command == "brackets" && opt.arity > opt.cutoff)
      throw WindowExceeded("arity window " + std::to_string(opt.arity) + " exceeds the cutoff " +
                           std::to_string(opt.cutoff));
    if (opt.command == "brackets" && opt.arity < 1) throw InputError("the arity window must be at least 1");
    if (opt.command == "solve" && problem.kind() != "lie-morphism" && problem.kind() != "assoc-morphism" &&
        problem.kind() != "linf")
      throw InputError("solve supports the kinds lie-morphism, assoc-morphism and linf");
    const std::string& k = problem.kind();
    if (k == "lie") lie_kind(c);
    else if (k == "lie-morphism") lie_morphism_kind(c);
    else if (k == "subalgebra") subalgebra_kind(c);
    else if (k == "bialgebra") bialgebra_kind(c);
    else if (k == "assoc") assoc_kind(c);
    else if (k == "assoc-morphism") assoc_morphism_kind(c);
    else if (k == "linf") linf_kind(c);
    else if (k == "linf-morphism") linf_morphism_kind(c);
    else ainf_kind(c);
    if (c.exit_code == kPass && !checks_pass(r)) c.exit_code = kMathFailure;
  } catch (const Failure& f) {
    r["error"] = f.witness;
    c.exit_code = kMathFailure;
  } catch (const InputError& e) {
    r["error"] = e.what();
    c.exit_code = kInputError;
  } catch (const NotMaurerCartan& e) {
    r["error"] = e.what();
    c.exit_code = kMathFailure;
  } catch (const CutoffOverflow& e) {
    r["error"] = e.what();
    c.exit_code = kTruncation;
  } catch (const UnverifiableTruncation& e) {
    r["error"] = e.what();
    c.exit_code = kTruncation;
  } catch (const WindowExceeded& e) {
    r["error"] = e.what();
    c.exit_code = kTruncation;
  } catch (const SeriesDivergence& e) {
    r["error"] = e.what();
    c.exit_code = kTruncation;
  } catch (const std::invalid_argument& e) {
    r["error"] = e.what();
    c.exit_code = kMathFailure;
  } catch (const std::domain_error& e) {
    r["error"] = e.what();
    c.exit_code = kMathFailure;
  } catch (const std::exception& e) {
    r["error"] = std::string("internal error: ") + e.what();
    c.exit_code = kInputError;
  }
  if (r["checks"].empty()) r.erase("checks");
  o.exit_code = c.exit_code;
  r["verdict"] = o.exit_code == kPass ? "pass" : o.exit_code == kMathFailure ? "fail" : "error";
  r["exit_code"] = o.exit_code;
  if (opt.timing) {
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r["timing"] = {{"seconds", fixed12(sec)}};
  }
  return o;
}

Outcome run(const Options& opt) {
  try {
    const Problem p = Problem::load(opt.file);
    return run_on(opt, p);
  } catch (const InputError& e) {
    Outcome o;
    o.report["schema"] = kReportSchema;
    o.report["command"] = opt.command;
    o.report["error"] = e.what();
    o.report["verdict"] = "error";
    o.report["exit_code"] = kInputError;
    o.exit_code = kInputError;
    return o;
  }
}

std::string render(const Json& report, Format format) {
  if (format == Format::json) return report.dump() + "\n";
  if (format == Format::pretty) return report.dump(2) + "\n";
  std::ostringstream os;
  os << "dbr " << report.value("command", std::string("?"));
  if (report.contains("kind")) os << " (" << report["kind"].get<std::string>() << ")";
  os << "\n";
  for (const auto& [k, v] : report.items()) {
    if (k == "schema" || k == "command" || k == "kind") continue;
    if (k == "checks") {
      os << "checks:\n";
      for (const auto& c : v) {
        os << "  " << (c["passed"].get<bool>() ? "PASS" : "FAIL") << "  " << c["name"].get<std::string>();
        if (c.contains("witness")) os << "  [" << c["witness"].get<std::string>() << "]";
        os << "\n";
      }
      continue;
    }
    render_value(os, k, v, 0);
  }
  return os.str();
}

}  // namespace dbr::cli
