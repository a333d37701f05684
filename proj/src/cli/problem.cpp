#include "cli/problem.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace dbr::cli {

namespace {

const std::map<std::string, std::vector<std::string>> kKindKeys = {
    {"lie", {"algebra", "deformation"}},
    {"lie-morphism", {"u", "v", "phi", "deformation", "solver"}},
    {"subalgebra", {"algebra", "u", "phi"}},
    {"bialgebra", {"u", "v", "phi"}},
    {"assoc", {"algebra"}},
    {"assoc-morphism", {"u", "v", "phi", "deformation", "solver"}},
    {"linf", {"structure", "phi", "solver"}},
    {"linf-morphism", {"u", "v", "phi"}},
    {"ainf", {"structure", "phi"}},
};

std::string escape_token(const std::string& s) {
  std::string r;
  for (char c : s) {
    if (c == '~') r += "~0";
    else if (c == '/') r += "~1";
    else r += c;
  }
  return r;
}

// Records the line and column where every value starts, keyed by JSON
// pointer. Runs only on text that already parsed.
class PositionScanner {
 public:
  explicit PositionScanner(const std::string& t) : t_(t) {}

  std::map<std::string, std::pair<int, int>> run() {
    value("");
    return std::move(out_);
  }

 private:
  const std::string& t_;
  size_t i_ = 0;
  int line_ = 1, col_ = 1;
  std::map<std::string, std::pair<int, int>> out_;

  void step() {
    if (t_[i_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++i_;
  }
  void ws() {
    while (i_ < t_.size() && std::isspace(static_cast<unsigned char>(t_[i_]))) step();
  }
  std::string string() {
    std::string s;
    step();  // opening quote
    while (i_ < t_.size() && t_[i_] != '"') {
      if (t_[i_] == '\\') {
        step();
        if (i_ < t_.size()) s += t_[i_];
      } else {
        s += t_[i_];
      }
      step();
    }
    step();
    return s;
  }
  void value(const std::string& ptr) {
    ws();
    if (i_ >= t_.size()) return;
    out_[ptr] = {line_, col_};
    const char c = t_[i_];
    if (c == '{') {
      step();
      ws();
      if (t_[i_] == '}') return step();
      while (true) {
        ws();
        const std::string key = string();
        ws();
        step();  // ':'
        value(ptr + "/" + escape_token(key));
        ws();
        const char d = t_[i_];
        step();
        if (d == '}') return;
      }
    }
    if (c == '[') {
      step();
      ws();
      if (t_[i_] == ']') return step();
      for (int k = 0;; ++k) {
        value(ptr + "/" + std::to_string(k));
        ws();
        const char d = t_[i_];
        step();
        if (d == ']') return;
      }
    }
    if (c == '"') {
      string();
      return;
    }
    while (i_ < t_.size() && !std::isspace(static_cast<unsigned char>(t_[i_])) && t_[i_] != ',' && t_[i_] != ']' &&
           t_[i_] != '}')
      step();
  }
};

std::pair<int, int> line_col(const std::string& text, size_t byte) {
  int line = 1, col = 1;
  for (size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

std::string idx(const std::string& ptr, size_t k) { return ptr + "/" + std::to_string(k); }

}  // namespace

Problem Problem::parse(const std::string& text, const std::string& source) {
  Problem p;
  p.source_ = source;
  auto err = [&](int line, int col, const std::string& what) {
    return InputError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + what);
  };
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) throw err(1, 1, "schema error: empty document");
  try {
    p.doc_ = Json::parse(text);
  } catch (const Json::parse_error& e) {
    // e.byte is one past the offending character
    const auto [l, c] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
    std::string msg = e.what();
    const auto cut = msg.find("syntax error");
    if (cut != std::string::npos) msg = msg.substr(cut);
    throw err(l, c, "parse error: " + msg);
  }
  p.pos_ = PositionScanner(text).run();
  if (!p.doc_.is_object()) p.fail("", "the document must be an object");
  if (!p.doc_.contains("schema")) p.fail("", "missing \"schema\"");
  if (!p.doc_["schema"].is_string() || p.doc_["schema"] != kProblemSchema)
    p.fail("/schema", std::string("unsupported schema, expected \"") + kProblemSchema + "\"");
  if (!p.doc_.contains("kind") || !p.doc_["kind"].is_string()) p.fail("", "missing string \"kind\"");
  p.kind_ = p.doc_["kind"].get<std::string>();
  const auto it = kKindKeys.find(p.kind_);
  if (it == kKindKeys.end()) p.fail("/kind", "unknown kind \"" + p.kind_ + "\"");
  std::vector<std::string> keys = it->second;
  keys.insert(keys.end(), {"schema", "kind", "comment"});
  p.allow_keys("", keys);
  return p;
}

Problem Problem::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ":0:0: cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

bool Problem::has(const std::string& ptr) const { return doc_.contains(Json::json_pointer(ptr)); }

std::pair<int, int> Problem::position(const std::string& ptr) const {
  std::string p = ptr;
  while (true) {
    const auto it = pos_.find(p);
    if (it != pos_.end()) return it->second;
    if (p.empty()) return {1, 1};
    p = p.substr(0, p.rfind('/'));
  }
}

void Problem::fail(const std::string& ptr, const std::string& msg) const {
  const auto [l, c] = position(ptr);
  throw InputError(source_ + ":" + std::to_string(l) + ":" + std::to_string(c) + ": schema error at " +
                   (ptr.empty() ? "/" : ptr) + ": " + msg);
}

const Json& Problem::at(const std::string& ptr) const {
  if (!has(ptr)) fail(ptr, "missing value");
  return doc_.at(Json::json_pointer(ptr));
}

const Json& Problem::array_at(const std::string& ptr) const {
  const Json& j = at(ptr);
  if (!j.is_array()) fail(ptr, "expected an array");
  return j;
}

void Problem::allow_keys(const std::string& ptr, const std::vector<std::string>& keys) const {
  const Json& j = at(ptr);
  if (!j.is_object()) fail(ptr, "expected an object");
  for (const auto& [k, v] : j.items())
    if (std::find(keys.begin(), keys.end(), k) == keys.end())
      fail(ptr + "/" + escape_token(k), "unexpected key \"" + k + "\"");
}

int Problem::integer(const std::string& ptr) const {
  const Json& j = at(ptr);
  if (!j.is_number_integer()) fail(ptr, "expected an integer");
  return j.get<int>();
}

Scalar Problem::scalar(const std::string& ptr) const {
  const Json& j = at(ptr);
  if (j.is_number_integer()) return Scalar(j.get<long>());
  if (!j.is_string()) fail(ptr, "scalars are exact: an integer or a string \"p/q\"");
  try {
    return Scalar::parse(j.get<std::string>());
  } catch (const std::invalid_argument& e) {
    fail(ptr, e.what());
  }
}

std::vector<int> Problem::indices(const std::string& ptr, int bound) const {
  const Json& j = array_at(ptr);
  std::vector<int> r;
  for (size_t k = 0; k < j.size(); ++k) {
    const int v = integer(idx(ptr, k));
    if (v < 0 || v >= bound) fail(idx(ptr, k), "index " + std::to_string(v) + " out of range [0, " +
                                                   std::to_string(bound) + ")");
    r.push_back(v);
  }
  return r;
}

Matrix Problem::matrix(const std::string& ptr, int rows, int cols) const {
  const Json& j = array_at(ptr);
  if (static_cast<int>(j.size()) != rows)
    fail(ptr, "expected " + std::to_string(rows) + " rows, got " + std::to_string(j.size()));
  Matrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const std::string rp = idx(ptr, r);
    const Json& row = array_at(rp);
    if (static_cast<int>(row.size()) != cols)
      fail(rp, "expected " + std::to_string(cols) + " columns, got " + std::to_string(row.size()));
    for (int c = 0; c < cols; ++c) m(r, c) = scalar(idx(rp, c));
  }
  return m;
}

Vec Problem::vector(const std::string& ptr, int dim) const {
  const Json& j = array_at(ptr);
  if (static_cast<int>(j.size()) != dim)
    fail(ptr, "expected " + std::to_string(dim) + " coordinates, got " + std::to_string(j.size()));
  Vec v;
  for (int i = 0; i < dim; ++i) v.add(i, scalar(idx(ptr, i)));
  return v;
}

// entries [[i, j], k, "c"] with indices below dim
void Problem::fill_table(const std::string& ptr, int dim,
                         const std::function<void(int, int, int, const Scalar&)>& put) const {
  const Json& list = array_at(ptr);
  for (size_t e = 0; e < list.size(); ++e) {
    const std::string ep = idx(ptr, e);
    const Json& entry = array_at(ep);
    if (entry.size() != 3) fail(ep, "an entry is [[i, j], k, \"c\"]");
    const std::vector<int> in = indices(idx(ep, 0), dim);
    if (in.size() != 2) fail(idx(ep, 0), "expected two input indices");
    const int out = integer(idx(ep, 1));
    if (out < 0 || out >= dim) fail(idx(ep, 1), "output index out of range");
    try {
      put(in[0], in[1], out, scalar(idx(ep, 2)));
    } catch (const std::invalid_argument& ex) {
      fail(ep, ex.what());
    }
  }
}

LiePresentation Problem::lie_brackets(const std::string& ptr, int dim) const {
  LiePresentation p(dim);
  std::set<std::tuple<int, int, int>> seen;
  fill_table(ptr, dim, [&](int i, int j, int k, const Scalar& c) {
    if (i == j) {
      if (!c.is_zero()) throw std::invalid_argument("[e_i, e_i] must vanish");
      return;
    }
    if (!seen.insert({std::min(i, j), std::max(i, j), k}).second)
      throw std::invalid_argument("bracket entry given twice");
    p(i, j, k) = c;
    p(j, i, k) = -c;
  });
  return p;
}

LiePresentation Problem::lie(const std::string& ptr) const {
  allow_keys(ptr, {"dim", "labels", "brackets"});
  const int n = integer(ptr + "/dim");
  if (n < 1 || n > 8) fail(ptr + "/dim", "dimension must be in 1..8");
  LiePresentation p = has(ptr + "/brackets") ? lie_brackets(ptr + "/brackets", n) : LiePresentation(n);
  if (has(ptr + "/labels")) {
    const Json& l = array_at(ptr + "/labels");
    if (static_cast<int>(l.size()) != n) fail(ptr + "/labels", "one label per basis vector");
    for (size_t k = 0; k < l.size(); ++k) {
      if (!l[k].is_string()) fail(idx(ptr + "/labels", k), "labels are strings");
      p.labels[k] = l[k].get<std::string>();
    }
  }
  return p;
}

AssocPresentation Problem::assoc_products(const std::string& ptr, int dim) const {
  AssocPresentation p(dim);
  std::set<std::tuple<int, int, int>> seen;
  fill_table(ptr, dim, [&](int i, int j, int k, const Scalar& c) {
    if (!seen.insert({i, j, k}).second) throw std::invalid_argument("product entry given twice");
    p(i, j, k) = c;
  });
  return p;
}

AssocPresentation Problem::assoc(const std::string& ptr) const {
  allow_keys(ptr, {"dim", "labels", "products"});
  const int n = integer(ptr + "/dim");
  if (n < 1 || n > 6) fail(ptr + "/dim", "dimension must be in 1..6");
  AssocPresentation p = has(ptr + "/products") ? assoc_products(ptr + "/products", n) : AssocPresentation(n);
  if (has(ptr + "/labels")) {
    const Json& l = array_at(ptr + "/labels");
    if (static_cast<int>(l.size()) != n) fail(ptr + "/labels", "one label per basis vector");
    for (size_t k = 0; k < l.size(); ++k) {
      if (!l[k].is_string()) fail(idx(ptr + "/labels", k), "labels are strings");
      p.labels[k] = l[k].get<std::string>();
    }
  }
  return p;
}

BialgebraPresentation Problem::bialgebra(const std::string& ptr) const {
  allow_keys(ptr, {"lie", "cobracket"});
  LiePresentation l = lie(ptr + "/lie");
  LiePresentation d = has(ptr + "/cobracket") ? lie_brackets(ptr + "/cobracket", l.n) : LiePresentation(l.n);
  return BialgebraPresentation(std::move(l), std::move(d));
}

GradedSpace Problem::space(const std::string& ptr, const std::string& name) const {
  allow_keys(ptr, {"degrees", "labels"});
  const Json& d = array_at(ptr + "/degrees");
  if (d.empty() || d.size() > 6) fail(ptr + "/degrees", "dimension must be in 1..6");
  std::vector<int> degs;
  for (size_t k = 0; k < d.size(); ++k) degs.push_back(integer(idx(ptr + "/degrees", k)));
  std::vector<std::string> labels;
  if (has(ptr + "/labels")) {
    const Json& l = array_at(ptr + "/labels");
    if (l.size() != d.size()) fail(ptr + "/labels", "one label per basis vector");
    for (size_t k = 0; k < l.size(); ++k) {
      if (!l[k].is_string()) fail(idx(ptr + "/labels", k), "labels are strings");
      labels.push_back(l[k].get<std::string>());
    }
  }
  return GradedSpace(name, degs, labels);
}

namespace {

// reads {"arity": k, "entries": [[[i..], o, "c"], ...]} blocks into maps
template <class Make>
void read_maps(const Problem& p, const std::string& ptr, int in_dim, int out_dim, bool allow_zero_arity,
               std::vector<MultilinearMap>& maps, Make make) {
  const Json& list = p.doc().at(Json::json_pointer(ptr));
  if (!list.is_array()) p.fail(ptr, "expected an array of maps");
  std::set<std::pair<Word, int>> seen;
  for (size_t b = 0; b < list.size(); ++b) {
    const std::string bp = idx(ptr, b);
    if (!list[b].is_object()) p.fail(bp, "expected an object");
    for (const auto& [k, v] : list[b].items())
      if (k != "arity" && k != "entries") p.fail(bp + "/" + escape_token(k), "unexpected key \"" + k + "\"");
    const int k = p.integer(bp + "/arity");
    if (k < (allow_zero_arity ? 0 : 1) || k > 8) p.fail(bp + "/arity", "arity out of range");
    while (static_cast<int>(maps.size()) <= k) maps.push_back(make(static_cast<int>(maps.size())));
    MultilinearMap& m = maps[k];
    const std::string lp = bp + "/entries";
    if (!p.has(lp) || !p.doc().at(Json::json_pointer(lp)).is_array()) p.fail(lp, "expected an array of entries");
    const Json& entries = p.doc().at(Json::json_pointer(lp));
    for (size_t e = 0; e < entries.size(); ++e) {
      const std::string ep = idx(lp, e);
      if (!entries[e].is_array() || entries[e].size() != 3) p.fail(ep, "an entry is [[i, ...], o, \"c\"]");
      const std::vector<int> in = p.indices(idx(ep, 0), in_dim);
      if (static_cast<int>(in.size()) != k) p.fail(idx(ep, 0), "expected " + std::to_string(k) + " inputs");
      const int o = p.integer(idx(ep, 1));
      if (o < 0 || o >= out_dim) p.fail(idx(ep, 1), "output index out of range");
      Word key = in;
      if (m.symmetry() == Symmetry::graded_symmetric) key = canonical_order(in, m.source().deg).second;
      if (!seen.insert({key, o}).second) p.fail(ep, "entry given twice (up to reordering)");
      try {
        m.add(in, o, p.scalar(idx(ep, 2)));
      } catch (const std::invalid_argument& ex) {
        p.fail(ep, ex.what());
      }
    }
  }
}

}  // namespace

LinfPresentation Problem::structure(const std::string& ptr, Symmetry sym) const {
  allow_keys(ptr, {"space", "maps"});
  LinfPresentation r;
  r.space = space(ptr + "/space", "W");
  const GradedSpace w = r.space;
  read_maps(*this, ptr + "/maps", w.dim(), w.dim(), sym == Symmetry::graded_symmetric, r.m,
            [&](int k) { return MultilinearMap(k, w, w, 1, sym); });
  if (r.m.empty()) r.m.emplace_back(0, w, w, 1, sym);
  return r;
}

std::vector<MultilinearMap> Problem::lmap(const std::string& ptr, const GradedSpace& u, const GradedSpace& v) const {
  std::vector<MultilinearMap> r;
  read_maps(*this, ptr, u.dim(), v.dim(), false, r,
            [&](int k) { return MultilinearMap(k, u, v, 0, Symmetry::graded_symmetric); });
  return r;
}

SolverSettings Problem::solver() const {
  const std::string sp = "/solver";
  if (!has(sp)) fail("", "this command needs \"solver\" settings");
  allow_keys(sp, {"unknowns", "start", "restarts", "spread", "seed", "tol", "max_iter", "max_den"});
  SolverSettings s;
  auto number = [&](const std::string& key) {
    const Json& j = at(sp + "/" + key);
    if (!j.is_number()) fail(sp + "/" + key, "expected a number");
    return j.get<double>();
  };
  if (has(sp + "/unknowns")) {
    const Json& u = at(sp + "/unknowns");
    if (!u.is_string() || (u != "map" && u != "all")) fail(sp + "/unknowns", "expected \"map\" or \"all\"");
    s.unknowns = u.get<std::string>();
  }
  if (has(sp + "/start")) {
    const Json& st = array_at(sp + "/start");
    for (size_t k = 0; k < st.size(); ++k) {
      const std::string kp = idx(sp + "/start", k);
      if (st[k].is_number()) s.start.push_back(st[k].get<double>());
      else s.start.push_back(scalar(kp).to_double());
    }
  }
  if (has(sp + "/restarts")) {
    s.restarts = integer(sp + "/restarts");
    if (s.restarts < 0 || s.restarts > 10000) fail(sp + "/restarts", "restarts out of range");
  }
  if (has(sp + "/spread")) s.spread = number("spread");
  if (has(sp + "/seed")) s.seed = static_cast<unsigned>(integer(sp + "/seed"));
  if (has(sp + "/tol")) s.tol = number("tol");
  if (has(sp + "/max_iter")) s.max_iter = integer(sp + "/max_iter");
  if (has(sp + "/max_den")) s.max_den = integer(sp + "/max_den");
  if (!(s.tol > 0)) fail(sp + "/tol", "tolerance must be positive");
  if (s.max_iter < 1) fail(sp + "/max_iter", "iteration budget must be positive");
  if (s.max_den < 1) fail(sp + "/max_den", "denominator bound must be positive");
  return s;
}

}  // namespace dbr::cli
