#pragma once

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dbr/assoc_deform.hpp"
#include "dbr/bialgebra_deform.hpp"
#include "dbr/lie_deform.hpp"
#include "dbr/linf_coder.hpp"

namespace dbr::cli {

using Json = nlohmann::ordered_json;

inline constexpr const char* kProblemSchema = "dbr-problem/1";
inline constexpr const char* kReportSchema = "dbr-report/1";

// parse or schema error; what() carries "source:line:col: ..."
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SolverSettings {
  std::string unknowns = "map";  // "map" or "all" for the pair kinds
  std::vector<double> start;     // optional first seed
  int restarts = 50;
  double spread = 1.0;  // random seeds are uniform in [-spread, spread]
  unsigned seed = 0;
  double tol = 1e-10;
  int max_iter = 100;
  long max_den = 64;
};

// A validated problem file. Typed readers take JSON pointers and raise
// InputError with the line and column of the offending value.
class Problem {
 public:
  static Problem parse(const std::string& text, const std::string& source);
  static Problem load(const std::string& path);

  const std::string& kind() const { return kind_; }
  const std::string& source() const { return source_; }
  const Json& doc() const { return doc_; }
  bool has(const std::string& ptr) const;

  [[noreturn]] void fail(const std::string& ptr, const std::string& msg) const;
  std::pair<int, int> position(const std::string& ptr) const;

  int integer(const std::string& ptr) const;
  Scalar scalar(const std::string& ptr) const;
  std::vector<int> indices(const std::string& ptr, int bound) const;
  Matrix matrix(const std::string& ptr, int rows, int cols) const;
  Vec vector(const std::string& ptr, int dim) const;

  // {"dim", "labels"?, "brackets": [[[i, j], k, "c"], ...]}
  LiePresentation lie(const std::string& ptr) const;
  // a bare bracket list on a known dimension
  LiePresentation lie_brackets(const std::string& ptr, int dim) const;
  // {"dim", "labels"?, "products": [[[i, j], k, "c"], ...]}
  AssocPresentation assoc(const std::string& ptr) const;
  AssocPresentation assoc_products(const std::string& ptr, int dim) const;
  // {"lie": <lie>, "cobracket": [[[j, k], i, "c"], ...]}
  BialgebraPresentation bialgebra(const std::string& ptr) const;
  // {"degrees": [...], "labels"?}
  GradedSpace space(const std::string& ptr, const std::string& name) const;
  // {"space": <space>, "maps": [{"arity": k, "entries": [[[i..], o, "c"], ...]}]}
  LinfPresentation structure(const std::string& ptr, Symmetry sym) const;
  // components Phi_n: S^n U -> V of degree 0, same entry format
  std::vector<MultilinearMap> lmap(const std::string& ptr, const GradedSpace& u, const GradedSpace& v) const;

  SolverSettings solver() const;
  // schema error on any key of the object at ptr outside `keys`
  void allow_keys(const std::string& ptr, const std::vector<std::string>& keys) const;

 private:
  std::string source_, kind_;
  Json doc_;
  std::map<std::string, std::pair<int, int>> pos_;

  const Json& at(const std::string& ptr) const;
  const Json& array_at(const std::string& ptr) const;
  void fill_table(const std::string& ptr, int dim, const std::function<void(int, int, int, const Scalar&)>& put) const;
};

}  // namespace dbr::cli
