#include "dbr/linfty.hpp"

namespace dbr {

LInftyAlg<int> algebra_from_maps(const std::string& name, const std::vector<MultilinearMap>& m, bool curved) {
  LInftyAlg<int> alg;
  alg.name = name;
  alg.curved = curved;
  if (m.empty()) throw std::invalid_argument("algebra_from_maps: no brackets");
  const GradedSpace space = m.front().target();
  for (size_t k = 0; k < m.size(); ++k) {
    if (m[k].arity() != static_cast<int>(k)) throw std::invalid_argument("algebra_from_maps: arity out of place");
    if (m[k].degree() != 1) throw std::invalid_argument("algebra_from_maps: brackets must have degree 1");
    if (!(m[k].target() == space)) throw std::invalid_argument("algebra_from_maps: mixed carriers");
  }
  alg.degree = [space](const int& i) { return space.deg.at(i); };
  alg.bracket = [m](const std::vector<Vec>& args) -> Vec {
    if (args.size() >= m.size()) return {};
    return m[args.size()].eval(args);
  };
  // every higher bracket is zero
  alg.mc_bound = static_cast<int>(m.size()) - 1;
  alg.gauge_bound = alg.mc_bound;
  return alg;
}

}  // namespace dbr
