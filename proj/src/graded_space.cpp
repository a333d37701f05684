#include "dbr/graded_space.hpp"

#include <stdexcept>

namespace dbr {

GradedSpace::GradedSpace(std::string n, std::vector<int> degrees, std::vector<std::string> labels)
    : name(std::move(n)), deg(std::move(degrees)), label(std::move(labels)) {
  if (label.empty())
    for (int i = 0; i < dim(); ++i) label.push_back("e" + std::to_string(i + 1));
  if (label.size() != deg.size()) throw std::invalid_argument("GradedSpace: label count mismatch");
}

GradedSpace GradedSpace::concentrated(const std::string& name, int dim, int degree,
                                      const std::string& prefix) {
  std::vector<std::string> labels;
  for (int i = 0; i < dim; ++i) labels.push_back(prefix + std::to_string(i + 1));
  return GradedSpace(name, std::vector<int>(dim, degree), labels);
}

std::map<int, int> GradedSpace::dims() const {
  std::map<int, int> d;
  for (int x : deg) ++d[x];
  return d;
}

GradedSpace GradedSpace::shift(int k) const {
  GradedSpace s = *this;
  for (int& d : s.deg) d -= k;
  s.name = name + "[" + std::to_string(k) + "]";
  return s;
}

GradedSpace GradedSpace::direct_sum(const GradedSpace& other, const std::string& n) const {
  GradedSpace s = *this;
  s.deg.insert(s.deg.end(), other.deg.begin(), other.deg.end());
  s.label.insert(s.label.end(), other.label.begin(), other.label.end());
  s.name = n.empty() ? name + "+" + other.name : n;
  return s;
}

std::vector<int> GradedSpace::basis_of_degree(int d) const {
  std::vector<int> r;
  for (int i = 0; i < dim(); ++i)
    if (deg[i] == d) r.push_back(i);
  return r;
}

}  // namespace dbr
