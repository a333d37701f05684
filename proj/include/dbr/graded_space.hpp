#pragma once

#include <map>
#include <string>
#include <vector>

namespace dbr {

// Finite-dimensional graded space with a homogeneous basis.
struct GradedSpace {
  std::string name;
  std::vector<int> deg;
  std::vector<std::string> label;

  GradedSpace() = default;
  GradedSpace(std::string n, std::vector<int> degrees, std::vector<std::string> labels = {});

  static GradedSpace concentrated(const std::string& name, int dim, int degree,
                                  const std::string& prefix = "e");

  int dim() const { return static_cast<int>(deg.size()); }
  std::map<int, int> dims() const;
  // W[k]: a basis vector of degree d moves to degree d - k
  GradedSpace shift(int k) const;
  GradedSpace direct_sum(const GradedSpace& other, const std::string& name = "") const;
  std::vector<int> basis_of_degree(int d) const;

  bool operator==(const GradedSpace& o) const { return deg == o.deg; }
};

}  // namespace dbr
