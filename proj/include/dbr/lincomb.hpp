#pragma once

#include <functional>
#include <map>
#include <utility>

#include "dbr/scalar.hpp"

namespace dbr {

// Finite linear combination of basis keys with exact coefficients.
// Zero coefficients are never stored, so equality is structural.
template <class K>
class LinComb {
 public:
  using key_type = K;
  using map_type = std::map<K, Scalar>;
  using const_iterator = typename map_type::const_iterator;

  LinComb() = default;
  explicit LinComb(const K& k, const Scalar& c = Scalar(1)) { add(k, c); }

  void add(const K& k, const Scalar& c) {
    if (c.is_zero()) return;
    auto [it, fresh] = t_.try_emplace(k, c);
    if (!fresh) {
      it->second += c;
      if (it->second.is_zero()) t_.erase(it);
    }
  }
  void set(const K& k, const Scalar& c) {
    if (c.is_zero())
      t_.erase(k);
    else
      t_[k] = c;
  }
  Scalar coeff(const K& k) const {
    auto it = t_.find(k);
    return it == t_.end() ? Scalar() : it->second;
  }
  bool contains(const K& k) const { return t_.count(k) != 0; }

  bool is_zero() const { return t_.empty(); }
  size_t size() const { return t_.size(); }
  const_iterator begin() const { return t_.begin(); }
  const_iterator end() const { return t_.end(); }
  const map_type& terms() const { return t_; }

  LinComb& operator+=(const LinComb& o) {
    for (const auto& [k, c] : o.t_) add(k, c);
    return *this;
  }
  LinComb& operator-=(const LinComb& o) {
    for (const auto& [k, c] : o.t_) add(k, -c);
    return *this;
  }
  LinComb& operator*=(const Scalar& s) {
    if (s.is_zero()) {
      t_.clear();
      return *this;
    }
    if (s.is_one()) return *this;
    for (auto it = t_.begin(); it != t_.end();) {
      it->second *= s;
      if (it->second.is_zero())
        it = t_.erase(it);
      else
        ++it;
    }
    return *this;
  }
  void add_scaled(const LinComb& o, const Scalar& s) {
    if (s.is_zero()) return;
    for (const auto& [k, c] : o.t_) add(k, c * s);
  }

  friend LinComb operator+(LinComb a, const LinComb& b) { return a += b; }
  friend LinComb operator-(LinComb a, const LinComb& b) { return a -= b; }
  friend LinComb operator-(LinComb a) { return a *= Scalar(-1); }
  friend LinComb operator*(const Scalar& s, LinComb a) { return a *= s; }
  friend LinComb operator*(LinComb a, const Scalar& s) { return a *= s; }
  friend bool operator==(const LinComb& a, const LinComb& b) { return a.t_ == b.t_; }
  friend bool operator!=(const LinComb& a, const LinComb& b) { return !(a == b); }

  template <class Pred>
  LinComb filter(Pred&& keep) const {
    LinComb r;
    for (const auto& [k, c] : t_)
      if (keep(k)) r.t_.emplace_hint(r.t_.end(), k, c);
    return r;
  }

  // coefficient of eps^k in every entry (k = 0 gives the rational part)
  LinComb eps_part(int k) const {
    LinComb r;
    for (const auto& [key, c] : t_) r.add(key, Scalar(c.coeff(k)));
    return r;
  }

 private:
  map_type t_;
};

// Split an element into homogeneous components by the degree of its keys.
template <class K, class DegFn>
std::map<int, LinComb<K>> homogeneous_parts(const LinComb<K>& x, DegFn&& deg) {
  std::map<int, LinComb<K>> parts;
  for (const auto& [k, c] : x) parts[deg(k)].add(k, c);
  return parts;
}

}  // namespace dbr
