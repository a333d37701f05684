#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace dbr {

using Rational = mpq_class;

// Truncation order N for products in Q[eps]/(eps^{N+1}) on the calling thread.
// The default is 0, i.e. plain rationals.
int eps_order();

class EpsScope {
 public:
  explicit EpsScope(int order);
  ~EpsScope();
  EpsScope(const EpsScope&) = delete;
  EpsScope& operator=(const EpsScope&) = delete;

 private:
  int saved_;
};

// Exact scalar: a rational, or a truncated polynomial in the formal variable eps.
class Scalar {
 public:
  Scalar() = default;
  Scalar(int v) : head_(v) {}
  Scalar(long v) : head_(v) {}
  Scalar(const Rational& q) : head_(q) {}

  // eps^k, or zero when k exceeds the current order
  static Scalar eps(int k = 1);
  // accepts "p", "-p", "p/q"
  static Scalar parse(const std::string& s);

  const Rational& head() const { return head_; }
  Rational coeff(int k) const;
  int top() const { return static_cast<int>(tail_.size()); }
  bool is_zero() const { return sgn(head_) == 0 && tail_.empty(); }
  bool is_rational() const { return tail_.empty(); }
  bool is_one() const { return tail_.empty() && head_ == 1; }
  Scalar truncated(int order) const;
  Scalar inverse() const;
  double to_double() const { return head_.get_d(); }

  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);
  Scalar operator-() const;

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  friend bool operator==(const Scalar& a, const Scalar& b) {
    return a.head_ == b.head_ && a.tail_ == b.tail_;
  }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

  std::string str() const;

 private:
  void trim();
  Rational head_;
  std::vector<Rational> tail_;  // tail_[k-1] multiplies eps^k
};

Rational factorial(int n);
Rational binomial(int n, int k);

}  // namespace dbr
