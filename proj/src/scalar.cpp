#include "dbr/scalar.hpp"

#include <stdexcept>

namespace dbr {

namespace {
thread_local int g_eps_order = 0;
}

int eps_order() { return g_eps_order; }

EpsScope::EpsScope(int order) : saved_(g_eps_order) {
  if (order < 0) throw std::invalid_argument("negative eps order");
  g_eps_order = order;
}
EpsScope::~EpsScope() { g_eps_order = saved_; }

Scalar Scalar::eps(int k) {
  Scalar s;
  if (k == 0) {
    s.head_ = 1;
    return s;
  }
  if (k < 0 || k > g_eps_order) return s;
  s.tail_.assign(k, Rational(0));
  s.tail_[k - 1] = 1;
  return s;
}

Scalar Scalar::parse(const std::string& text) {
  std::string t;
  for (char c : text)
    if (c != ' ') t.push_back(c);
  if (t.empty()) throw std::invalid_argument("empty scalar");
  size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
  bool slash = false;
  if (i == t.size()) throw std::invalid_argument("bad scalar '" + text + "'");
  for (size_t j = i; j < t.size(); ++j) {
    if (t[j] == '/') {
      if (slash || j == i || j + 1 == t.size()) throw std::invalid_argument("bad scalar '" + text + "'");
      slash = true;
    } else if (t[j] < '0' || t[j] > '9') {
      throw std::invalid_argument("bad scalar '" + text + "'");
    }
  }
  if (t[0] == '+') t.erase(0, 1);
  Rational q;
  try {
    q = Rational(t, 10);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad scalar '" + text + "'");
  }
  if (sgn(q.get_den()) == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
  q.canonicalize();
  return Scalar(q);
}

Rational Scalar::coeff(int k) const {
  if (k == 0) return head_;
  if (k < 0 || k > top()) return Rational(0);
  return tail_[k - 1];
}

void Scalar::trim() {
  while (!tail_.empty() && sgn(tail_.back()) == 0) tail_.pop_back();
}

Scalar Scalar::truncated(int order) const {
  Scalar s = *this;
  if (order < s.top()) {
    s.tail_.resize(order);
    s.trim();
  }
  return s;
}

Scalar& Scalar::operator+=(const Scalar& o) {
  head_ += o.head_;
  if (!o.tail_.empty()) {
    if (tail_.size() < o.tail_.size()) tail_.resize(o.tail_.size());
    for (size_t i = 0; i < o.tail_.size(); ++i) tail_[i] += o.tail_[i];
    trim();
  }
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  head_ -= o.head_;
  if (!o.tail_.empty()) {
    if (tail_.size() < o.tail_.size()) tail_.resize(o.tail_.size());
    for (size_t i = 0; i < o.tail_.size(); ++i) tail_[i] -= o.tail_[i];
    trim();
  }
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
  if (tail_.empty() && o.tail_.empty()) {
    head_ *= o.head_;
    return *this;
  }
  int n = g_eps_order;
  std::vector<Rational> c(n + 1, Rational(0));
  for (int i = 0; i <= std::min(n, top()); ++i) {
    const Rational& a = i == 0 ? head_ : tail_[i - 1];
    if (sgn(a) == 0) continue;
    for (int j = 0; i + j <= n && j <= o.top(); ++j) {
      const Rational& b = j == 0 ? o.head_ : o.tail_[j - 1];
      c[i + j] += a * b;
    }
  }
  head_ = c[0];
  tail_.assign(c.begin() + 1, c.end());
  trim();
  return *this;
}

Scalar Scalar::inverse() const {
  if (sgn(head_) == 0) throw std::domain_error("scalar not invertible");
  if (tail_.empty()) return Scalar(Rational(1) / head_);
  // a^{-1} = h^{-1} sum_k (-(a-h)/h)^k, finite because (a-h) is nilpotent
  Rational hinv = Rational(1) / head_;
  Scalar t = *this;
  t.head_ = 0;
  t *= Scalar(-hinv);
  Scalar acc(1), pw(1);
  for (int k = 1; k <= g_eps_order; ++k) {
    pw *= t;
    if (pw.is_zero()) break;
    acc += pw;
  }
  acc *= Scalar(hinv);
  return acc;
}

Scalar& Scalar::operator/=(const Scalar& o) {
  if (o.tail_.empty()) {
    if (sgn(o.head_) == 0) throw std::domain_error("division by zero");
    head_ /= o.head_;
    for (auto& t : tail_) t /= o.head_;
    return *this;
  }
  return *this *= o.inverse();
}

Scalar Scalar::operator-() const {
  Scalar s = *this;
  s.head_ = -s.head_;
  for (auto& t : s.tail_) t = -t;
  return s;
}

std::string Scalar::str() const {
  if (tail_.empty()) return head_.get_str();
  std::string s = head_.get_str();
  for (int k = 1; k <= top(); ++k) {
    const Rational& c = tail_[k - 1];
    if (sgn(c) == 0) continue;
    s += sgn(c) < 0 ? " - " : " + ";
    s += Rational(abs(c)).get_str();
    s += k == 1 ? "*eps" : "*eps^" + std::to_string(k);
  }
  return s;
}

Rational factorial(int n) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
  return Rational(f);
}

Rational binomial(int n, int k) {
  if (k < 0 || k > n) return Rational(0);
  mpz_class b;
  mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return Rational(b);
}

}  // namespace dbr
