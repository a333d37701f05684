#include "dbr/matrix.hpp"

#include <stdexcept>

namespace dbr {

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = Scalar(1);
  return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<Scalar>>& rows) {
  const int r = static_cast<int>(rows.size());
  const int c = r ? static_cast<int>(rows[0].size()) : 0;
  Matrix m(r, c);
  for (int i = 0; i < r; ++i) {
    if (static_cast<int>(rows[i].size()) != c) throw std::invalid_argument("ragged matrix");
    for (int j = 0; j < c; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

Matrix Matrix::transpose() const {
  Matrix t(c_, r_);
  for (int i = 0; i < r_; ++i)
    for (int j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

bool Matrix::is_zero() const {
  for (const auto& x : a_)
    if (!x.is_zero()) return false;
  return true;
}

Scalar Matrix::det() const {
  if (r_ != c_) throw std::invalid_argument("det of non-square matrix");
  Matrix m = *this;
  Scalar d(1);
  for (int k = 0; k < r_; ++k) {
    int p = k;
    while (p < r_ && sgn(m(p, k).head()) == 0) ++p;
    if (p == r_) {
      for (int q = k; q < r_; ++q)
        if (!m(q, k).is_zero()) throw std::domain_error("det: no invertible pivot over the eps ring");
      return Scalar();
    }
    if (p != k) {
      for (int j = 0; j < c_; ++j) std::swap(m(p, j), m(k, j));
      d = -d;
    }
    d *= m(k, k);
    const Scalar inv = m(k, k).inverse();
    for (int i = k + 1; i < r_; ++i) {
      if (m(i, k).is_zero()) continue;
      const Scalar f = m(i, k) * inv;
      for (int j = k; j < c_; ++j) m(i, j) -= f * m(k, j);
    }
  }
  return d;
}

Matrix Matrix::inverse() const {
  if (r_ != c_) throw std::invalid_argument("inverse of non-square matrix");
  const int n = r_;
  Matrix m = *this, inv = identity(n);
  for (int k = 0; k < n; ++k) {
    int p = k;
    // the pivot needs an invertible rational head, not just a nonzero eps tail
    while (p < n && sgn(m(p, k).head()) == 0) ++p;
    if (p == n) throw std::domain_error("singular matrix");
    if (p != k)
      for (int j = 0; j < n; ++j) {
        std::swap(m(p, j), m(k, j));
        std::swap(inv(p, j), inv(k, j));
      }
    const Scalar s = m(k, k).inverse();
    for (int j = 0; j < n; ++j) {
      m(k, j) *= s;
      inv(k, j) *= s;
    }
    for (int i = 0; i < n; ++i) {
      if (i == k || m(i, k).is_zero()) continue;
      const Scalar f = m(i, k);
      for (int j = 0; j < n; ++j) {
        m(i, j) -= f * m(k, j);
        inv(i, j) -= f * inv(k, j);
      }
    }
  }
  return inv;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.c_ != b.r_) throw std::invalid_argument("matrix shape mismatch");
  Matrix r(a.r_, b.c_);
  for (int i = 0; i < a.r_; ++i)
    for (int k = 0; k < a.c_; ++k) {
      if (a(i, k).is_zero()) continue;
      for (int j = 0; j < b.c_; ++j) r(i, j) += a(i, k) * b(k, j);
    }
  return r;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  if (a.r_ != b.r_ || a.c_ != b.c_) throw std::invalid_argument("matrix shape mismatch");
  Matrix r = a;
  for (size_t i = 0; i < r.a_.size(); ++i) r.a_[i] += b.a_[i];
  return r;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  if (a.r_ != b.r_ || a.c_ != b.c_) throw std::invalid_argument("matrix shape mismatch");
  Matrix r = a;
  for (size_t i = 0; i < r.a_.size(); ++i) r.a_[i] -= b.a_[i];
  return r;
}

Matrix operator*(const Scalar& s, const Matrix& a) {
  Matrix r = a;
  for (auto& x : r.a_) x *= s;
  return r;
}

std::string Matrix::str() const {
  std::string s = "[";
  for (int i = 0; i < r_; ++i) {
    s += i ? "; " : "";
    for (int j = 0; j < c_; ++j) s += (j ? " " : "") + (*this)(i, j).str();
  }
  return s + "]";
}

}  // namespace dbr
