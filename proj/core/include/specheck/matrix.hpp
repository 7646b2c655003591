#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "specheck/errors.hpp"

namespace specheck {

// Dense square complex matrix, row-major. Templated on the real component type
// so the high-precision re-check path can reuse the same kernels with
// long double scalars; everyday code uses the MatrixC alias below.
template <typename Real>
class BasicMatrix {
 public:
  using Scalar = std::complex<Real>;

  BasicMatrix() = default;
  explicit BasicMatrix(int n) : n_(n), e_(static_cast<size_t>(n) * n) {
    if (n < 1) throw InvalidInput("matrix dimension must be >= 1");
  }

  static BasicMatrix identity(int n) {
    BasicMatrix m(n);
    for (int i = 0; i < n; ++i) m(i, i) = Scalar(1);
    return m;
  }

  int n() const { return n_; }

  Scalar& operator()(int i, int j) { return e_[static_cast<size_t>(i) * n_ + j]; }
  const Scalar& operator()(int i, int j) const { return e_[static_cast<size_t>(i) * n_ + j]; }

  const std::vector<Scalar>& entries() const { return e_; }
  std::vector<Scalar>& entries() { return e_; }

  BasicMatrix adjoint() const {
    BasicMatrix m(n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
  }

  Scalar trace() const {
    Scalar s(0);
    for (int i = 0; i < n_; ++i) s += (*this)(i, i);
    return s;
  }

  Real frobenius_norm() const {
    Real s(0);
    for (const Scalar& z : e_) s += std::norm(z);
    return std::sqrt(s);
  }

  bool is_finite() const {
    for (const Scalar& z : e_)
      if (!std::isfinite(static_cast<double>(z.real())) ||
          !std::isfinite(static_cast<double>(z.imag())))
        return false;
    return true;
  }

  friend BasicMatrix operator+(const BasicMatrix& a, const BasicMatrix& b) {
    check_same_dim(a, b);
    BasicMatrix m(a.n_);
    for (size_t i = 0; i < a.e_.size(); ++i) m.e_[i] = a.e_[i] + b.e_[i];
    return m;
  }

  friend BasicMatrix operator-(const BasicMatrix& a, const BasicMatrix& b) {
    check_same_dim(a, b);
    BasicMatrix m(a.n_);
    for (size_t i = 0; i < a.e_.size(); ++i) m.e_[i] = a.e_[i] - b.e_[i];
    return m;
  }

  friend BasicMatrix operator*(const BasicMatrix& a, const BasicMatrix& b) {
    check_same_dim(a, b);
    const int n = a.n_;
    BasicMatrix m(n);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        const Scalar aik = a(i, k);
        if (aik == Scalar(0)) continue;
        for (int j = 0; j < n; ++j) m(i, j) += aik * b(k, j);
      }
    return m;
  }

  friend BasicMatrix operator*(const Scalar& c, const BasicMatrix& a) {
    BasicMatrix m(a.n_);
    for (size_t i = 0; i < a.e_.size(); ++i) m.e_[i] = c * a.e_[i];
    return m;
  }

  friend BasicMatrix operator*(Real c, const BasicMatrix& a) { return Scalar(c) * a; }

  friend bool operator==(const BasicMatrix& a, const BasicMatrix& b) {
    return a.n_ == b.n_ && a.e_ == b.e_;
  }

 private:
  static void check_same_dim(const BasicMatrix& a, const BasicMatrix& b) {
    if (a.n_ != b.n_) throw InvalidInput("matrix dimensions do not match");
  }

  int n_ = 0;
  std::vector<Scalar> e_;
};

using MatrixC = BasicMatrix<double>;

// Spectral 2-norm proxy used in tolerance scales: largest |eigenvalue| for a
// Hermitian argument. Callers that only have a general matrix use the
// Frobenius norm as an upper bound.
template <typename Real>
BasicMatrix<Real> hermitian_part(const BasicMatrix<Real>& x) {
  const int n = x.n();
  BasicMatrix<Real> h(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      h(i, j) = (x(i, j) + std::conj(x(j, i))) / Real(2);
  return h;
}

}  // namespace specheck
