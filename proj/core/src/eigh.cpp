#include "specheck/eigh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "specheck/detail/jacobi.hpp"
#include "specheck/errors.hpp"

namespace specheck {

HermitianMatrix::HermitianMatrix(const MatrixC& m) {
  if (!m.is_finite()) throw InvalidInput("HermitianMatrix: non-finite entries");
  const MatrixC h = hermitian_part(m);
  const double dev = (m - h).frobenius_norm();
  if (dev > 1e-12 * std::max(1.0, m.frobenius_norm()))
    throw InvalidInput("HermitianMatrix: input is not Hermitian");
  m_ = h;
}

PsdMatrix::PsdMatrix(const HermitianMatrix& h) : h_(h) {
  spec_ = eigh(h_);
  min_eig_ = spec_.values.empty() ? 0.0 : spec_.values.back();
  double top = 0.0;
  for (double v : spec_.values) top = std::max(top, std::abs(v));
  if (min_eig_ < -1e-10 * std::max(1.0, top))
    throw InvalidInput("PsdMatrix: matrix has a negative eigenvalue");
  for (double& v : spec_.values) v = std::max(v, 0.0);
}

double PsdMatrix::norm2() const {
  double top = 0.0;
  for (double v : spec_.values) top = std::max(top, std::abs(v));
  return top;
}

Spectrum eigh(const HermitianMatrix& h, const EighOptions& opts) {
  if (!h.mat().is_finite()) throw InvalidInput("eigh: non-finite entries");
  auto res = detail::jacobi_eigh<double>(h.mat(), opts.threshold, opts.max_sweeps);
  return Spectrum{std::move(res.values), std::move(res.frame)};
}

SingularValues singular_values(const MatrixC& x, const EighOptions& opts) {
  if (!x.is_finite()) throw InvalidInput("singular_values: non-finite entries");
  const MatrixC gram = x.adjoint() * x;
  Spectrum s = eigh(HermitianMatrix(gram), opts);
  // Gram eigenvalues that are zero up to round-off would otherwise surface as
  // sqrt(round-off) ~ 1e-8 singular values; snap them to exact zero.
  const double zero_tol =
      x.n() * std::numeric_limits<double>::epsilon() * gram.frobenius_norm();
  SingularValues sv;
  sv.values.reserve(s.values.size());
  for (double v : s.values)
    sv.values.push_back(v <= zero_tol ? 0.0 : std::sqrt(v));
  return sv;
}

PsdMatrix psd_power(const PsdMatrix& a, double r) {
  if (!std::isfinite(r) || r < 0.0) throw InvalidInput("psd_power: r must be finite and >= 0");
  if (r == 1.0) return a;
  const Spectrum& s = a.spectrum();
  const int n = a.n();
  MatrixC out(n);
  for (int k = 0; k < n; ++k) {
    const double p = std::pow(s.values[k], r);  // values are already clamped at 0
    for (int i = 0; i < n; ++i) {
      const std::complex<double> col = s.frame(i, k);
      for (int j = 0; j < n; ++j) out(i, j) += p * col * std::conj(s.frame(j, k));
    }
  }
  return PsdMatrix(HermitianMatrix(out));
}

HermitianMatrix re_part(const MatrixC& x) {
  if (!x.is_finite()) throw InvalidInput("re_part: non-finite entries");
  return HermitianMatrix(hermitian_part(x));
}

}  // namespace specheck
