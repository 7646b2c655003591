#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "specheck/errors.hpp"
#include "specheck/matrix.hpp"

namespace specheck::detail {

template <typename Real>
struct JacobiResult {
  std::vector<Real> values;     // descending
  BasicMatrix<Real> frame;      // column j pairs with values[j]
  int sweeps = 0;
};

template <typename Real>
Real off_diagonal_norm(const BasicMatrix<Real>& h) {
  Real s(0);
  const int n = h.n();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) s += std::norm(h(i, j));
  return std::sqrt(s);
}

// Cyclic Jacobi for complex Hermitian matrices. Each pivot (p, q) is
// annihilated by a unitary J = diag(1, e^{-i phi}) * R(theta) acting on the
// (p, q) plane, where phi is the phase of H(p, q) and theta the classic real
// Jacobi angle for the phase-stripped 2x2 block. Converges when the
// off-diagonal Frobenius mass drops below threshold * ||H||_F.
template <typename Real>
JacobiResult<Real> jacobi_eigh(const BasicMatrix<Real>& hermitian, Real threshold,
                               int max_sweeps = 100) {
  using Scalar = std::complex<Real>;
  const int n = hermitian.n();
  BasicMatrix<Real> h = hermitian;
  BasicMatrix<Real> v = BasicMatrix<Real>::identity(n);
  const Real scale = h.frobenius_norm();
  const Real stop = threshold * std::max(Real(1), scale);

  JacobiResult<Real> out;
  out.frame = BasicMatrix<Real>(n);

  int sweep = 0;
  while (off_diagonal_norm(h) > stop) {
    if (++sweep > max_sweeps)
      throw NumericalFailure("jacobi_eigh: no convergence within sweep limit");
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const Scalar hpq = h(p, q);
        const Real apq = std::abs(hpq);
        if (apq <= stop / (Real(n) * Real(n))) continue;
        const Real app = h(p, p).real();
        const Real aqq = h(q, q).real();
        const Scalar phase = hpq / apq;  // e^{i phi}

        // Real rotation for [[app, apq], [apq, aqq]].
        const Real tau = (aqq - app) / (Real(2) * apq);
        Real t;
        if (tau >= Real(0))
          t = Real(1) / (tau + std::sqrt(Real(1) + tau * tau));
        else
          t = Real(-1) / (-tau + std::sqrt(Real(1) + tau * tau));
        const Real c = Real(1) / std::sqrt(Real(1) + t * t);
        const Real s = t * c;

        // J columns: col p = (c, -s * conj(phase)), col q = (s, c * conj(phase))
        const Scalar jpp(c), jpq(s);
        const Scalar jqp = -s * std::conj(phase);
        const Scalar jqq = c * std::conj(phase);

        // H <- J^* H J : first columns, then rows.
        for (int i = 0; i < n; ++i) {
          const Scalar hip = h(i, p), hiq = h(i, q);
          h(i, p) = hip * jpp + hiq * jqp;
          h(i, q) = hip * jpq + hiq * jqq;
        }
        for (int j = 0; j < n; ++j) {
          const Scalar hpj = h(p, j), hqj = h(q, j);
          h(p, j) = std::conj(jpp) * hpj + std::conj(jqp) * hqj;
          h(q, j) = std::conj(jpq) * hpj + std::conj(jqq) * hqj;
        }
        h(p, q) = Scalar(0);
        h(q, p) = Scalar(0);
        h(p, p) = Scalar(h(p, p).real());
        h(q, q) = Scalar(h(q, q).real());

        for (int i = 0; i < n; ++i) {
          const Scalar vip = v(i, p), viq = v(i, q);
          v(i, p) = vip * jpp + viq * jqp;
          v(i, q) = vip * jpq + viq * jqq;
        }
      }
    }
  }
  out.sweeps = sweep;

  // Stable descending sort; ties keep the Jacobi output order.
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<Real> diag(n);
  for (int i = 0; i < n; ++i) diag[i] = h(i, i).real();
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int a, int b) { return diag[a] > diag[b]; });

  out.values.resize(n);
  for (int j = 0; j < n; ++j) {
    out.values[j] = diag[idx[j]];
    for (int i = 0; i < n; ++i) out.frame(i, j) = v(i, idx[j]);
  }
  return out;
}

}  // namespace specheck::detail
