#pragma once

#include <vector>

#include "specheck/matrix.hpp"

namespace specheck {

// Descending eigenvalues with a matched orthonormal frame (column j <-> values[j]).
struct Spectrum {
  std::vector<double> values;
  MatrixC frame;
};

struct SingularValues {
  std::vector<double> values;  // non-negative, non-increasing
};

// Hermitian by construction: symmetrized on entry, rejected when the input is
// farther than 1e-12 * max(1, ||H||_F) from its Hermitian part.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(const MatrixC& m);
  const MatrixC& mat() const { return m_; }
  int n() const { return m_.n(); }

 private:
  MatrixC m_;
};

// PSD by certification: the spectrum is computed at construction; eigenvalues
// in [-1e-10 * ||A||_2, 0) are clamped to zero, anything more negative rejects.
class PsdMatrix {
 public:
  explicit PsdMatrix(const HermitianMatrix& h);
  explicit PsdMatrix(const MatrixC& m) : PsdMatrix(HermitianMatrix(m)) {}

  const MatrixC& mat() const { return h_.mat(); }
  const HermitianMatrix& hermitian() const { return h_; }
  const Spectrum& spectrum() const { return spec_; }
  double certified_min_eig() const { return min_eig_; }
  double norm2() const;  // largest |eigenvalue|
  int n() const { return h_.n(); }

 private:
  HermitianMatrix h_;
  Spectrum spec_;  // values clamped at zero
  double min_eig_;
};

struct EighOptions {
  double threshold = 1e-14;  // off-diagonal mass, relative to ||H||_F
  int max_sweeps = 100;
};

Spectrum eigh(const HermitianMatrix& h, const EighOptions& opts = {});

SingularValues singular_values(const MatrixC& x, const EighOptions& opts = {});

// A^r = Q diag(lambda^r) Q^* from A's certified spectrum; r == 1 returns A itself.
PsdMatrix psd_power(const PsdMatrix& a, double r);

// (X + X^*) / 2
HermitianMatrix re_part(const MatrixC& x);

}  // namespace specheck
