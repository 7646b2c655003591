#include "specheck/random.hpp"

#include <cmath>

#include "specheck/errors.hpp"

namespace specheck {

namespace {

uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

SplitRng SplitRng::split(uint64_t stream) const {
  uint64_t s = state_ ^ (0x2545f4914f6cdd1dULL * (stream + 1));
  // one scramble round so adjacent streams decorrelate
  splitmix64(s);
  return SplitRng(s);
}

uint64_t SplitRng::next_u64() { return splitmix64(state_); }

double SplitRng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double SplitRng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double SplitRng::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double mag = std::sqrt(-2.0 * std::log(u1));
  spare_ = mag * std::sin(2.0 * M_PI * u2);
  have_spare_ = true;
  return mag * std::cos(2.0 * M_PI * u2);
}

std::complex<double> SplitRng::complex_gaussian() {
  return {gaussian(), gaussian()};
}

MatrixC random_complex_gaussian(int n, SplitRng& rng) {
  MatrixC m(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = rng.complex_gaussian();
  return m;
}

MatrixC random_unitary(int n, SplitRng& rng) {
  // Modified Gram-Schmidt on a complex Gaussian matrix gives a Haar-like frame.
  MatrixC g = random_complex_gaussian(n, rng);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < j; ++k) {
      std::complex<double> dot(0);
      for (int i = 0; i < n; ++i) dot += std::conj(g(i, k)) * g(i, j);
      for (int i = 0; i < n; ++i) g(i, j) -= dot * g(i, k);
    }
    double nrm = 0.0;
    for (int i = 0; i < n; ++i) nrm += std::norm(g(i, j));
    nrm = std::sqrt(nrm);
    if (nrm < 1e-12) {
      // Degenerate draw (probability ~0): restart the column from fresh noise.
      for (int i = 0; i < n; ++i) g(i, j) = rng.complex_gaussian();
      --j;
      continue;
    }
    for (int i = 0; i < n; ++i) g(i, j) /= nrm;
  }
  return g;
}

HermitianMatrix random_hermitian(int n, SplitRng& rng) {
  return HermitianMatrix(hermitian_part(random_complex_gaussian(n, rng)));
}

PsdMatrix random_psd(int n, const SpectrumSpec& spec, uint64_t seed) {
  if (n < 1) throw InvalidInput("random_psd: n must be >= 1");
  SplitRng rng(seed);
  std::vector<double> lam;
  if (!spec.explicit_values.empty()) {
    if (static_cast<int>(spec.explicit_values.size()) != n)
      throw InvalidInput("random_psd: eigenvalue list length must equal n");
    lam = spec.explicit_values;
  } else {
    if (spec.zeros < 0 || spec.zeros > n)
      throw InvalidInput("random_psd: zero count out of range");
    lam.resize(n);
    for (int i = 0; i < n - spec.zeros; ++i) lam[i] = rng.uniform(spec.lo, spec.hi);
  }
  for (double v : lam)
    if (!(v >= 0.0)) throw InvalidInput("random_psd: requested eigenvalue is negative");

  const MatrixC q = random_unitary(n, rng);
  MatrixC out(n);
  for (int k = 0; k < n; ++k) {
    if (lam[k] == 0.0) continue;
    for (int i = 0; i < n; ++i) {
      const std::complex<double> col = lam[k] * q(i, k);
      for (int j = 0; j < n; ++j) out(i, j) += col * std::conj(q(j, k));
    }
  }
  return PsdMatrix(HermitianMatrix(hermitian_part(out)));
}

}  // namespace specheck
