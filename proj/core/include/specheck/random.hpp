#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "specheck/eigh.hpp"
#include "specheck/matrix.hpp"

namespace specheck {

// Splittable counter-free generator built on splitmix64. Determinism is part
// of the contract: the same seed produces the same stream on every platform,
// so no std::<distribution> types are used anywhere.
class SplitRng {
 public:
  explicit SplitRng(uint64_t seed) : state_(seed) {}

  // Independent child stream; the split rule is fixed and order-independent.
  SplitRng split(uint64_t stream) const;

  uint64_t next_u64();
  double uniform();                     // [0, 1)
  double uniform(double lo, double hi);
  double gaussian();                    // standard normal, Box-Muller
  std::complex<double> complex_gaussian();

 private:
  uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Requested eigenvalues for random_psd: either an explicit list or a uniform
// draw on [lo, hi] with an optional count of exact zeros (rank deficiency).
struct SpectrumSpec {
  std::vector<double> explicit_values;  // used when non-empty
  double lo = 0.0;
  double hi = 1.0;
  int zeros = 0;
};

// Q diag(lambda) Q^* with Q Haar-like (orthonormalized complex Gaussian).
PsdMatrix random_psd(int n, const SpectrumSpec& spec, uint64_t seed);

MatrixC random_unitary(int n, SplitRng& rng);
MatrixC random_complex_gaussian(int n, SplitRng& rng);
HermitianMatrix random_hermitian(int n, SplitRng& rng);

}  // namespace specheck
