#pragma once

#include <optional>
#include <string>
#include <vector>

#include "specheck/matrix.hpp"

namespace specheck::highprec {

using LMatrix = BasicMatrix<long double>;

LMatrix widen(const MatrixC& m);

// Descending eigenvalues via long double Jacobi, threshold 1e-18.
std::vector<long double> eigenvalues_ld(const LMatrix& hermitian);

// Descending eigenvalues via the characteristic polynomial
// (Faddeev-LeVerrier coefficients + monotone-interval root cascade). n <= 4.
std::vector<long double> charpoly_eigenvalues(const LMatrix& hermitian);

// Monic coefficients c1..cn of det(lambda I - H) = lambda^n + c1 lambda^{n-1} + ... + cn.
std::vector<long double> charpoly_coefficients(const LMatrix& m);

struct RecheckResult {
  std::vector<double> margins;  // long double evaluation, rounded at the end
  double min_margin = 0.0;
  // n <= 4 only: the characteristic-polynomial route agreed with the Jacobi
  // route within 1e-10. False for larger n (route unavailable).
  bool charpoly_agreed = false;
  bool charpoly_available = false;
};

// Re-evaluate one verifier's margins entirely in long double. The final
// spectra (the route that decides the margin sign) are additionally computed
// through the characteristic polynomial when n <= 4.
RecheckResult recheck_margins(const std::string& check, const MatrixC& a,
                              const MatrixC& b, const std::optional<MatrixC>& x,
                              std::optional<double> r, std::optional<double> t,
                              std::optional<int> k);

}  // namespace specheck::highprec
