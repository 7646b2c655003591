#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "specheck/eigh.hpp"
#include "specheck/pencil.hpp"

namespace specheck {

// One (A, B, r, t) instance. X rides along for the unitarily-invariant-norm check.
struct InequalityCase {
  PsdMatrix a;
  PsdMatrix b;
  double r = 1.0;  // in [0, 2]
  double t = 0.0;  // in (-2, 2]
  std::optional<MatrixC> x;

  InequalityCase(PsdMatrix a_, PsdMatrix b_, double r_, double t_,
                 std::optional<MatrixC> x_ = std::nullopt);
};

struct VerificationRecord {
  std::string check;
  int n = 0;
  std::optional<double> r;
  std::optional<double> t;
  std::optional<int> k;
  std::vector<double> lhs;
  std::vector<double> rhs;
  std::vector<double> margins;  // rhs - lhs per index
  bool pass = false;
  bool proven = true;           // false on exploration territory
  double tol = 0.0;             // 1e-9 * max(1, max rhs)
  std::optional<int64_t> seed;

  double min_margin() const;
};

void to_json(nlohmann::json& j, const VerificationRecord& rec);
void from_json(const nlohmann::json& j, VerificationRecord& rec);

// Eigensolver threshold is exposed so near-violations can be re-run tightened.
struct CheckOptions {
  EighOptions eigh;
};

// (2+t) s_j(A^r B^{2-r} + A^{2-r} B^r)  vs  2 s_j(A^2 + tAB + B^2)
VerificationRecord zhan_singular_value_check(const InequalityCase& c,
                                             const CheckOptions& opts = {});

// Ky Fan k-norm comparison of (2+t)(A^r X B^{2-r} + A^{2-r} X B^r) against
// 2 (A^2 X + t AXB + X B^2). Checking all k certifies every unitarily
// invariant norm by Fan dominance. r outside [1/2, 3/2] needs the explicit
// override (exploration only).
VerificationRecord zhan_norm_check(const InequalityCase& c, int k,
                                   bool allow_outside_hypothesis = false,
                                   const CheckOptions& opts = {});

// 2 s_j(A B^*)  vs  s_j(A^* A + B^* B), arbitrary square A, B.
VerificationRecord ag_mean_check(const MatrixC& a, const MatrixC& b,
                                 const CheckOptions& opts = {});

// 2 s_j(A^{1/2} B^{3/2} + A^{3/2} B^{1/2})  vs  s_j((A+B)^2)
VerificationRecord bhatia_kittaneh_check(const PsdMatrix& a, const PsdMatrix& b,
                                         const CheckOptions& opts = {});

// 4 s_j(AB)  vs  s_j((A+B)^2)
VerificationRecord drury_check(const PsdMatrix& a, const PsdMatrix& b,
                               const CheckOptions& opts = {});

// record 1: s_j(Re C) vs s_j(C) with C = A^2 + tAB + B^2
// record 2: ((2+t)/4) s_j((A+B)^2) vs s_j(C)
std::pair<VerificationRecord, VerificationRecord> mean_comparison_check(
    const PsdMatrix& a, const PsdMatrix& b, double t, const CheckOptions& opts = {});

// record 1: eigenvalues of M(t) = A^2 + B^2 + (t/2)(AB + BA) are >= -tol
// record 2: s_j(M(t)) / (2+t) >= (1/4) s_j((A+B)^2)
std::pair<VerificationRecord, VerificationRecord> corollary2_check(
    const PsdMatrix& a, const PsdMatrix& b, double t, const CheckOptions& opts = {});

struct MonotonicityViolation {
  int branch = 0;
  double t_from = 0.0;
  double t_to = 0.0;
  double increase = 0.0;
};

struct DerivativeCheck {
  int branch = 0;
  double t = 0.0;
  double quotient_form = 0.0;   // (u* M1 u (2+t) - lambda) / (2+t)^2
  double difference_form = 0.0; // -u* (A-B)^2 u / (2+t)^2
};

// f_j(t) = lambda_j(A^2 + B^2 + (t/2)(AB+BA)) / (2+t), tracked over the grid.
struct MonotonicityTrace {
  std::vector<double> grid;
  std::vector<std::vector<double>> f;  // f[j][k]
  std::vector<MonotonicityViolation> violations;
  std::vector<DerivativeCheck> derivative_checks;  // simple-spectrum points only
};

MonotonicityTrace monotonicity_trace(const PsdMatrix& a, const PsdMatrix& b,
                                     const std::vector<double>& grid,
                                     const CheckOptions& opts = {});

// Sum of the k largest singular values.
double ky_fan_norm(const SingularValues& sv, int k);

}  // namespace specheck
