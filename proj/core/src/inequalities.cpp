#include "specheck/inequalities.hpp"

#include <algorithm>
#include <cmath>

#include "specheck/errors.hpp"

namespace specheck {

namespace {

void require_t_range(double t) {
  if (!(t > -2.0) || !(t <= 2.0))
    throw InvalidInput("t must lie in (-2, 2]");
}

VerificationRecord make_record(std::string check, int n, std::vector<double> lhs,
                               std::vector<double> rhs, std::optional<double> r,
                               std::optional<double> t, std::optional<int> k,
                               bool proven) {
  VerificationRecord rec;
  rec.check = std::move(check);
  rec.n = n;
  rec.r = r;
  rec.t = t;
  rec.k = k;
  rec.proven = proven;
  rec.lhs = std::move(lhs);
  rec.rhs = std::move(rhs);
  rec.margins.resize(rec.lhs.size());
  double max_rhs = 0.0;
  for (double v : rec.rhs) max_rhs = std::max(max_rhs, v);
  rec.tol = 1e-9 * std::max(1.0, max_rhs);
  double min_margin = std::numeric_limits<double>::infinity();
  for (size_t j = 0; j < rec.lhs.size(); ++j) {
    rec.margins[j] = rec.rhs[j] - rec.lhs[j];
    min_margin = std::min(min_margin, rec.margins[j]);
  }
  rec.pass = min_margin >= -rec.tol;
  return rec;
}

bool zhan_proven_region(double r, double t) {
  if (r == 0.5 || r == 1.0 || r == 1.5) return true;
  return t == 0.0 && r >= 0.0 && r <= 2.0;  // Audenaert's case
}

}  // namespace

InequalityCase::InequalityCase(PsdMatrix a_, PsdMatrix b_, double r_, double t_,
                               std::optional<MatrixC> x_)
    : a(std::move(a_)), b(std::move(b_)), r(r_), t(t_), x(std::move(x_)) {
  if (a.n() != b.n()) throw InvalidInput("InequalityCase: dimension mismatch");
  if (x && x->n() != a.n()) throw InvalidInput("InequalityCase: X dimension mismatch");
  if (!(r >= 0.0) || !(r <= 2.0)) throw InvalidInput("InequalityCase: r must lie in [0, 2]");
  require_t_range(t);
}

double VerificationRecord::min_margin() const {
  double m = std::numeric_limits<double>::infinity();
  for (double v : margins) m = std::min(m, v);
  return m;
}

VerificationRecord zhan_singular_value_check(const InequalityCase& c,
                                             const CheckOptions& opts) {
  const MatrixC& am = c.a.mat();
  const MatrixC& bm = c.b.mat();
  const MatrixC ar = psd_power(c.a, c.r).mat();
  const MatrixC a2r = psd_power(c.a, 2.0 - c.r).mat();
  const MatrixC br = psd_power(c.b, c.r).mat();
  const MatrixC b2r = psd_power(c.b, 2.0 - c.r).mat();

  const MatrixC lhs_mat = ar * b2r + a2r * br;
  const MatrixC rhs_mat = am * am + c.t * (am * bm) + bm * bm;
  const SingularValues ls = singular_values(lhs_mat, opts.eigh);
  const SingularValues rs = singular_values(rhs_mat, opts.eigh);

  const int n = c.a.n();
  std::vector<double> lhs(n), rhs(n);
  for (int j = 0; j < n; ++j) {
    lhs[j] = (2.0 + c.t) * ls.values[j];
    rhs[j] = 2.0 * rs.values[j];
  }
  return make_record("zhan", n, std::move(lhs), std::move(rhs), c.r, c.t, std::nullopt,
                     zhan_proven_region(c.r, c.t));
}

VerificationRecord zhan_norm_check(const InequalityCase& c, int k,
                                   bool allow_outside_hypothesis,
                                   const CheckOptions& opts) {
  const int n = c.a.n();
  const bool in_hypothesis = c.r >= 0.5 && c.r <= 1.5;
  if (!in_hypothesis && !allow_outside_hypothesis)
    throw InvalidInput("zhan_norm_check: r must lie in [1/2, 3/2]");
  if (k < 1 || k > n) throw InvalidInput("zhan_norm_check: Ky Fan order out of range");
  const MatrixC x = c.x ? *c.x : MatrixC::identity(n);

  const MatrixC& am = c.a.mat();
  const MatrixC& bm = c.b.mat();
  const MatrixC ar = psd_power(c.a, c.r).mat();
  const MatrixC a2r = psd_power(c.a, 2.0 - c.r).mat();
  const MatrixC br = psd_power(c.b, c.r).mat();
  const MatrixC b2r = psd_power(c.b, 2.0 - c.r).mat();

  const MatrixC lhs_mat = ar * x * b2r + a2r * x * br;
  const MatrixC rhs_mat = am * am * x + c.t * (am * x * bm) + x * (bm * bm);
  const double lhs = (2.0 + c.t) * ky_fan_norm(singular_values(lhs_mat, opts.eigh), k);
  const double rhs = 2.0 * ky_fan_norm(singular_values(rhs_mat, opts.eigh), k);
  return make_record("zhan_norm", n, {lhs}, {rhs}, c.r, c.t, k, in_hypothesis);
}

VerificationRecord ag_mean_check(const MatrixC& a, const MatrixC& b,
                                 const CheckOptions& opts) {
  if (a.n() != b.n()) throw InvalidInput("ag_mean_check: dimension mismatch");
  const SingularValues ls = singular_values(a * b.adjoint(), opts.eigh);
  const SingularValues rs =
      singular_values(a.adjoint() * a + b.adjoint() * b, opts.eigh);
  const int n = a.n();
  std::vector<double> lhs(n), rhs(n);
  for (int j = 0; j < n; ++j) {
    lhs[j] = 2.0 * ls.values[j];
    rhs[j] = rs.values[j];
  }
  return make_record("ag_mean", n, std::move(lhs), std::move(rhs), std::nullopt,
                     std::nullopt, std::nullopt, true);
}

VerificationRecord bhatia_kittaneh_check(const PsdMatrix& a, const PsdMatrix& b,
                                         const CheckOptions& opts) {
  if (a.n() != b.n()) throw InvalidInput("bhatia_kittaneh_check: dimension mismatch");
  const MatrixC ah = psd_power(a, 0.5).mat();
  const MatrixC a32 = psd_power(a, 1.5).mat();
  const MatrixC bh = psd_power(b, 0.5).mat();
  const MatrixC b32 = psd_power(b, 1.5).mat();
  const MatrixC sum = a.mat() + b.mat();
  const SingularValues ls = singular_values(ah * b32 + a32 * bh, opts.eigh);
  const SingularValues rs = singular_values(sum * sum, opts.eigh);
  const int n = a.n();
  std::vector<double> lhs(n), rhs(n);
  for (int j = 0; j < n; ++j) {
    lhs[j] = 2.0 * ls.values[j];
    rhs[j] = rs.values[j];
  }
  return make_record("bhatia_kittaneh", n, std::move(lhs), std::move(rhs), std::nullopt,
                     std::nullopt, std::nullopt, true);
}

VerificationRecord drury_check(const PsdMatrix& a, const PsdMatrix& b,
                               const CheckOptions& opts) {
  if (a.n() != b.n()) throw InvalidInput("drury_check: dimension mismatch");
  const MatrixC sum = a.mat() + b.mat();
  const SingularValues ls = singular_values(a.mat() * b.mat(), opts.eigh);
  const SingularValues rs = singular_values(sum * sum, opts.eigh);
  const int n = a.n();
  std::vector<double> lhs(n), rhs(n);
  for (int j = 0; j < n; ++j) {
    lhs[j] = 4.0 * ls.values[j];
    rhs[j] = rs.values[j];
  }
  return make_record("drury", n, std::move(lhs), std::move(rhs), std::nullopt,
                     std::nullopt, std::nullopt, true);
}

std::pair<VerificationRecord, VerificationRecord> mean_comparison_check(
    const PsdMatrix& a, const PsdMatrix& b, double t, const CheckOptions& opts) {
  if (a.n() != b.n()) throw InvalidInput("mean_comparison_check: dimension mismatch");
  require_t_range(t);
  const MatrixC& am = a.mat();
  const MatrixC& bm = b.mat();
  const MatrixC c = am * am + t * (am * bm) + bm * bm;
  const SingularValues sc = singular_values(c, opts.eigh);
  const SingularValues sre = singular_values(re_part(c).mat(), opts.eigh);
  const MatrixC sum = am + bm;
  const SingularValues ssum2 = singular_values(sum * sum, opts.eigh);
  const int n = a.n();
  std::vector<double> lhs1(n), rhs1(n), lhs2(n), rhs2(n);
  for (int j = 0; j < n; ++j) {
    lhs1[j] = sre.values[j];
    rhs1[j] = sc.values[j];
    lhs2[j] = (2.0 + t) / 4.0 * ssum2.values[j];
    rhs2[j] = sc.values[j];
  }
  return {make_record("mean_comparison_re", n, std::move(lhs1), std::move(rhs1),
                      std::nullopt, t, std::nullopt, true),
          make_record("mean_comparison_sum", n, std::move(lhs2), std::move(rhs2),
                      std::nullopt, t, std::nullopt, true)};
}

std::pair<VerificationRecord, VerificationRecord> corollary2_check(
    const PsdMatrix& a, const PsdMatrix& b, double t, const CheckOptions& opts) {
  if (a.n() != b.n()) throw InvalidInput("corollary2_check: dimension mismatch");
  require_t_range(t);
  const MatrixC& am = a.mat();
  const MatrixC& bm = b.mat();
  const MatrixC m = re_part(am * am + t * (am * bm) + bm * bm).mat();
  const Spectrum sm = eigh(HermitianMatrix(m), opts.eigh);
  const int n = a.n();

  std::vector<double> lhs1(n, 0.0);
  std::vector<double> rhs1 = sm.values;  // margins are the eigenvalues themselves

  const MatrixC sum = am + bm;
  const SingularValues ssum2 = singular_values(sum * sum, opts.eigh);
  const SingularValues smv = singular_values(m, opts.eigh);
  std::vector<double> lhs2(n), rhs2(n);
  for (int j = 0; j < n; ++j) {
    lhs2[j] = 0.25 * ssum2.values[j];
    rhs2[j] = smv.values[j] / (2.0 + t);
  }
  return {make_record("corollary2_psd", n, std::move(lhs1), std::move(rhs1),
                      std::nullopt, t, std::nullopt, true),
          make_record("corollary2_mean", n, std::move(lhs2), std::move(rhs2),
                      std::nullopt, t, std::nullopt, true)};
}

MonotonicityTrace monotonicity_trace(const PsdMatrix& a, const PsdMatrix& b,
                                     const std::vector<double>& grid,
                                     const CheckOptions& opts) {
  (void)opts;
  if (a.n() != b.n()) throw InvalidInput("monotonicity_trace: dimension mismatch");
  if (grid.empty() || !(grid.front() > -2.0))
    throw InvalidInput("monotonicity_trace: grid must stay above -2");
  const MatrixC& am = a.mat();
  const MatrixC& bm = b.mat();
  const MatrixC m0 = am * am + bm * bm;
  const MatrixC m1 = hermitian_part(am * bm);  // (AB + BA) / 2
  const HermitianPencil pencil{HermitianMatrix(m0), HermitianMatrix(m1)};
  const EigenBranchSet set = track_branches(pencil, grid, 0.0);

  const MatrixC diff = am - bm;
  const MatrixC diff2 = diff * diff;
  const int n = a.n();
  const int m = static_cast<int>(set.grid.size());

  MonotonicityTrace trace;
  trace.grid = set.grid;
  // f is indexed by sorted position, not by tracked branch: every analytic
  // branch is nonincreasing, so each order statistic is too, and sorted
  // positions are immune to assignment errors near close crossings.
  trace.f.assign(n, std::vector<double>(m, 0.0));
  std::vector<double> column(n);
  for (int k = 0; k < m; ++k) {
    for (int j = 0; j < n; ++j) column[j] = set.branches[j][k];
    std::sort(column.begin(), column.end(), std::greater<double>());
    for (int j = 0; j < n; ++j) trace.f[j][k] = column[j] / (2.0 + set.grid[k]);
  }

  for (int j = 0; j < n; ++j)
    for (int k = 0; k + 1 < m; ++k) {
      const double inc = trace.f[j][k + 1] - trace.f[j][k];
      if (inc > 1e-9 * std::max(1.0, std::abs(trace.f[j][k])))
        trace.violations.push_back({j, set.grid[k], set.grid[k + 1], inc});
    }

  for (int k = 0; k < m; ++k) {
    if (!set.exceptional_flags[k].empty()) continue;
    const double t = set.grid[k];
    const double w = 2.0 + t;
    for (int j = 0; j < n; ++j) {
      std::complex<double> um1u(0), ud2u(0);
      for (int ai = 0; ai < n; ++ai) {
        std::complex<double> r1(0), r2(0);
        for (int bi = 0; bi < n; ++bi) {
          r1 += m1(ai, bi) * set.frames[k](bi, j);
          r2 += diff2(ai, bi) * set.frames[k](bi, j);
        }
        um1u += std::conj(set.frames[k](ai, j)) * r1;
        ud2u += std::conj(set.frames[k](ai, j)) * r2;
      }
      DerivativeCheck dc;
      dc.branch = j;
      dc.t = t;
      dc.quotient_form = (um1u.real() * w - set.branches[j][k]) / (w * w);
      dc.difference_form = -ud2u.real() / (w * w);
      trace.derivative_checks.push_back(dc);
    }
  }
  return trace;
}

double ky_fan_norm(const SingularValues& sv, int k) {
  if (k < 1 || k > static_cast<int>(sv.values.size()))
    throw InvalidInput("ky_fan_norm: order out of range");
  double s = 0.0;
  for (int j = 0; j < k; ++j) s += sv.values[j];
  return s;
}

void to_json(nlohmann::json& j, const VerificationRecord& rec) {
  j = nlohmann::json{
      {"check", rec.check},
      {"n", rec.n},
      {"r", rec.r ? nlohmann::json(*rec.r) : nlohmann::json(nullptr)},
      {"t", rec.t ? nlohmann::json(*rec.t) : nlohmann::json(nullptr)},
      {"k", rec.k ? nlohmann::json(*rec.k) : nlohmann::json(nullptr)},
      {"margins", rec.margins},
      {"pass", rec.pass},
      {"proven", rec.proven},
      {"tol", rec.tol},
      {"seed", rec.seed ? nlohmann::json(*rec.seed) : nlohmann::json(nullptr)},
  };
}

void from_json(const nlohmann::json& j, VerificationRecord& rec) {
  rec = VerificationRecord{};
  rec.check = j.at("check").get<std::string>();
  rec.n = j.at("n").get<int>();
  if (!j.at("r").is_null()) rec.r = j.at("r").get<double>();
  if (!j.at("t").is_null()) rec.t = j.at("t").get<double>();
  if (!j.at("k").is_null()) rec.k = j.at("k").get<int>();
  rec.margins = j.at("margins").get<std::vector<double>>();
  rec.pass = j.at("pass").get<bool>();
  rec.proven = j.at("proven").get<bool>();
  rec.tol = j.at("tol").get<double>();
  if (!j.at("seed").is_null()) rec.seed = j.at("seed").get<int64_t>();
}

}  // namespace specheck
