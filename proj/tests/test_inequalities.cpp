#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "specheck/errors.hpp"
#include "specheck/inequalities.hpp"
#include "specheck/random.hpp"
#include "test_helpers.hpp"

using namespace specheck;
using testutil::diag;
using testutil::mat;
using testutil::random_psd_simple;

namespace {

MatrixC random_diag(int n, SplitRng& rng) {
  MatrixC m(n);
  for (int i = 0; i < n; ++i) m(i, i) = rng.uniform(0.0, 3.0);
  return m;
}

std::vector<double> sorted_desc(std::vector<double> v) {
  std::sort(v.begin(), v.end(), std::greater<double>());
  return v;
}

}  // namespace

TEST_CASE("zhan check at the identity equality case") {
  for (double t : {-1.9, -0.5, 0.0, 1.0, 2.0}) {
    const InequalityCase c(PsdMatrix(MatrixC::identity(3)), PsdMatrix(MatrixC::identity(3)),
                           0.75, t);
    const VerificationRecord rec = zhan_singular_value_check(c);
    CHECK(rec.pass);
    for (int j = 0; j < 3; ++j) {
      CHECK(rec.lhs[j] == doctest::Approx(2.0 * (2.0 + t)).epsilon(1e-12));
      CHECK(rec.margins[j] == doctest::Approx(0.0).scale(1.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("zhan check on the commuting diagonal case") {
  const InequalityCase c(PsdMatrix(diag({2, 1})), PsdMatrix(MatrixC::identity(2)), 1.0, 2.0);
  const VerificationRecord rec = zhan_singular_value_check(c);
  CHECK(rec.lhs[0] == doctest::Approx(16.0).epsilon(1e-12));
  CHECK(rec.lhs[1] == doctest::Approx(8.0).epsilon(1e-12));
  CHECK(rec.rhs[0] == doctest::Approx(18.0).epsilon(1e-12));
  CHECK(rec.rhs[1] == doctest::Approx(8.0).epsilon(1e-12));
  CHECK(rec.pass);
  CHECK(rec.margins[1] == doctest::Approx(0.0).scale(1.0).epsilon(1e-10));
}

TEST_CASE("zhan check against frozen high-precision values") {
  // Oracle: 60-digit eigendecomposition of these fixed 2x2 matrices,
  // evaluated independently and frozen here.
  const InequalityCase c(PsdMatrix(mat({{2, 1}, {1, 1}})), PsdMatrix(diag({1, 2})), 0.5, -1.0);
  const VerificationRecord rec = zhan_singular_value_check(c);
  CHECK(rec.lhs[0] == doctest::Approx(7.53287896170186413).epsilon(1e-12));
  CHECK(rec.lhs[1] == doctest::Approx(1.50191029970149860).epsilon(1e-12));
  CHECK(rec.rhs[0] == doctest::Approx(11.06225774829854965).epsilon(1e-12));
  CHECK(rec.rhs[1] == doctest::Approx(5.06225774829854965).epsilon(1e-12));
  CHECK(rec.pass);
}

TEST_CASE("zhan check rejects out-of-range parameters") {
  const PsdMatrix a(MatrixC::identity(2));
  CHECK_THROWS_AS(InequalityCase(a, a, 1.0, -2.0), InvalidInput);
  CHECK_THROWS_AS(InequalityCase(a, a, 1.0, 2.5), InvalidInput);
  CHECK_THROWS_AS(InequalityCase(a, a, 2.5, 0.0), InvalidInput);
}

TEST_CASE("zhan margins scale quadratically with the matrices") {
  SplitRng rng(5);
  const PsdMatrix a = random_psd_simple(4, rng.next_u64());
  const PsdMatrix b = random_psd_simple(4, rng.next_u64());
  const double scale = 1.7;
  const PsdMatrix a2(scale * a.mat());
  const PsdMatrix b2(scale * b.mat());
  const VerificationRecord r1 = zhan_singular_value_check({a, b, 0.5, 1.0});
  const VerificationRecord r2 = zhan_singular_value_check({a2, b2, 0.5, 1.0});
  for (int j = 0; j < 4; ++j) {
    CHECK(r2.lhs[j] == doctest::Approx(scale * scale * r1.lhs[j]).epsilon(1e-10));
    CHECK(r2.rhs[j] == doctest::Approx(scale * scale * r1.rhs[j]).epsilon(1e-10));
  }
}

TEST_CASE("zhan check is symmetric in A and B") {
  SplitRng rng(13);
  const PsdMatrix a = random_psd_simple(5, rng.next_u64());
  const PsdMatrix b = random_psd_simple(5, rng.next_u64());
  for (double r : {0.5, 1.0, 1.5}) {
    const VerificationRecord ab = zhan_singular_value_check({a, b, r, -1.0});
    const VerificationRecord ba = zhan_singular_value_check({b, a, r, -1.0});
    for (int j = 0; j < 5; ++j) {
      CHECK(ab.lhs[j] == doctest::Approx(ba.lhs[j]).epsilon(1e-10));
      CHECK(ab.rhs[j] == doctest::Approx(ba.rhs[j]).epsilon(1e-10));
    }
  }
}

TEST_CASE("zhan check marks the exploration region unproven") {
  const PsdMatrix a(MatrixC::identity(2));
  CHECK_FALSE(zhan_singular_value_check({a, a, 0.25, 1.0}).proven);
  CHECK(zhan_singular_value_check({a, a, 0.25, 0.0}).proven);  // t = 0, Audenaert
  CHECK(zhan_singular_value_check({a, a, 1.5, 1.0}).proven);
}

TEST_CASE("zhan commuting-case scalar oracle") {
  SplitRng rng(29);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_u64() % 5);
    const MatrixC a = random_diag(n, rng);
    const MatrixC b = random_diag(n, rng);
    const double r = 0.5, t = -1.0;
    const VerificationRecord rec =
        zhan_singular_value_check({PsdMatrix(a), PsdMatrix(b), r, t});
    std::vector<double> lhs(n), rhs(n);
    for (int i = 0; i < n; ++i) {
      const double ai = a(i, i).real(), bi = b(i, i).real();
      lhs[i] = (2.0 + t) * (std::pow(ai, r) * std::pow(bi, 2.0 - r) +
                            std::pow(ai, 2.0 - r) * std::pow(bi, r));
      rhs[i] = 2.0 * (ai * ai + t * ai * bi + bi * bi);
    }
    lhs = sorted_desc(lhs);
    rhs = sorted_desc(rhs);
    for (int j = 0; j < n; ++j) {
      REQUIRE(rec.lhs[j] == doctest::Approx(lhs[j]).epsilon(1e-12));
      REQUIRE(rec.rhs[j] == doctest::Approx(rhs[j]).epsilon(1e-12));
    }
  }
}

TEST_CASE("norm check equality at the identity") {
  const InequalityCase c(PsdMatrix(MatrixC::identity(3)), PsdMatrix(MatrixC::identity(3)),
                         1.0, 0.5, MatrixC::identity(3));
  for (int k = 1; k <= 3; ++k) {
    const VerificationRecord rec = zhan_norm_check(c, k);
    CHECK(rec.pass);
    CHECK(rec.margins[0] == doctest::Approx(0.0).scale(1.0).epsilon(1e-10));
  }
}

TEST_CASE("norm check trace norm on diagonal input matches scalar sums") {
  SplitRng rng(37);
  const int n = 4;
  const MatrixC a = random_diag(n, rng);
  const MatrixC b = random_diag(n, rng);
  const MatrixC x = random_diag(n, rng);
  const double r = 1.5, t = -0.5;
  const VerificationRecord rec =
      zhan_norm_check({PsdMatrix(a), PsdMatrix(b), r, t, x}, n);
  double lhs = 0.0, rhs = 0.0;
  for (int i = 0; i < n; ++i) {
    const double ai = a(i, i).real(), bi = b(i, i).real(), xi = x(i, i).real();
    lhs += (2.0 + t) * std::abs(std::pow(ai, r) * xi * std::pow(bi, 2.0 - r) +
                                std::pow(ai, 2.0 - r) * xi * std::pow(bi, r));
    rhs += 2.0 * std::abs(ai * ai * xi + t * ai * xi * bi + xi * bi * bi);
  }
  CHECK(rec.lhs[0] == doctest::Approx(lhs).epsilon(1e-12));
  CHECK(rec.rhs[0] == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("norm check passes over random triples and all Ky Fan orders") {
  SplitRng rng(41);
  const int n = 5;
  for (double r : {0.5, 1.0, 1.5})
    for (double t : {-1.5, 0.0, 1.0, 2.0}) {
      const PsdMatrix a = random_psd_simple(n, rng.next_u64());
      const PsdMatrix b = random_psd_simple(n, rng.next_u64());
      const MatrixC x = random_complex_gaussian(n, rng);
      const InequalityCase c(a, b, r, t, x);
      for (int k = 1; k <= n; ++k) REQUIRE(zhan_norm_check(c, k).pass);
    }
}

TEST_CASE("norm check enforces its hypothesis unless overridden") {
  const PsdMatrix a(MatrixC::identity(2));
  const InequalityCase c(a, a, 0.25, 1.0);
  CHECK_THROWS_AS(zhan_norm_check(c, 1), InvalidInput);
  const VerificationRecord rec = zhan_norm_check(c, 1, /*allow_outside_hypothesis=*/true);
  CHECK_FALSE(rec.proven);
}

TEST_CASE("ag mean equality at A = B") {
  SplitRng rng(43);
  const MatrixC a = random_complex_gaussian(4, rng);
  const VerificationRecord rec = ag_mean_check(a, a);
  for (int j = 0; j < 4; ++j)
    CHECK(rec.margins[j] == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
}

TEST_CASE("ag mean on orthogonal projections") {
  const VerificationRecord rec = ag_mean_check(diag({1, 0}), diag({0, 1}));
  CHECK(rec.lhs[0] == doctest::Approx(0.0));
  CHECK(rec.rhs[0] == doctest::Approx(1.0));
  CHECK(rec.rhs[1] == doctest::Approx(1.0));
  CHECK(rec.pass);
}

TEST_CASE("ag mean passes on random non-Hermitian pairs") {
  SplitRng rng(47);
  for (int trial = 0; trial < 100; ++trial) {
    const MatrixC a = random_complex_gaussian(6, rng);
    const MatrixC b = random_complex_gaussian(6, rng);
    REQUIRE(ag_mean_check(a, b).pass);
  }
}

TEST_CASE("bhatia-kittaneh equality and degenerate cases") {
  const PsdMatrix id(MatrixC::identity(2));
  const VerificationRecord eq = bhatia_kittaneh_check(id, id);
  CHECK(eq.lhs[0] == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(eq.rhs[0] == doctest::Approx(4.0).epsilon(1e-12));
  const VerificationRecord zero = bhatia_kittaneh_check(id, PsdMatrix(MatrixC(2)));
  CHECK(zero.lhs[0] == doctest::Approx(0.0));
  CHECK(zero.rhs[0] == doctest::Approx(1.0));
}

TEST_CASE("bhatia-kittaneh passes on random PSD pairs") {
  SplitRng rng(53);
  for (int n = 2; n <= 8; ++n)
    for (int trial = 0; trial < 20; ++trial)
      REQUIRE(bhatia_kittaneh_check(random_psd_simple(n, rng.next_u64()),
                                    random_psd_simple(n, rng.next_u64()))
                  .pass);
}

TEST_CASE("drury equality cases") {
  const PsdMatrix id(MatrixC::identity(2));
  CHECK(drury_check(id, id).margins[0] == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  const VerificationRecord rec = drury_check(PsdMatrix(diag({4, 1})), PsdMatrix(diag({1, 1})));
  CHECK(rec.lhs[0] == doctest::Approx(16.0).epsilon(1e-12));
  CHECK(rec.lhs[1] == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(rec.rhs[0] == doctest::Approx(25.0).epsilon(1e-12));
  CHECK(rec.rhs[1] == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(rec.pass);
}

TEST_CASE("drury passes on random PSD pairs") {
  SplitRng rng(59);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_u64() % 6);
    REQUIRE(drury_check(random_psd_simple(n, rng.next_u64()),
                        random_psd_simple(n, rng.next_u64()))
                .pass);
  }
}

TEST_CASE("mean comparison equalities") {
  const PsdMatrix id(MatrixC::identity(3));
  const auto [r1, r2] = mean_comparison_check(id, id, 1.0);
  CHECK(r1.min_margin() == doctest::Approx(0.0).scale(1.0).epsilon(1e-10));
  CHECK(r2.min_margin() == doctest::Approx(0.0).scale(1.0).epsilon(1e-10));
}

TEST_CASE("mean comparison record 1 is exact on commuting input") {
  SplitRng rng(61);
  const MatrixC a = random_diag(3, rng);
  const MatrixC b = random_diag(3, rng);
  const auto [r1, r2] = mean_comparison_check(PsdMatrix(a), PsdMatrix(b), -1.3);
  for (int j = 0; j < 3; ++j)
    CHECK(r1.margins[j] == doctest::Approx(0.0).scale(1.0).epsilon(1e-10));
  CHECK(r2.pass);
}

TEST_CASE("mean comparison passes at t close to -2") {
  SplitRng rng(67);
  const auto [r1, r2] = mean_comparison_check(random_psd_simple(4, rng.next_u64()),
                                              random_psd_simple(4, rng.next_u64()), -1.9);
  CHECK(r1.pass);
  CHECK(r2.pass);
}

TEST_CASE("mean comparison validates t") {
  const PsdMatrix id(MatrixC::identity(2));
  CHECK_THROWS_AS(mean_comparison_check(id, id, -2.0), InvalidInput);
  CHECK_THROWS_AS(mean_comparison_check(id, id, 2.1), InvalidInput);
}

TEST_CASE("psd mean lower bound at the endpoint t = 2") {
  SplitRng rng(71);
  const PsdMatrix a = random_psd_simple(4, rng.next_u64());
  const PsdMatrix b = random_psd_simple(4, rng.next_u64());
  const auto [r1, r2] = corollary2_check(a, b, 2.0);
  CHECK(r1.pass);
  CHECK(r2.pass);
  for (int j = 0; j < 4; ++j)
    CHECK(r2.margins[j] == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
}

TEST_CASE("psd mean lower bound at the identity near the left endpoint") {
  const PsdMatrix id(MatrixC::identity(2));
  const auto [r1, r2] = corollary2_check(id, id, -1.9);
  CHECK(r1.pass);
  for (int j = 0; j < 2; ++j) {
    CHECK(r1.rhs[j] == doctest::Approx(0.1).epsilon(1e-10));  // (2+t) I
    CHECK(r2.margins[j] == doctest::Approx(0.0).scale(1.0).epsilon(1e-10));
  }
}

TEST_CASE("psd mean lower bound on random pairs at t = -1.9") {
  SplitRng rng(73);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_u64() % 5);
    const auto [r1, r2] = corollary2_check(random_psd_simple(n, rng.next_u64()),
                                           random_psd_simple(n, rng.next_u64()), -1.9);
    REQUIRE(r1.pass);
    REQUIRE(r2.pass);
  }
}

TEST_CASE("monotonicity trace is constant for A = B") {
  SplitRng rng(79);
  const PsdMatrix a = random_psd_simple(3, rng.next_u64());
  std::vector<double> grid;
  for (int k = 0; k <= 30; ++k) grid.push_back(-1.9 + 0.2 * k);
  const MonotonicityTrace trace = monotonicity_trace(a, a, grid);
  CHECK(trace.violations.empty());
  const Spectrum s = eigh(HermitianMatrix(a.mat() * a.mat()));
  for (int j = 0; j < 3; ++j)
    for (size_t k = 0; k < trace.grid.size(); ++k)
      REQUIRE(trace.f[j][k] == doctest::Approx(s.values[j]).epsilon(1e-9));
}

TEST_CASE("monotonicity trace decays like 1/(2+t) for B = 0") {
  SplitRng rng(83);
  const PsdMatrix a = random_psd_simple(3, rng.next_u64());
  const PsdMatrix zero{MatrixC(3)};
  std::vector<double> grid;
  for (int k = 0; k <= 40; ++k) grid.push_back(-1.5 + 0.1 * k);
  const MonotonicityTrace trace = monotonicity_trace(a, zero, grid);
  CHECK(trace.violations.empty());
  const Spectrum s = eigh(HermitianMatrix(a.mat() * a.mat()));
  for (int j = 0; j < 3; ++j)
    for (size_t k = 0; k < trace.grid.size(); ++k)
      REQUIRE(trace.f[j][k] ==
              doctest::Approx(s.values[j] / (2.0 + trace.grid[k])).epsilon(1e-9));
}

TEST_CASE("monotonicity trace on a fixed non-commuting pair") {
  const PsdMatrix a(diag({2, 1}));
  const PsdMatrix b(mat({{1, 1}, {1, 1}}));
  std::vector<double> grid;
  for (int k = 0; k < 60; ++k) grid.push_back(-1.9 + (4.0 + 1.9) * k / 59.0);
  const MonotonicityTrace trace = monotonicity_trace(a, b, grid);
  CHECK(trace.violations.empty());
  // derivative identity at simple-spectrum points
  for (const auto& dc : trace.derivative_checks) {
    CHECK(dc.quotient_form <= 1e-9);
    CHECK(dc.quotient_form ==
          doctest::Approx(dc.difference_form).epsilon(1e-8).scale(1.0));
  }
}

TEST_CASE("ky fan norm sums the top singular values") {
  SingularValues sv;
  sv.values = {3.0, 2.0, 0.5};
  CHECK(ky_fan_norm(sv, 1) == doctest::Approx(3.0));
  CHECK(ky_fan_norm(sv, 3) == doctest::Approx(5.5));
  CHECK_THROWS_AS(ky_fan_norm(sv, 0), InvalidInput);
  CHECK_THROWS_AS(ky_fan_norm(sv, 4), InvalidInput);
}

TEST_CASE("verification record json round trip") {
  const InequalityCase c(PsdMatrix(diag({2, 1})), PsdMatrix(MatrixC::identity(2)), 1.0, 2.0);
  VerificationRecord rec = zhan_singular_value_check(c);
  rec.seed = 17;
  const nlohmann::json j = rec;
  const auto back = j.get<VerificationRecord>();
  CHECK(back.check == rec.check);
  CHECK(back.margins == rec.margins);
  CHECK(back.pass == rec.pass);
  CHECK(back.tol == rec.tol);
  CHECK(*back.seed == 17);
  CHECK(*back.r == 1.0);
  CHECK_FALSE(back.k.has_value());
}
