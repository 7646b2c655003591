#include <doctest.h>

#include <cmath>

#include "specheck/errors.hpp"
#include "specheck/highprec.hpp"
#include "specheck/inequalities.hpp"
#include "specheck/random.hpp"
#include "test_helpers.hpp"

using namespace specheck;
using testutil::diag;
using testutil::mat;

TEST_CASE("long double eigenvalues of a fixed 2x2") {
  const auto vals = highprec::eigenvalues_ld(highprec::widen(mat({{2, 1}, {1, 1}})));
  // (3 +/- sqrt(5)) / 2
  CHECK(static_cast<double>(vals[0]) ==
        doctest::Approx((3.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-15));
  CHECK(static_cast<double>(vals[1]) ==
        doctest::Approx((3.0 - std::sqrt(5.0)) / 2.0).epsilon(1e-15));
}

TEST_CASE("charpoly coefficients of a diagonal matrix") {
  // det(lambda I - diag(1,2,3)) = lambda^3 - 6 lambda^2 + 11 lambda - 6
  const auto c = highprec::charpoly_coefficients(highprec::widen(diag({1, 2, 3})));
  REQUIRE(c.size() == 3);
  CHECK(static_cast<double>(c[0]) == doctest::Approx(-6.0).epsilon(1e-15));
  CHECK(static_cast<double>(c[1]) == doctest::Approx(11.0).epsilon(1e-15));
  CHECK(static_cast<double>(c[2]) == doctest::Approx(-6.0).epsilon(1e-15));
}

TEST_CASE("charpoly route matches the Jacobi route on random Hermitians") {
  SplitRng rng(404);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng.next_u64() % 4);
    const auto h = highprec::widen(random_hermitian(n, rng).mat());
    const auto jac = highprec::eigenvalues_ld(h);
    const auto cp = highprec::charpoly_eigenvalues(h);
    REQUIRE(cp.size() == jac.size());
    for (size_t j = 0; j < cp.size(); ++j)
      REQUIRE(static_cast<double>(cp[j]) ==
              doctest::Approx(static_cast<double>(jac[j])).epsilon(1e-11).scale(1.0));
  }
}

TEST_CASE("charpoly eigenvalues reject n > 4") {
  SplitRng rng(405);
  const auto h = highprec::widen(random_hermitian(5, rng).mat());
  CHECK_THROWS_AS(highprec::charpoly_eigenvalues(h), InvalidInput);
}

TEST_CASE("recheck agrees with the double-precision margins") {
  const MatrixC a = mat({{2, 1}, {1, 1}});
  const MatrixC b = diag({1, 2});
  const VerificationRecord fast =
      zhan_singular_value_check({PsdMatrix(a), PsdMatrix(b), 0.5, -1.0});
  const auto re = highprec::recheck_margins("zhan", a, b, std::nullopt, 0.5, -1.0,
                                            std::nullopt);
  REQUIRE(re.margins.size() == fast.margins.size());
  for (size_t j = 0; j < re.margins.size(); ++j)
    CHECK(re.margins[j] == doctest::Approx(fast.margins[j]).epsilon(1e-10));
  CHECK(re.charpoly_available);
  CHECK(re.charpoly_agreed);
  CHECK(re.min_margin == doctest::Approx(fast.min_margin()).epsilon(1e-10));
}

TEST_CASE("recheck covers every verifier name") {
  SplitRng rng(406);
  const MatrixC a = testutil::random_psd_simple(3, rng.next_u64()).mat();
  const MatrixC b = testutil::random_psd_simple(3, rng.next_u64()).mat();
  const MatrixC x = random_complex_gaussian(3, rng);
  for (const char* name : {"zhan", "ag_mean", "bhatia_kittaneh", "drury",
                           "mean_comparison_re", "mean_comparison_sum",
                           "corollary2_psd", "corollary2_mean"}) {
    const auto re = highprec::recheck_margins(name, a, b, std::nullopt, 1.0, 0.5,
                                              std::nullopt);
    REQUIRE(re.min_margin > -1e-9);
  }
  const auto norm = highprec::recheck_margins("zhan_norm", a, b, x, 1.0, 0.5, 2);
  CHECK(norm.min_margin > -1e-9);
  CHECK_THROWS_AS(highprec::recheck_margins("bogus", a, b, std::nullopt, std::nullopt,
                                            std::nullopt, std::nullopt),
                  InvalidInput);
}

TEST_CASE("recheck marks the charpoly route unavailable for larger matrices") {
  SplitRng rng(407);
  const MatrixC a = testutil::random_psd_simple(5, rng.next_u64()).mat();
  const MatrixC b = testutil::random_psd_simple(5, rng.next_u64()).mat();
  const auto re = highprec::recheck_margins("drury", a, b, std::nullopt, std::nullopt,
                                            std::nullopt, std::nullopt);
  CHECK_FALSE(re.charpoly_available);
  CHECK_FALSE(re.charpoly_agreed);
}
