#include <doctest.h>

#include <cmath>

#include "specheck/errors.hpp"
#include "specheck/pencil.hpp"
#include "specheck/random.hpp"
#include "test_helpers.hpp"

using namespace specheck;
using testutil::diag;
using testutil::mat;

namespace {

std::vector<double> linspace(double lo, double hi, int points) {
  std::vector<double> g(points);
  for (int k = 0; k < points; ++k) g[k] = lo + (hi - lo) * k / (points - 1);
  return g;
}

HermitianPencil random_pencil(int n, SplitRng& rng) {
  return {random_hermitian(n, rng), random_hermitian(n, rng)};
}

}  // namespace

TEST_CASE("branch identity is preserved through a crossing") {
  const HermitianPencil p{HermitianMatrix(diag({1, -1})), HermitianMatrix(diag({-1, 1}))};
  const EigenBranchSet set = track_branches(p, linspace(0.0, 2.0, 21), 1e-8);
  for (size_t k = 0; k < set.grid.size(); ++k) {
    const double t = set.grid[k];
    CHECK(set.branches[0][k] == doctest::Approx(1.0 - t).epsilon(1e-12));
    CHECK(set.branches[1][k] == doctest::Approx(-1.0 + t).epsilon(1e-12));
  }
  // crossing at t = 1 is flagged
  bool flagged = false;
  for (size_t k = 0; k < set.grid.size(); ++k)
    if (std::abs(set.grid[k] - 1.0) < 1e-12 && !set.exceptional_flags[k].empty())
      flagged = true;
  CHECK(flagged);
}

TEST_CASE("avoided crossing keeps hyperbola branches") {
  const HermitianPencil p{HermitianMatrix(diag({1, -1})), HermitianMatrix(mat({{0, 1}, {1, 0}}))};
  const EigenBranchSet set = track_branches(p, linspace(-2.0, 2.0, 41), 1e-8);
  for (size_t k = 0; k < set.grid.size(); ++k) {
    const double t = set.grid[k];
    const double expect = std::sqrt(1.0 + t * t);
    CHECK(set.branches[0][k] == doctest::Approx(expect).epsilon(1e-12));
    CHECK(set.branches[1][k] == doctest::Approx(-expect).epsilon(1e-12));
    CHECK(set.exceptional_flags[k].empty());  // minimum gap is 2
  }
}

TEST_CASE("tracked branches agree with direct eigendecomposition per point") {
  SplitRng rng(17);
  const HermitianPencil p = random_pencil(4, rng);
  const EigenBranchSet set = track_branches(p, linspace(-2.0, 2.0, 101), 1e-8);
  for (size_t k = 0; k < set.grid.size(); ++k) {
    const Spectrum s = eigh(p.at(set.grid[k]));
    std::vector<double> tracked;
    for (int j = 0; j < 4; ++j) tracked.push_back(set.branches[j][k]);
    std::sort(tracked.begin(), tracked.end(), std::greater<double>());
    for (int j = 0; j < 4; ++j)
      REQUIRE(tracked[j] == doctest::Approx(s.values[j]).epsilon(1e-10).scale(1.0));
  }
}

TEST_CASE("branches obey the Weyl Lipschitz bound") {
  SplitRng rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const HermitianPencil p = random_pencil(5, rng);
    const double lip = eigh(p.m1).values.front() < 0
                           ? std::abs(eigh(p.m1).values.back())
                           : std::max(std::abs(eigh(p.m1).values.front()),
                                      std::abs(eigh(p.m1).values.back()));
    const auto grid = linspace(-1.0, 1.0, 41);
    const double dt = grid[1] - grid[0];
    const EigenBranchSet set = track_branches(p, grid, 1e-8);
    for (int j = 0; j < 5; ++j)
      for (size_t k = 0; k + 1 < grid.size(); ++k)
        REQUIRE(std::abs(set.branches[j][k + 1] - set.branches[j][k]) <= lip * dt + 1e-8);
  }
}

TEST_CASE("track_branches validates the grid") {
  const HermitianPencil p{HermitianMatrix(diag({1, 0})), HermitianMatrix(diag({0, 1}))};
  CHECK_THROWS_AS(track_branches(p, {0.0}, 1e-8), InvalidInput);
  CHECK_THROWS_AS(track_branches(p, {1.0, 0.5}, 1e-8), InvalidInput);
}

TEST_CASE("dyadic refinement inserts points near a crossing") {
  const HermitianPencil p{HermitianMatrix(diag({1, -1})), HermitianMatrix(diag({-1, 1}))};
  const auto grid = linspace(0.0, 2.0, 5);  // crossing at t = 1 lands on a grid point
  const EigenBranchSet coarse = track_branches(p, grid, 1e-8, 0);
  const EigenBranchSet fine = track_branches(p, grid, 1e-8, 3);
  CHECK(fine.grid.size() > coarse.grid.size());
}

TEST_CASE("Hellmann-Feynman derivative with identity perturbation") {
  SplitRng rng(31);
  const HermitianPencil p{random_hermitian(4, rng), HermitianMatrix(MatrixC::identity(4))};
  for (double t : {-1.0, 0.0, 0.7})
    for (int j = 0; j < 4; ++j)
      CHECK(eigen_derivative_simple(p, t, j) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("Hellmann-Feynman derivative at an avoided crossing minimum") {
  const HermitianPencil p{HermitianMatrix(diag({1, -1})), HermitianMatrix(mat({{0, 1}, {1, 0}}))};
  CHECK(eigen_derivative_simple(p, 0.0, 0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
}

TEST_CASE("Hellmann-Feynman derivative matches central differences") {
  SplitRng rng(41);
  const double h = 1e-5;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_u64() % 5);
    const HermitianPencil p = random_pencil(n, rng);
    const double t = rng.uniform(-1.0, 1.0);
    const Spectrum s = eigh(p.at(t));
    for (int j = 0; j < n; ++j) {
      const double gap_up = j > 0 ? s.values[j - 1] - s.values[j] : 1e9;
      const double gap_dn = j < n - 1 ? s.values[j] - s.values[j + 1] : 1e9;
      if (std::min(gap_up, gap_dn) < 1e-3) continue;  // stay clearly simple
      const double analytic = eigen_derivative_simple(p, t, j);
      const double fd =
          (eigh(p.at(t + h)).values[j] - eigh(p.at(t - h)).values[j]) / (2.0 * h);
      REQUIRE(analytic == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
    }
  }
}

TEST_CASE("derivative error shrinks quadratically in the step") {
  SplitRng rng(43);
  const HermitianPencil p = random_pencil(4, rng);
  const double t = 0.3;
  const Spectrum s = eigh(p.at(t));
  REQUIRE(s.values[0] - s.values[1] > 1e-3);
  const double analytic = eigen_derivative_simple(p, t, 0);
  double c_prev = 0.0;
  for (double h : {1e-4, 1e-5}) {
    const double fd = (eigh(p.at(t + h)).values[0] - eigh(p.at(t - h)).values[0]) / (2.0 * h);
    const double c = std::abs(analytic - fd) / (h * h);
    if (c_prev > 0.0) CHECK(c <= 100.0 * std::max(c_prev, 1.0));
    c_prev = c;
  }
}

TEST_CASE("derivative demands a simple eigenvalue") {
  const HermitianPencil p{HermitianMatrix(MatrixC::identity(2)),
                          HermitianMatrix(mat({{0, 1}, {1, 0}}))};
  CHECK_THROWS_AS(eigen_derivative_simple(p, 0.0, 0), DegenerateSpectrum);
}

TEST_CASE("projector derivative on the scalar pencil") {
  const HermitianPencil p{HermitianMatrix(MatrixC::identity(2)),
                          HermitianMatrix(2.0 * MatrixC::identity(2))};
  DegenerateCluster c;
  c.first = 0;
  c.multiplicity = 2;
  c.projector = MatrixC::identity(2);
  CHECK(eigen_derivative_projector(p, c) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("projector derivative on a block-diagonal pencil") {
  const HermitianPencil p{HermitianMatrix(diag({2, 2, 0})), HermitianMatrix(diag({1, 1, 0}))};
  DegenerateCluster c;
  c.first = 0;
  c.multiplicity = 2;
  c.projector = diag({1, 1, 0});
  CHECK(eigen_derivative_projector(p, c) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("projector derivative rejects a non-idempotent projector") {
  const HermitianPencil p{HermitianMatrix(diag({1, 0})), HermitianMatrix(diag({1, 1}))};
  DegenerateCluster c;
  c.first = 0;
  c.multiplicity = 1;
  c.projector = 2.0 * MatrixC::identity(2);
  CHECK_THROWS_AS(eigen_derivative_projector(p, c), InvalidInput);
}

TEST_CASE("projector derivative reduces to the simple formula at m = 1") {
  SplitRng rng(59);
  int tested = 0;
  while (tested < 500) {
    const int n = 2 + static_cast<int>(rng.next_u64() % 4);
    const HermitianPencil p = random_pencil(n, rng);
    const double t = rng.uniform(-1.0, 1.0);
    const Spectrum s = eigh(p.at(t));
    const auto clusters = detect_clusters(s, 1e-6);
    for (const auto& c : clusters) {
      if (c.multiplicity != 1) continue;
      const double via_projector = eigen_derivative_projector(p, c);
      const double via_simple = eigen_derivative_simple(p, t, c.first, 1e-7);
      REQUIRE(via_projector == doctest::Approx(via_simple).epsilon(1e-10).scale(1.0));
      ++tested;
    }
  }
}

TEST_CASE("detect_clusters groups near-equal eigenvalues") {
  Spectrum s;
  s.values = {3, 1, 1};
  s.frame = MatrixC::identity(3);
  const auto clusters = detect_clusters(s, 1e-8);
  REQUIRE(clusters.size() == 2);
  CHECK(clusters[0].multiplicity == 1);
  CHECK(clusters[1].multiplicity == 2);
  CHECK(clusters[1].first == 1);
  CHECK((clusters[1].projector * clusters[1].projector - clusters[1].projector)
            .frobenius_norm() <= 1e-9);
  CHECK(clusters[1].projector.trace().real() == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("detect_clusters on a distinct spectrum gives singletons") {
  SplitRng rng(61);
  const Spectrum s = eigh(random_hermitian(5, rng));
  const auto clusters = detect_clusters(s, 1e-12);
  CHECK(clusters.size() == 5);
}

TEST_CASE("detect_clusters merges a 1e-12 gap") {
  Spectrum s;
  s.values = {1.0 + 1e-12, 1.0};
  s.frame = MatrixC::identity(2);
  const auto clusters = detect_clusters(s, 1e-8);
  REQUIRE(clusters.size() == 1);
  CHECK(clusters[0].multiplicity == 2);
}

TEST_CASE("Weyl envelope is tight for identity perturbation") {
  SplitRng rng(67);
  const HermitianPencil p{random_hermitian(4, rng), HermitianMatrix(MatrixC::identity(4))};
  const WeylMargins w = weyl_envelope_check(p, 1.3);
  for (int j = 0; j < 4; ++j) {
    CHECK(w.lower[j] == doctest::Approx(0.0).scale(1.0).epsilon(1e-10));
    CHECK(w.upper[j] == doctest::Approx(0.0).scale(1.0).epsilon(1e-10));
  }
}

TEST_CASE("Weyl envelope is tight at t = 0") {
  SplitRng rng(71);
  const HermitianPencil p = random_pencil(5, rng);
  const WeylMargins w = weyl_envelope_check(p, 0.0);
  for (int j = 0; j < 5; ++j) {
    CHECK(w.lower[j] == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(w.upper[j] == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  }
}

TEST_CASE("Weyl slacks stay non-negative on random pencils") {
  SplitRng rng(73);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_u64() % 6);
    const HermitianPencil p = random_pencil(n, rng);
    const double t = rng.uniform(-2.0, 2.0);
    const WeylMargins w = weyl_envelope_check(p, t);
    const double scale = eigh(p.m0).values.front() + std::abs(t) * eigh(p.m1).values.front();
    for (int j = 0; j < n; ++j) {
      REQUIRE(w.lower[j] >= -1e-9 * std::max(1.0, std::abs(scale)));
      REQUIRE(w.upper[j] >= -1e-9 * std::max(1.0, std::abs(scale)));
    }
  }
}

TEST_CASE("optimal assignment picks the permutation with maximal overlap") {
  // cost favors the anti-diagonal
  std::vector<std::vector<double>> cost = {{0.0, -1.0}, {-1.0, 0.0}};
  const auto row_of_col = detail::min_cost_assignment(cost);
  CHECK(row_of_col[0] == 1);
  CHECK(row_of_col[1] == 0);
}
