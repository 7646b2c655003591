#pragma once

#include <utility>
#include <vector>

#include "specheck/eigh.hpp"

namespace specheck {

// M(t) = M0 + t * M1, both Hermitian of the same dimension.
struct HermitianPencil {
  HermitianMatrix m0;
  HermitianMatrix m1;

  HermitianPencil(HermitianMatrix a, HermitianMatrix b);
  int n() const { return m0.n(); }
  HermitianMatrix at(double t) const;
};

// A maximal contiguous group of near-equal eigenvalues with its spectral projector.
struct DegenerateCluster {
  int first = 0;        // first eigenvalue index (descending order, 0-based)
  int multiplicity = 1;
  MatrixC projector;    // Hermitian, rank = multiplicity
};

struct EigenBranchSet {
  std::vector<double> grid;
  // branches[j][k]: eigenvalue branch j at grid point k; branch identity is
  // carried across grid points by eigenvector-overlap assignment.
  std::vector<std::vector<double>> branches;
  std::vector<MatrixC> frames;  // per grid point, columns in branch order
  // Per grid point: (first sorted index, multiplicity) for every cluster with
  // spectral gap below gap_tol. Empty inner list = simple spectrum there.
  std::vector<std::vector<std::pair<int, int>>> exceptional_flags;
};

// Track eigenvalue branches over the grid. Matching between consecutive grid
// points maximizes total squared eigenvector overlap via optimal assignment.
// refine_depth > 0 bisects intervals adjacent to flagged points (one pass per
// depth level) to localize crossings; depth is capped at 8.
EigenBranchSet track_branches(const HermitianPencil& p, const std::vector<double>& grid,
                              double gap_tol, int refine_depth = 0);

// Hellmann-Feynman derivative u_j^* M1 u_j for a simple eigenvalue.
// gap_tol <= 0 selects the default 1e-8 * max(1, ||M(t)||_2).
double eigen_derivative_simple(const HermitianPencil& p, double t, int j,
                               double gap_tol = 0.0);

// (1/m) Tr(M1 P) for a permanently degenerate branch.
double eigen_derivative_projector(const HermitianPencil& p, const DegenerateCluster& cluster);

std::vector<DegenerateCluster> detect_clusters(const Spectrum& s, double gap_tol);

struct WeylMargins {
  std::vector<double> lower;  // lambda_j(M(t)) - (lambda_j(M0) + lambda_min(t M1))
  std::vector<double> upper;  // (lambda_j(M0) + lambda_max(t M1)) - lambda_j(M(t))
};

WeylMargins weyl_envelope_check(const HermitianPencil& p, double t);

namespace detail {
// Minimum-cost perfect assignment (Hungarian method with potentials).
// Returns row_of_col: row matched to each column.
std::vector<int> min_cost_assignment(const std::vector<std::vector<double>>& cost);
}  // namespace detail

}  // namespace specheck
