#include "specheck/pencil.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "specheck/errors.hpp"

namespace specheck {

HermitianPencil::HermitianPencil(HermitianMatrix a, HermitianMatrix b)
    : m0(std::move(a)), m1(std::move(b)) {
  if (m0.n() != m1.n()) throw InvalidInput("HermitianPencil: dimension mismatch");
}

HermitianMatrix HermitianPencil::at(double t) const {
  return HermitianMatrix(m0.mat() + t * m1.mat());
}

namespace detail {

std::vector<int> min_cost_assignment(const std::vector<std::vector<double>>& cost) {
  const int n = static_cast<int>(cost.size());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      int j1 = -1;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> row_of_col(n);
  for (int j = 1; j <= n; ++j) row_of_col[j - 1] = p[j] - 1;
  return row_of_col;
}

}  // namespace detail

namespace {

double spectral_radius(const Spectrum& s) {
  double top = 0.0;
  for (double v : s.values) top = std::max(top, std::abs(v));
  return top;
}

double auto_gap_tol(const Spectrum& s) { return 1e-8 * std::max(1.0, spectral_radius(s)); }

std::vector<std::pair<int, int>> degenerate_flags(const Spectrum& s, double gap_tol) {
  std::vector<std::pair<int, int>> flags;
  const int n = static_cast<int>(s.values.size());
  const double tol = gap_tol > 0.0 ? gap_tol : auto_gap_tol(s);
  int start = 0;
  for (int j = 1; j <= n; ++j) {
    if (j == n || s.values[j - 1] - s.values[j] >= tol) {
      if (j - start > 1) flags.emplace_back(start, j - start);
      start = j;
    }
  }
  return flags;
}

EigenBranchSet track_once(const HermitianPencil& p, const std::vector<double>& grid,
                          double gap_tol) {
  const int n = p.n();
  const int m = static_cast<int>(grid.size());
  EigenBranchSet out;
  out.grid = grid;
  out.branches.assign(n, std::vector<double>(m, 0.0));
  out.frames.reserve(m);
  out.exceptional_flags.resize(m);

  MatrixC prev_frame(n);
  for (int k = 0; k < m; ++k) {
    const Spectrum s = eigh(p.at(grid[k]));
    out.exceptional_flags[k] = degenerate_flags(s, gap_tol);

    std::vector<int> branch_col(n);  // branch j -> column of s.frame
    if (k == 0) {
      for (int j = 0; j < n; ++j) branch_col[j] = j;
    } else {
      // cost = -|<prev branch i, current column j>|^2
      std::vector<std::vector<double>> cost(n, std::vector<double>(n, 0.0));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          std::complex<double> dot(0);
          for (int row = 0; row < n; ++row)
            dot += std::conj(prev_frame(row, i)) * s.frame(row, j);
          cost[i][j] = -std::norm(dot);
        }
      const std::vector<int> row_of_col = detail::min_cost_assignment(cost);
      for (int j = 0; j < n; ++j) branch_col[row_of_col[j]] = j;
    }

    MatrixC frame(n);
    for (int j = 0; j < n; ++j) {
      out.branches[j][k] = s.values[branch_col[j]];
      for (int i = 0; i < n; ++i) frame(i, j) = s.frame(i, branch_col[j]);
    }
    prev_frame = frame;
    out.frames.push_back(std::move(frame));
  }
  return out;
}

}  // namespace

EigenBranchSet track_branches(const HermitianPencil& p, const std::vector<double>& grid,
                              double gap_tol, int refine_depth) {
  if (grid.size() < 2) throw InvalidInput("track_branches: grid needs at least 2 points");
  for (size_t k = 1; k < grid.size(); ++k)
    if (!(grid[k] > grid[k - 1]))
      throw InvalidInput("track_branches: grid must be strictly increasing");

  std::vector<double> g = grid;
  EigenBranchSet set = track_once(p, g, gap_tol);
  const int depth = std::min(refine_depth, 8);
  for (int pass = 0; pass < depth; ++pass) {
    std::set<double> refined(g.begin(), g.end());
    bool grew = false;
    for (size_t k = 0; k < set.grid.size(); ++k) {
      if (set.exceptional_flags[k].empty()) continue;
      if (k > 0) {
        const double mid = 0.5 * (set.grid[k - 1] + set.grid[k]);
        if (set.grid[k] - set.grid[k - 1] > 1e-12 && refined.insert(mid).second) grew = true;
      }
      if (k + 1 < set.grid.size()) {
        const double mid = 0.5 * (set.grid[k] + set.grid[k + 1]);
        if (set.grid[k + 1] - set.grid[k] > 1e-12 && refined.insert(mid).second) grew = true;
      }
    }
    if (!grew) break;
    g.assign(refined.begin(), refined.end());
    set = track_once(p, g, gap_tol);
  }
  return set;
}

double eigen_derivative_simple(const HermitianPencil& p, double t, int j, double gap_tol) {
  const int n = p.n();
  if (j < 0 || j >= n) throw InvalidInput("eigen_derivative_simple: index out of range");
  const Spectrum s = eigh(p.at(t));
  const double tol = gap_tol > 0.0 ? gap_tol : auto_gap_tol(s);
  const double gap_up = j > 0 ? s.values[j - 1] - s.values[j]
                              : std::numeric_limits<double>::infinity();
  const double gap_dn = j < n - 1 ? s.values[j] - s.values[j + 1]
                                  : std::numeric_limits<double>::infinity();
  if (std::min(gap_up, gap_dn) <= tol)
    throw DegenerateSpectrum("eigen_derivative_simple: eigenvalue is not simple");

  std::complex<double> d(0);
  for (int a = 0; a < n; ++a) {
    std::complex<double> row(0);
    for (int b = 0; b < n; ++b) row += p.m1.mat()(a, b) * s.frame(b, j);
    d += std::conj(s.frame(a, j)) * row;
  }
  return d.real();
}

double eigen_derivative_projector(const HermitianPencil& p, const DegenerateCluster& cluster) {
  const MatrixC& proj = cluster.projector;
  if (proj.n() != p.n()) throw InvalidInput("eigen_derivative_projector: dimension mismatch");
  const int m = cluster.multiplicity;
  if (m < 1) throw InvalidInput("eigen_derivative_projector: multiplicity must be >= 1");
  if ((proj * proj - proj).frobenius_norm() > 1e-9)
    throw InvalidInput("eigen_derivative_projector: projector is not idempotent");
  if (std::abs(proj.trace().real() - m) > 1e-9)
    throw InvalidInput("eigen_derivative_projector: trace does not match multiplicity");
  return (p.m1.mat() * proj).trace().real() / m;
}

std::vector<DegenerateCluster> detect_clusters(const Spectrum& s, double gap_tol) {
  if (!(gap_tol > 0.0)) throw InvalidInput("detect_clusters: gap_tol must be positive");
  const int n = static_cast<int>(s.values.size());
  std::vector<DegenerateCluster> clusters;
  int start = 0;
  for (int j = 1; j <= n; ++j) {
    if (j == n || s.values[j - 1] - s.values[j] >= gap_tol) {
      DegenerateCluster c;
      c.first = start;
      c.multiplicity = j - start;
      c.projector = MatrixC(n);
      for (int k = start; k < j; ++k)
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            c.projector(a, b) += s.frame(a, k) * std::conj(s.frame(b, k));
      clusters.push_back(std::move(c));
      start = j;
    }
  }
  return clusters;
}

WeylMargins weyl_envelope_check(const HermitianPencil& p, double t) {
  const int n = p.n();
  const Spectrum s0 = eigh(p.m0);
  const Spectrum s1 = eigh(p.m1);
  const Spectrum st = eigh(p.at(t));
  const double lo = std::min(t * s1.values.front(), t * s1.values.back());
  const double hi = std::max(t * s1.values.front(), t * s1.values.back());
  WeylMargins w;
  w.lower.resize(n);
  w.upper.resize(n);
  for (int j = 0; j < n; ++j) {
    w.lower[j] = st.values[j] - (s0.values[j] + lo);
    w.upper[j] = (s0.values[j] + hi) - st.values[j];
  }
  return w;
}

}  // namespace specheck
