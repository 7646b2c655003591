#include "specheck/highprec.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "specheck/detail/jacobi.hpp"
#include "specheck/errors.hpp"

namespace specheck::highprec {

namespace {

using Scalar = std::complex<long double>;

LMatrix power_ld(const LMatrix& a, long double r) {
  const auto res = detail::jacobi_eigh<long double>(a, 1e-18L, 200);
  const int n = a.n();
  LMatrix out(n);
  for (int kcol = 0; kcol < n; ++kcol) {
    const long double lam = std::max(res.values[kcol], 0.0L);
    const long double p = std::pow(lam, r);
    for (int i = 0; i < n; ++i) {
      const Scalar col = p * res.frame(i, kcol);
      for (int j = 0; j < n; ++j) out(i, j) += col * std::conj(res.frame(j, kcol));
    }
  }
  return out;
}

long double eval_poly(const std::vector<long double>& c, long double x) {
  // monic: x^n + c[0] x^{n-1} + ... + c[n-1]
  long double v = 1.0L;
  for (long double ci : c) v = v * x + ci;
  return v;
}

std::vector<long double> derivative_monic(const std::vector<long double>& c) {
  // d/dx (x^n + c0 x^{n-1} + ...) = n x^{n-1} + (n-1) c0 x^{n-2} + ...
  // renormalized to monic.
  const int n = static_cast<int>(c.size());
  std::vector<long double> d(n - 1);
  for (int i = 0; i < n - 1; ++i) d[i] = c[i] * static_cast<long double>(n - 1 - i) / n;
  return d;
}

// All-real-root solver for monic polynomials of small degree: recurse on the
// derivative to get monotone intervals, then bisect. Near-multiple roots show
// up as critical points with tiny polynomial value.
std::vector<long double> all_real_roots(const std::vector<long double>& c) {
  const int deg = static_cast<int>(c.size());
  if (deg == 0) return {};
  if (deg == 1) return {-c[0]};

  long double bound = 1.0L;
  for (long double ci : c) bound = std::max(bound, std::abs(ci));
  bound += 1.0L;

  std::vector<long double> crit = all_real_roots(derivative_monic(c));
  std::sort(crit.begin(), crit.end());
  std::vector<long double> pts;
  pts.push_back(-bound);
  for (long double x : crit)
    if (x > -bound && x < bound) pts.push_back(x);
  pts.push_back(bound);

  std::vector<long double> roots;
  const long double val_tol = 1e-16L * std::pow(bound, static_cast<long double>(deg));
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    long double a = pts[i], b = pts[i + 1];
    long double fa = eval_poly(c, a), fb = eval_poly(c, b);
    if ((fa > 0) == (fb > 0)) continue;
    for (int it = 0; it < 200; ++it) {
      const long double mid = 0.5L * (a + b);
      const long double fm = eval_poly(c, mid);
      if (fm == 0.0L) {
        a = b = mid;
        break;
      }
      if ((fm > 0) == (fa > 0)) {
        a = mid;
        fa = fm;
      } else {
        b = mid;
      }
    }
    roots.push_back(0.5L * (a + b));
  }
  // Remaining roots hide at near-flat critical points (even multiplicity).
  (void)val_tol;
  std::vector<std::pair<long double, long double>> flat;  // (|p(x)|, x)
  for (long double x : crit) flat.emplace_back(std::abs(eval_poly(c, x)), x);
  std::sort(flat.begin(), flat.end());
  for (const auto& [v, x] : flat) {
    (void)v;
    if (static_cast<int>(roots.size()) >= deg) break;
    roots.push_back(x);
    if (static_cast<int>(roots.size()) < deg) roots.push_back(x);
  }
  roots.resize(deg, roots.empty() ? 0.0L : roots.back());
  return roots;
}

long double gram_zero_tol(const LMatrix& gram) {
  // Gram eigenvalues that vanish up to round-off must map to singular value 0,
  // not sqrt(round-off); mirror the double-precision route's clamp.
  return gram.n() * std::numeric_limits<long double>::epsilon() * gram.frobenius_norm();
}

std::vector<long double> sv_jacobi(const LMatrix& x) {
  const LMatrix gram = x.adjoint() * x;
  const long double tol = gram_zero_tol(gram);
  auto res = detail::jacobi_eigh<long double>(gram, 1e-18L, 200);
  for (long double& v : res.values) v = v <= tol ? 0.0L : std::sqrt(v);
  return res.values;
}

std::vector<long double> sv_charpoly(const LMatrix& x) {
  const LMatrix gram = x.adjoint() * x;
  const long double tol = gram_zero_tol(gram);
  std::vector<long double> ev = charpoly_eigenvalues(gram);
  for (long double& v : ev) v = v <= tol ? 0.0L : std::sqrt(v);
  return ev;
}

struct SidePair {
  LMatrix lhs_mat;
  LMatrix rhs_mat;
  long double lhs_scale = 1.0L;
  long double rhs_scale = 1.0L;
  bool eigen_route = false;  // corollary2_psd compares eigenvalues, not singular values
};

SidePair build_sides(const std::string& check, const LMatrix& a, const LMatrix& b,
                     const std::optional<LMatrix>& x, long double r, long double t) {
  SidePair sp{LMatrix(a.n()), LMatrix(a.n())};
  const LMatrix sum = a + b;
  if (check == "zhan") {
    sp.lhs_mat = power_ld(a, r) * power_ld(b, 2.0L - r) + power_ld(a, 2.0L - r) * power_ld(b, r);
    sp.rhs_mat = a * a + Scalar(t) * (a * b) + b * b;
    sp.lhs_scale = 2.0L + t;
    sp.rhs_scale = 2.0L;
  } else if (check == "zhan_norm") {
    const LMatrix xx = x ? *x : LMatrix::identity(a.n());
    sp.lhs_mat = power_ld(a, r) * xx * power_ld(b, 2.0L - r) +
                 power_ld(a, 2.0L - r) * xx * power_ld(b, r);
    sp.rhs_mat = a * a * xx + Scalar(t) * (a * xx * b) + xx * (b * b);
    sp.lhs_scale = 2.0L + t;
    sp.rhs_scale = 2.0L;
  } else if (check == "ag_mean") {
    sp.lhs_mat = a * b.adjoint();
    sp.rhs_mat = a.adjoint() * a + b.adjoint() * b;
    sp.lhs_scale = 2.0L;
  } else if (check == "bhatia_kittaneh") {
    sp.lhs_mat = power_ld(a, 0.5L) * power_ld(b, 1.5L) + power_ld(a, 1.5L) * power_ld(b, 0.5L);
    sp.rhs_mat = sum * sum;
    sp.lhs_scale = 2.0L;
  } else if (check == "drury") {
    sp.lhs_mat = a * b;
    sp.rhs_mat = sum * sum;
    sp.lhs_scale = 4.0L;
  } else if (check == "mean_comparison_re") {
    const LMatrix c = a * a + Scalar(t) * (a * b) + b * b;
    sp.lhs_mat = hermitian_part(c);
    sp.rhs_mat = c;
  } else if (check == "mean_comparison_sum") {
    sp.lhs_mat = sum * sum;
    sp.rhs_mat = a * a + Scalar(t) * (a * b) + b * b;
    sp.lhs_scale = (2.0L + t) / 4.0L;
  } else if (check == "corollary2_psd") {
    sp.lhs_mat = LMatrix(a.n());  // zero
    sp.rhs_mat = hermitian_part(a * a + Scalar(t) * (a * b) + b * b);
    sp.eigen_route = true;
  } else if (check == "corollary2_mean") {
    sp.lhs_mat = sum * sum;
    sp.rhs_mat = hermitian_part(a * a + Scalar(t) * (a * b) + b * b);
    sp.lhs_scale = 0.25L;
    sp.rhs_scale = 1.0L / (2.0L + t);
  } else {
    throw InvalidInput("recheck_margins: unknown check '" + check + "'");
  }
  return sp;
}

std::vector<long double> margins_from(const SidePair& sp, bool use_charpoly, int kyfan_k) {
  const auto solve = [&](const LMatrix& m) {
    if (sp.eigen_route)
      return use_charpoly ? charpoly_eigenvalues(m)
                          : detail::jacobi_eigh<long double>(m, 1e-18L, 200).values;
    return use_charpoly ? sv_charpoly(m) : sv_jacobi(m);
  };
  std::vector<long double> ls = solve(sp.lhs_mat);
  std::vector<long double> rs = solve(sp.rhs_mat);
  const int n = static_cast<int>(ls.size());
  if (kyfan_k > 0) {
    long double l = 0.0L, rsum = 0.0L;
    for (int j = 0; j < kyfan_k && j < n; ++j) {
      l += ls[j];
      rsum += rs[j];
    }
    return {sp.rhs_scale * rsum - sp.lhs_scale * l};
  }
  std::vector<long double> margins(n);
  for (int j = 0; j < n; ++j) margins[j] = sp.rhs_scale * rs[j] - sp.lhs_scale * ls[j];
  return margins;
}

}  // namespace

LMatrix widen(const MatrixC& m) {
  const int n = m.n();
  LMatrix out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out(i, j) = Scalar(m(i, j).real(), m(i, j).imag());
  return out;
}

std::vector<long double> eigenvalues_ld(const LMatrix& hermitian) {
  return detail::jacobi_eigh<long double>(hermitian, 1e-18L, 200).values;
}

std::vector<long double> charpoly_coefficients(const LMatrix& m) {
  // Faddeev-LeVerrier. Coefficients are real for Hermitian input.
  const int n = m.n();
  std::vector<long double> c(n);
  LMatrix mk = m;
  for (int kk = 1; kk <= n; ++kk) {
    if (kk > 1) {
      LMatrix shifted = mk;
      for (int i = 0; i < n; ++i) shifted(i, i) += c[kk - 2];
      mk = m * shifted;
    }
    c[kk - 1] = -mk.trace().real() / kk;
  }
  return c;
}

std::vector<long double> charpoly_eigenvalues(const LMatrix& hermitian) {
  if (hermitian.n() > 4)
    throw InvalidInput("charpoly_eigenvalues: supported only for n <= 4");
  std::vector<long double> roots = all_real_roots(charpoly_coefficients(hermitian));
  std::sort(roots.begin(), roots.end(), std::greater<long double>());
  return roots;
}

RecheckResult recheck_margins(const std::string& check, const MatrixC& a,
                              const MatrixC& b, const std::optional<MatrixC>& x,
                              std::optional<double> r, std::optional<double> t,
                              std::optional<int> k) {
  const LMatrix al = widen(a);
  const LMatrix bl = widen(b);
  std::optional<LMatrix> xl;
  if (x) xl = widen(*x);
  const SidePair sp = build_sides(check, al, bl, xl, r.value_or(1.0), t.value_or(0.0));
  const int kyfan_k = k.value_or(0);

  const std::vector<long double> mj = margins_from(sp, false, kyfan_k);
  RecheckResult out;
  out.margins.assign(mj.begin(), mj.end());
  out.min_margin = static_cast<double>(*std::min_element(mj.begin(), mj.end()));

  if (a.n() <= 4) {
    out.charpoly_available = true;
    const std::vector<long double> mc = margins_from(sp, true, kyfan_k);
    long double dev = 0.0L, scale = 1.0L;
    for (size_t j = 0; j < mj.size(); ++j) {
      dev = std::max(dev, std::abs(mj[j] - mc[j]));
      scale = std::max(scale, std::abs(mj[j]));
    }
    out.charpoly_agreed = dev <= 1e-10L * scale;
  }
  return out;
}

}  // namespace specheck::highprec
