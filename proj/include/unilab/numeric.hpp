#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "errors.hpp"
#include "poly.hpp"

namespace unilab {

// Column-equilibrated complex least squares min |A c - t|^2 + ridge |c|^2.
// Throws ill_conditioned when ridge is zero and the pivoted-QR diagonal
// ratio estimates the condition above 1e14.
struct LeastSquaresResult {
  std::vector<cplx> coeffs;
  double condition_estimate = 0.0;
};

inline LeastSquaresResult solve_least_squares(const std::vector<std::vector<cplx>>& rows,
                                              const std::vector<cplx>& rhs,
                                              double ridge) {
  if (rows.empty() || rows.size() != rhs.size())
    throw precondition_error("least squares: empty or mismatched system");
  const Eigen::Index n = Eigen::Index(rows.size());
  const Eigen::Index m = Eigen::Index(rows.front().size());
  if (m == 0) throw precondition_error("least squares: empty basis");

  Eigen::MatrixXcd a(n, m);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (Eigen::Index(rows[std::size_t(i)].size()) != m)
      throw precondition_error("least squares: ragged rows");
    for (Eigen::Index j = 0; j < m; ++j) a(i, j) = rows[std::size_t(i)][std::size_t(j)];
  }
  Eigen::VectorXcd b(n);
  for (Eigen::Index i = 0; i < n; ++i) b(i) = rhs[std::size_t(i)];

  Eigen::VectorXd scale(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    const double s = a.col(j).norm();
    scale(j) = s > 0.0 ? s : 1.0;
    a.col(j) /= scale(j);
  }

  Eigen::MatrixXcd sys;
  Eigen::VectorXcd sys_rhs;
  if (ridge > 0.0) {
    // Tikhonov rows act on the unscaled coefficients: c_j = y_j / scale_j.
    sys.resize(n + m, m);
    sys_rhs.resize(n + m);
    sys.topRows(n) = a;
    sys.bottomRows(m).setZero();
    for (Eigen::Index j = 0; j < m; ++j) sys(n + j, j) = std::sqrt(ridge) / scale(j);
    sys_rhs.head(n) = b;
    sys_rhs.tail(m).setZero();
  } else {
    sys = a;
    sys_rhs = b;
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(sys);
  const auto& r = qr.matrixR();
  const Eigen::Index d = std::min(sys.rows(), m);
  const double r0 = std::abs(r(0, 0));
  const double rk = std::abs(r(d - 1, d - 1));
  const double cond = rk > 0.0 ? r0 / rk : std::numeric_limits<double>::infinity();
  if (ridge <= 0.0 && cond > 1e14) throw ill_conditioned(cond);

  const Eigen::VectorXcd y = qr.solve(sys_rhs);
  LeastSquaresResult out;
  out.condition_estimate = cond;
  out.coeffs.resize(std::size_t(m));
  for (Eigen::Index j = 0; j < m; ++j)
    out.coeffs[std::size_t(j)] = y(j) / scale(j);
  return out;
}

// Roots of a polynomial via the companion matrix, polished by Newton steps
// on the original coefficients.
inline std::vector<cplx> polynomial_roots(const poly& p_in) {
  poly p = poly_trim(p_in, 0.0);
  // strip negligible leading coefficients relative to the largest one
  double scale = 0.0;
  for (const cplx& c : p) scale = std::max(scale, std::abs(c));
  if (scale > 0.0) p = poly_trim(std::move(p), 1e-14 * scale);
  const int deg = int(p.size()) - 1;
  if (deg <= 0) return {};

  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -p[std::size_t(i)] / p.back();

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  if (solver.info() != Eigen::Success)
    throw non_convergence("polynomial_roots: eigensolver failed");

  const poly dp = poly_derivative(p);
  std::vector<cplx> roots(static_cast<std::size_t>(deg));
  for (int i = 0; i < deg; ++i) {
    cplx z = solver.eigenvalues()(i);
    for (int it = 0; it < 6; ++it) {
      const cplx v = poly_eval(p, z);
      const cplx d = poly_eval(dp, z);
      if (std::abs(d) == 0.0) break;
      const cplx step = v / d;
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
      if (std::abs(poly_eval(p, z - step)) < std::abs(v)) z -= step;
      else break;
    }
    roots[std::size_t(i)] = z;
  }
  std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return roots;
}

} // namespace unilab
