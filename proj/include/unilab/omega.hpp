#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include "conjugacy.hpp"
#include "errors.hpp"
#include "numeric.hpp"
#include "runge.hpp"
#include "symbol.hpp"

namespace unilab {

// All solutions of f^n(z) = w. The iterated map is composed symbolically as
// a rational function (degree capped), the roots come from the companion
// matrix and are polished and verified against the orbit.
inline std::vector<cplx> collision_pairs(const HolomorphicMap& f, cplx w, int n,
                                         int degree_cap = 64) {
  if (n < 1) throw precondition_error("collision_pairs: need n >= 1");
  poly num = f.numerator();
  poly den = f.denominator();
  for (int k = 1; k < n; ++k) {
    if (std::max(poly_degree(num), poly_degree(den)) * f.degree() > degree_cap)
      throw degree_cap_exceeded("collision_pairs: deg(f^n) exceeds the cap");
    // f(num/den): substitute and clear denominators at the outer degree.
    const int outer = std::max(poly_degree(f.numerator()), poly_degree(f.denominator()));
    std::vector<poly> num_pow{poly{cplx{1.0, 0.0}}};
    std::vector<poly> den_pow{poly{cplx{1.0, 0.0}}};
    for (int q = 1; q <= outer; ++q) {
      num_pow.push_back(poly_mul(num_pow.back(), num));
      den_pow.push_back(poly_mul(den_pow.back(), den));
    }
    auto lift = [&](const poly& coeffs) {
      poly acc;
      for (int q = 0; q <= outer; ++q) {
        if (q >= int(coeffs.size())) continue;
        acc = poly_add(acc, poly_scale(poly_mul(num_pow[std::size_t(q)],
                                                den_pow[std::size_t(outer - q)]),
                                       coeffs[std::size_t(q)]));
      }
      return acc;
    };
    poly new_num = lift(f.numerator());
    poly new_den = lift(f.denominator());
    num = poly_trim(std::move(new_num), 0.0);
    den = poly_trim(std::move(new_den), 0.0);
  }
  if (std::max(poly_degree(num), poly_degree(den)) > degree_cap)
    throw degree_cap_exceeded("collision_pairs: deg(f^n) exceeds the cap");

  // roots of num(z) - w den(z)
  const poly target = poly_add(num, poly_scale(den, -w));
  auto roots = polynomial_roots(target);

  // collapse multiplicities, keep verified preimages only
  std::vector<cplx> out;
  for (cplx z : roots) {
    bool dup = false;
    for (cplx seen : out)
      if (std::abs(z - seen) < 1e-8) {
        dup = true;
        break;
      }
    if (dup) continue;
    try {
      const auto check = iterate(f, z, n);
      if (check.ok() && std::abs(check.value - w) <= 1e-8) out.push_back(z);
    } catch (const pole_hit&) {
      // spurious root from clearing denominators
    }
  }
  std::sort(out.begin(), out.end(), [](cplx a, cplx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return out;
}

struct FiberViolation {
  cplx z{}, w{};
  double fiber_gap = 0.0; // |Phi(z) - Phi(w)|
  double value_gap = 0.0; // |h(z) - h(w)|
};

struct FiberReport {
  std::size_t pairs_checked = 0;
  std::vector<FiberViolation> violations;
  std::vector<FiberViolation> non_identified; // cross-petal near-coincidences
  double tol_in = 0.0;
  double tol_out = 0.0;
};

namespace detail {

// canonical pair enumeration: reports must not depend on input order
inline std::vector<std::size_t> sorted_order(const std::vector<cplx>& pts) {
  std::vector<std::size_t> idx(pts.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (pts[a].real() != pts[b].real()) return pts[a].real() < pts[b].real();
    return pts[a].imag() < pts[b].imag();
  });
  return idx;
}

} // namespace detail

// Flags sample pairs that sit on one coordinate fiber but take different
// h-values; an empty violation list certifies compatibility with functions
// factoring through the coordinate, at sample resolution.
inline FiberReport phi_fiber_check(const ConjugacyChart& chart,
                                   const std::vector<cplx>& points,
                                   const std::vector<cplx>& h_values, double tol_in,
                                   double tol_out) {
  if (points.size() != h_values.size())
    throw precondition_error("phi_fiber_check: sample size mismatch");
  FiberReport rep;
  rep.tol_in = tol_in;
  rep.tol_out = tol_out;
  const auto order = detail::sorted_order(points);
  std::vector<cplx> phi(points.size());
  for (std::size_t i = 0; i < points.size(); ++i)
    phi[i] = koenigs_phi(chart, points[i]);
  for (std::size_t a = 0; a < order.size(); ++a)
    for (std::size_t b = a + 1; b < order.size(); ++b) {
      const std::size_t i = order[a], j = order[b];
      ++rep.pairs_checked;
      const double gap = std::abs(phi[i] - phi[j]);
      if (gap > tol_in) continue;
      const double vgap = std::abs(h_values[i] - h_values[j]);
      if (vgap > tol_out)
        rep.violations.push_back({points[i], points[j], gap, vgap});
    }
  return rep;
}

// Petal-indexed variant: pairs are identified only within equal petal index;
// cross-petal pairs with nearly equal Abel values are reported separately as
// non-identified (they witness that the plain coordinate conflates fibers
// the indexed coordinate keeps apart).
inline FiberReport phi_star_fiber_check(const std::vector<ConjugacyChart>& charts,
                                        const std::vector<cplx>& points,
                                        const std::vector<int>& petal_labels,
                                        const std::vector<cplx>& h_values, double tol_in,
                                        double tol_out) {
  if (charts.size() < 2)
    throw petal_count_too_small("phi_star_fiber_check: need m >= 2 petals");
  if (points.size() != h_values.size() || points.size() != petal_labels.size())
    throw precondition_error("phi_star_fiber_check: sample size mismatch");
  for (const auto& c : charts)
    if (c.kind != ChartKind::abel)
      throw precondition_error("phi_star_fiber_check: abel charts required");

  FiberReport rep;
  rep.tol_in = tol_in;
  rep.tol_out = tol_out;
  std::vector<cplx> phi(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const int k = petal_labels[i];
    if (k < 1 || k > int(charts.size()))
      throw precondition_error("phi_star_fiber_check: petal label out of range");
    phi[i] = abel_phi(charts[std::size_t(k - 1)], points[i]);
  }
  const auto order = detail::sorted_order(points);
  for (std::size_t a = 0; a < order.size(); ++a)
    for (std::size_t b = a + 1; b < order.size(); ++b) {
      const std::size_t i = order[a], j = order[b];
      ++rep.pairs_checked;
      const double gap = std::abs(phi[i] - phi[j]);
      if (gap > tol_in) continue;
      const double vgap = std::abs(h_values[i] - h_values[j]);
      if (petal_labels[i] == petal_labels[j]) {
        if (vgap > tol_out)
          rep.violations.push_back({points[i], points[j], gap, vgap});
      } else {
        rep.non_identified.push_back({points[i], points[j], gap, vgap});
      }
    }
  return rep;
}

// Pointwise values of g of f^{n_k} at the last index, provided the last
// evaluations are Cauchy; nullopt otherwise (including escaped orbits).
inline std::optional<std::vector<cplx>>
omega_limit_estimate(const LaurentRational& g, const HolomorphicMap& f,
                     const std::vector<int>& indices, const std::vector<cplx>& points,
                     double cauchy_tol) {
  if (indices.size() < 3)
    throw precondition_error("omega_limit_estimate: need at least 3 indices");
  for (std::size_t k = 1; k < indices.size(); ++k)
    if (indices[k] <= indices[k - 1])
      throw precondition_error("omega_limit_estimate: indices must increase strictly");

  std::vector<std::vector<cplx>> rows;
  std::vector<cplx> orbit = points;
  int n_at = 0;
  for (int idx : indices) {
    for (; n_at < idx; ++n_at) {
      for (auto& z : orbit) {
        z = f(z);
        if (!is_finite(z) || std::abs(z) > kEscapeGuard) return std::nullopt;
      }
    }
    std::vector<cplx> row(orbit.size());
    for (std::size_t i = 0; i < orbit.size(); ++i) row[i] = g(orbit[i]);
    rows.push_back(std::move(row));
  }
  const auto& last = rows[rows.size() - 1];
  const auto& mid = rows[rows.size() - 2];
  const auto& first = rows[rows.size() - 3];
  double change = 0.0;
  for (std::size_t i = 0; i < last.size(); ++i) {
    change = std::max(change, std::abs(last[i] - mid[i]));
    change = std::max(change, std::abs(mid[i] - first[i]));
  }
  if (change <= cauchy_tol) return last;
  return std::nullopt;
}

} // namespace unilab
