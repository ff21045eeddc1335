#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <vector>

#include "errors.hpp"
#include "symbol.hpp"

namespace unilab {

enum class ChartKind { koenigs, boettcher, abel };

// A numerically evaluable linearizing coordinate at a fixed point, with the
// verified disk it lives on. Charts are immutable after construction.
struct ConjugacyChart {
  ChartKind kind = ChartKind::koenigs;
  HolomorphicMap f = HolomorphicMap::polynomial({cplx{0, 0}, cplx{0, 0}, cplx{1, 0}});
  FixedPointInfo info;
  double local_radius = 0.0;
  int depth = 0;
  int entry_budget = 512;

  // Koenigs
  cplx lambda{};
  double range_radius = 0.0; // verified image disk radius of the local coordinate

  // Boettcher
  int p = 0;
  cplx lead_coeff{};      // series coefficient a_p at the fixed point
  cplx lead_normalizer{}; // principal (p-1)-th root of a_p

  // Abel
  int m = 0;
  int petal_index = 0;
  cplx petal_coeff{};            // series coefficient a_{m+1}
  double log_correction_re = 0;  // b may be complex in general
  double log_correction_im = 0;
  std::vector<double> petal_angles; // attracting directions, sorted, size m

  cplx log_correction() const { return {log_correction_re, log_correction_im}; }
};

namespace detail {

inline double wrap_angle(double a) {
  while (a > std::numbers::pi) a -= 2.0 * std::numbers::pi;
  while (a <= -std::numbers::pi) a += 2.0 * std::numbers::pi;
  return a;
}

inline void require_chart_symbol(const HolomorphicMap& f) {
  if (f.is_affine())
    throw precondition_error("charts require a non-affine symbol");
}

// sup over boundary and interior samples of |f(z)-z0| / |z-z0|.
inline double contraction_ratio(const HolomorphicMap& f, cplx z0, double r) {
  double worst = 0.0;
  for (int ring = 1; ring <= 8; ++ring) {
    const double rho = r * ring / 8.0;
    for (int j = 0; j < 64; ++j) {
      const double th = 2.0 * std::numbers::pi * (j + 0.5) / 64.0;
      const cplx z = z0 + std::polar(rho, th);
      const cplx w = f(z);
      if (!is_finite(w)) return std::numeric_limits<double>::infinity();
      worst = std::max(worst, std::abs(w - z0) / rho);
    }
  }
  return worst;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Koenigs chart (attracting fixed point, 0 < |lambda| < 1)
// ---------------------------------------------------------------------------

inline ConjugacyChart make_koenigs_chart(const HolomorphicMap& f, cplx z0, int depth = 60,
                                         std::optional<double> radius_override = {}) {
  detail::require_chart_symbol(f);
  ConjugacyChart c;
  c.kind = ChartKind::koenigs;
  c.f = f;
  c.info = classify_fixed_point(f, z0);
  if (c.info.klass != FixedPointClass::attracting)
    throw precondition_error("koenigs chart requires an attracting fixed point");
  c.lambda = c.info.multiplier;
  c.depth = depth;

  const double q_target = (1.0 + std::abs(c.lambda)) / 2.0;
  double r = radius_override.value_or(0.5);
  for (;;) {
    if (r < 1e-8) throw non_convergence("koenigs chart: no contracting disk found");
    if (detail::contraction_ratio(f, z0, r) <= q_target) break;
    if (radius_override)
      throw precondition_error("koenigs chart: requested radius is not contracting");
    r *= 0.5;
  }
  c.local_radius = r;

  // Image of the chart disk contains the disk of the minimal boundary
  // modulus of the coordinate; keep a 5% discretization margin.
  const cplx lam_pow = std::pow(c.lambda, depth);
  double min_mod = std::numeric_limits<double>::infinity();
  for (int j = 0; j < 256; ++j) {
    const double th = 2.0 * std::numbers::pi * (j + 0.5) / 256.0;
    cplx w = z0 + std::polar(r, th);
    for (int n = 0; n < depth; ++n) w = f(w);
    min_mod = std::min(min_mod, std::abs((w - z0) / lam_pow));
  }
  c.range_radius = 0.95 * min_mod;
  return c;
}

namespace detail {

// Local coordinate on the chart disk, optionally with its derivative.
inline cplx koenigs_local(const ConjugacyChart& c, cplx z, cplx* deriv = nullptr) {
  cplx w = z;
  cplx dw{1.0, 0.0};
  for (int n = 0; n < c.depth; ++n) {
    if (deriv) dw *= c.f.derivative(w);
    w = c.f(w);
    if (!is_finite(w)) throw non_convergence("koenigs coordinate: orbit left the chart");
  }
  const cplx lam_pow = std::pow(c.lambda, c.depth);
  if (deriv) *deriv = dw / lam_pow;
  return (w - c.info.z0) / lam_pow;
}

} // namespace detail

// Extended linearizing coordinate on the basin: the orbit is pushed into the
// chart disk and pulled back through the functional equation.
inline cplx koenigs_phi(const ConjugacyChart& c, cplx z, int entry_budget = -1) {
  if (c.kind != ChartKind::koenigs)
    throw precondition_error("koenigs_phi: wrong chart kind");
  if (entry_budget < 0) entry_budget = c.entry_budget;
  cplx w = z;
  for (int m = 0; m <= entry_budget; ++m) {
    if (std::abs(w - c.info.z0) <= c.local_radius)
      return detail::koenigs_local(c, w) * std::pow(c.lambda, -m);
    w = c.f(w);
    if (!is_finite(w) || std::abs(w) > kEscapeGuard)
      throw not_in_basin("koenigs_phi: orbit escaped");
  }
  throw not_in_basin("koenigs_phi: no chart entry within budget");
}

// Inverse of the local coordinate on its verified range disk (Newton).
inline cplx koenigs_inverse(const ConjugacyChart& c, cplx w) {
  if (c.kind != ChartKind::koenigs)
    throw precondition_error("koenigs_inverse: wrong chart kind");
  if (std::abs(w) > c.range_radius)
    throw out_of_range_error("koenigs_inverse: target outside verified range disk");
  cplx z = c.info.z0 + w;
  if (std::abs(z - c.info.z0) > c.local_radius)
    z = c.info.z0 + w * (0.9 * c.local_radius / std::abs(w));
  for (int it = 0; it < 100; ++it) {
    cplx dphi;
    const cplx phi = detail::koenigs_local(c, z, &dphi);
    if (std::abs(phi - w) <= 1e-10) return z;
    cplx step = (phi - w) / dphi;
    // keep Newton inside the verified disk
    for (int h = 0; h < 40 && std::abs(z - step - c.info.z0) > 1.05 * c.local_radius; ++h)
      step *= 0.5;
    z -= step;
    if (!is_finite(z)) throw non_convergence("koenigs_inverse: Newton degenerated");
  }
  throw non_convergence("koenigs_inverse: no convergence");
}

// The unique chart-disk preimage z with f^n(z) = w, certified through the
// linearizing coordinate.
inline cplx inverse_branch(const ConjugacyChart& c, int n, cplx w) {
  if (c.kind != ChartKind::koenigs)
    throw precondition_error("inverse_branch: koenigs chart required");
  if (n < 0) throw precondition_error("inverse_branch: negative iterate");
  const cplx target = koenigs_phi(c, w) * std::pow(c.lambda, -n);
  if (std::abs(target) > c.range_radius)
    throw out_of_range_error("inverse_branch: image not certified in f^n(chart disk)");
  const cplx z = koenigs_inverse(c, target);
  const auto check = iterate(c.f, z, n);
  if (!check.ok() || std::abs(check.value - w) > 1e-8)
    throw out_of_range_error("inverse_branch: verification |f^n(z)-w| <= 1e-8 failed");
  return z;
}

// ---------------------------------------------------------------------------
// Boettcher chart (superattracting fixed point, local degree p)
// ---------------------------------------------------------------------------

inline ConjugacyChart make_boettcher_chart(const HolomorphicMap& f, cplx z0,
                                           int depth = 8) {
  detail::require_chart_symbol(f);
  ConjugacyChart c;
  c.kind = ChartKind::boettcher;
  c.f = f;
  c.info = classify_fixed_point(f, z0);
  if (c.info.klass != FixedPointClass::superattracting)
    throw precondition_error("boettcher chart requires a superattracting fixed point");
  c.p = c.info.p;
  c.depth = std::min(depth, 12); // deeper products underflow long before they matter

  const auto series = f.taylor(z0, c.p);
  c.lead_coeff = series[c.p];
  c.lead_normalizer = std::exp(std::log(c.lead_coeff) / double(c.p - 1));

  double r = 0.5;
  for (;;) {
    if (r < 1e-8) throw non_convergence("boettcher chart: no contracting disk found");
    const double ratio = detail::contraction_ratio(f, z0, r);
    if (ratio <= 0.5 && std::abs(c.lead_normalizer) * r <= 0.8) break;
    r *= 0.5;
  }
  c.local_radius = r;
  return c;
}

// Boettcher coordinate, branch tracked by root corrections nearest to 1.
inline cplx boettcher_phi(const ConjugacyChart& c, cplx z) {
  if (c.kind != ChartKind::boettcher)
    throw precondition_error("boettcher_phi: wrong chart kind");
  if (std::abs(z - c.info.z0) > c.local_radius)
    throw not_in_chart("boettcher_phi: point outside chart disk");
  if (z == c.info.z0) return {0.0, 0.0};

  // Work in the normalized coordinate w = c_norm (z - z0), where the
  // conjugated map is tangent to w^p and the product corrections tend to 1
  // double-exponentially.
  cplx zn = z;
  cplx w_prev = c.lead_normalizer * (z - c.info.z0);
  cplx phi = w_prev;
  double pk = double(c.p); // p^(n+1)
  for (int n = 0; n < c.depth; ++n) {
    zn = c.f(zn);
    if (!is_finite(zn)) throw not_in_chart("boettcher_phi: orbit left the chart");
    const cplx w = c.lead_normalizer * (zn - c.info.z0);
    if (std::abs(w_prev) < 1e-60) break; // remaining corrections are negligible
    cplx ratio = w;
    for (int q = 0; q < c.p; ++q) ratio /= w_prev;
    if (ratio == cplx{0.0, 0.0} || !is_finite(ratio))
      throw branch_ambiguity("boettcher_phi: degenerate correction ratio");
    const cplx corr = std::exp(std::log(ratio) / pk);
    if (std::abs(corr - cplx{1.0, 0.0}) >= 0.5)
      throw branch_ambiguity("boettcher_phi: branch correction jumped");
    phi *= corr;
    w_prev = w;
    pk *= double(c.p);
  }
  return phi;
}

// ---------------------------------------------------------------------------
// Abel chart (neutral fixed point, m attracting petals)
// ---------------------------------------------------------------------------

namespace detail {

struct PetalFrame {
  int m = 0;
  cplx a{};
  std::vector<double> angles; // sorted attracting directions
};

inline PetalFrame petal_frame(const HolomorphicMap& f, const FixedPointInfo& info) {
  PetalFrame fr;
  fr.m = info.m;
  const auto series = f.taylor(info.z0, 2 * info.m + 1);
  fr.a = series[info.m + 1];
  fr.angles.resize(fr.m);
  for (int j = 0; j < fr.m; ++j) {
    double th = (std::numbers::pi - std::arg(fr.a) + 2.0 * std::numbers::pi * j) / fr.m;
    th = std::fmod(th, 2.0 * std::numbers::pi);
    if (th < 0) th += 2.0 * std::numbers::pi;
    fr.angles[j] = th;
  }
  std::sort(fr.angles.begin(), fr.angles.end());
  return fr;
}

// Petal k region in polar form around its axis: |s| <= pi/(2m), rho <= 2r cos s.
inline bool in_petal_region(cplx zeta, double axis_angle, int m, double r) {
  const double rho = std::abs(zeta);
  if (rho == 0.0) return false; // the fixed point sits on the petal boundary
  const double s = wrap_angle(std::arg(zeta) - axis_angle);
  const double half = std::numbers::pi / (2.0 * m);
  if (std::abs(s) > half + 1e-12) return false;
  return rho <= 2.0 * r * std::cos(s) + 1e-12;
}

} // namespace detail

inline ConjugacyChart make_abel_chart(const HolomorphicMap& f, cplx z0, int petal_k = 1,
                                      int depth = 4000) {
  detail::require_chart_symbol(f);
  ConjugacyChart c;
  c.kind = ChartKind::abel;
  c.f = f;
  c.info = classify_fixed_point(f, z0);
  if (c.info.klass != FixedPointClass::neutral)
    throw precondition_error("abel chart requires a neutral fixed point");
  c.m = c.info.m;
  if (petal_k < 1 || petal_k > c.m)
    throw precondition_error("abel chart: petal index out of range");
  c.petal_index = petal_k;
  c.depth = depth;

  const auto fr = detail::petal_frame(f, c.info);
  c.petal_coeff = fr.a;
  c.petal_angles = fr.angles;

  const auto series = f.taylor(z0, 2 * c.m + 1);
  const cplx a = fr.a;
  const cplx c2 = series[2 * c.m + 1];
  const cplx b = cplx{double(c.m + 1) / (2.0 * c.m), 0.0} - c2 / (double(c.m) * a * a);
  c.log_correction_re = b.real();
  c.log_correction_im = b.imag();

  // Shrink the tangent petal until sampled points stay inside under f.
  const double axis = fr.angles[std::size_t(petal_k - 1)];
  double r = 0.4;
  for (;;) {
    if (r < 1e-6) throw non_convergence("abel chart: no invariant petal found");
    bool invariant = true;
    const double half = std::numbers::pi / (2.0 * c.m);
    for (int i = 0; invariant && i < 25; ++i) {
      const double s = -half + 2.0 * half * i / 24.0;
      for (int j = 1; invariant && j <= 12; ++j) {
        const double rho = (2.0 * r * std::cos(s)) * j / 12.0;
        if (rho <= 0.0) continue;
        const cplx z = z0 + std::polar(rho, axis + s);
        const cplx w = f(z);
        if (!is_finite(w) || !detail::in_petal_region(w - z0, axis, c.m, r))
          invariant = false;
      }
    }
    if (invariant) break;
    r *= 0.5;
  }
  c.local_radius = r;
  return c;
}

// Petal containing z, if any. Petals are pairwise disjoint by construction.
inline std::optional<int> petal_membership(const ConjugacyChart& c, cplx z) {
  if (c.kind != ChartKind::abel)
    throw precondition_error("petal_membership: abel chart required");
  const cplx zeta = z - c.info.z0;
  for (int k = 1; k <= c.m; ++k)
    if (detail::in_petal_region(zeta, c.petal_angles[std::size_t(k - 1)], c.m,
                                c.local_radius))
      return k;
  return std::nullopt;
}

// Abel coordinate through the sector coordinate u = -1/(m a zeta^m) with the
// standard logarithmic correction; stops early once increments stall at
// rounding level (exactly-translating maps converge immediately).
inline cplx abel_phi(const ConjugacyChart& c, cplx z) {
  if (c.kind != ChartKind::abel)
    throw precondition_error("abel_phi: wrong chart kind");
  if (petal_membership(c, z) != std::optional<int>(c.petal_index))
    throw not_in_petal("abel_phi: point not in the chart's petal");

  const cplx b = c.log_correction();
  const double ma = double(c.m);
  auto sector_u = [&](cplx zeta) {
    cplx zm{1.0, 0.0};
    for (int q = 0; q < c.m; ++q) zm *= zeta;
    return -1.0 / (ma * c.petal_coeff * zm);
  };

  cplx zn = z;
  cplx phi_prev{0.0, 0.0};
  bool have_prev = false;
  for (int n = 0;; ++n) {
    const cplx u = sector_u(zn - c.info.z0);
    if (!is_finite(u)) throw non_convergence("abel_phi: sector coordinate degenerated");
    const cplx phi = u - cplx{double(n), 0.0} - b * std::log(u);
    if (n >= c.depth) return phi;
    if (have_prev && n >= 8 &&
        std::abs(phi - phi_prev) <= 1e-13 * std::max(1.0, std::abs(phi)))
      return phi;
    phi_prev = phi;
    have_prev = true;
    zn = c.f(zn);
    if (!is_finite(zn)) throw non_convergence("abel_phi: orbit left the petal");
  }
}

} // namespace unilab
