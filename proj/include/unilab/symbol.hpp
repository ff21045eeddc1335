#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "geometry.hpp"
#include "poly.hpp"

namespace unilab {

// Orbit magnitude beyond which a point counts as escaped.
inline constexpr double kEscapeGuard = 1e150;

enum class MapKind { polynomial, rational, blaschke };

// A polynomial or rational symbol in rational normal form num/den; the
// Blaschke family z(z-alpha)/(1-conj(alpha) z) keeps its parameter for
// round-tripping configs.
class HolomorphicMap {
public:
  static HolomorphicMap polynomial(poly coeffs) {
    coeffs = poly_trim(std::move(coeffs));
    if (coeffs.empty()) coeffs = {cplx{0.0, 0.0}};
    return HolomorphicMap(MapKind::polynomial, std::move(coeffs), poly{cplx{1.0, 0.0}},
                          cplx{});
  }

  static HolomorphicMap rational(poly num, poly den) {
    num = poly_trim(std::move(num));
    den = poly_trim(std::move(den));
    if (den.empty()) throw precondition_error("rational map: zero denominator");
    if (num.empty()) num = {cplx{0.0, 0.0}};
    return HolomorphicMap(MapKind::rational, std::move(num), std::move(den), cplx{});
  }

  static HolomorphicMap blaschke(cplx alpha) {
    if (std::abs(alpha) >= 1.0)
      throw precondition_error("blaschke map requires |alpha| < 1");
    poly num{cplx{0.0, 0.0}, -alpha, cplx{1.0, 0.0}};
    poly den{cplx{1.0, 0.0}, -std::conj(alpha)};
    HolomorphicMap m(MapKind::blaschke, std::move(num), std::move(den), alpha);
    return m;
  }

  MapKind kind() const { return kind_; }
  cplx blaschke_alpha() const { return alpha_; }
  const poly& numerator() const { return num_; }
  const poly& denominator() const { return den_; }
  bool is_polynomial() const { return poly_degree(den_) == 0; }
  int degree() const { return std::max(poly_degree(num_), poly_degree(den_)); }

  cplx operator()(cplx z) const { return poly_eval(num_, z) / poly_eval(den_, z); }

  cplx derivative(cplx z) const {
    const cplx p = poly_eval(num_, z), q = poly_eval(den_, z);
    const cplx dp = poly_eval(dnum_, z), dq = poly_eval(dden_, z);
    return (dp * q - p * dq) / (q * q);
  }

  // Taylor coefficients of the map at z0 up to the given order; z0 must not
  // be a pole.
  std::vector<cplx> taylor(cplx z0, int order) const {
    const poly pn = poly_shift(num_, z0);
    const poly pd = poly_shift(den_, z0);
    if (pd.empty() || std::abs(pd[0]) == 0.0)
      throw precondition_error("taylor expansion at a pole");
    return series_mul(pn, series_inverse(pd, order + 1), order + 1);
  }

  // Affine maps have no nonlinear germ anywhere; charts reject them.
  bool is_affine() const { return degree() <= 1 && is_polynomial(); }

private:
  HolomorphicMap(MapKind k, poly num, poly den, cplx alpha)
      : kind_(k), num_(std::move(num)), den_(std::move(den)),
        dnum_(poly_derivative(num_)), dden_(poly_derivative(den_)), alpha_(alpha) {}

  MapKind kind_;
  poly num_, den_;
  poly dnum_, dden_;
  cplx alpha_;
};

enum class FixedPointClass {
  superattracting,
  attracting,
  neutral,
  irrationally_indifferent,
  repelling
};

inline const char* to_string(FixedPointClass c) {
  switch (c) {
    case FixedPointClass::superattracting: return "superattracting";
    case FixedPointClass::attracting: return "attracting";
    case FixedPointClass::neutral: return "neutral";
    case FixedPointClass::irrationally_indifferent: return "irrationally_indifferent";
    case FixedPointClass::repelling: return "repelling";
  }
  return "?";
}

struct FixedPointInfo {
  cplx z0{};
  cplx multiplier{};
  FixedPointClass klass = FixedPointClass::attracting;
  int p = 0; // local degree, superattracting only
  int m = 0; // petal count, neutral only
};

struct IterateResult {
  enum class Status { ok, escaped } status = Status::ok;
  cplx value{};
  int steps = 0; // escape step, or n on success
  bool ok() const { return status == Status::ok; }
};

// f^n(z) with overflow guard; f^0 is the identity. A pole throws, escape is
// reported as a marker.
inline IterateResult iterate(const HolomorphicMap& f, cplx z, int n) {
  if (n < 0) throw precondition_error("iterate: negative count");
  for (int k = 1; k <= n; ++k) {
    z = f(z);
    if (!is_finite(z)) throw pole_hit(k);
    if (std::abs(z) > kEscapeGuard) return {IterateResult::Status::escaped, z, k};
  }
  return {IterateResult::Status::ok, z, n};
}

inline cplx iterate_value(const HolomorphicMap& f, cplx z, int n) {
  const auto r = iterate(f, z, n);
  if (!r.ok()) throw orbit_escaped(r.steps);
  return r.value;
}

// Newton on f(z) - z from the given seed. Iterates past the acceptance
// tolerance until progress stalls: at a multiple root (parabolic points)
// the residual shrinks only linearly, and stopping at the first 1e-12
// would leave the multiplier thousands of ulps off the unit circle.
inline cplx find_fixed_point(const HolomorphicMap& f, cplx guess) {
  cplx z = guess;
  cplx best = guess;
  double best_res = std::abs(f(guess) - guess);
  for (int k = 0; k < 100; ++k) {
    const cplx g = f(z) - z;
    const double res = std::abs(g);
    if (res < best_res) {
      best_res = res;
      best = z;
    }
    if (res == 0.0) break;
    const cplx dg = f.derivative(z) - 1.0;
    const cplx step = g / dg;
    if (!is_finite(step)) break;
    const cplx next = z - step;
    if (!is_finite(next) || std::abs(next) > kEscapeGuard) break;
    if (res <= 1e-12 && std::abs(f(next) - next) >= res) {
      z = next;
      break;
    }
    z = next;
  }
  const double final_res = std::abs(f(z) - z);
  if (final_res < best_res) {
    best = z;
    best_res = final_res;
  }
  if (best_res <= 1e-12) return best;
  throw non_convergence("fixed-point Newton: no convergence in 100 steps");
}

inline FixedPointInfo classify_fixed_point(const HolomorphicMap& f, cplx z0) {
  if (std::abs(f(z0) - z0) > 1e-10)
    throw not_a_fixed_point("classify_fixed_point: |f(z0)-z0| > 1e-10");
  constexpr int kOrder = 16;
  const auto c = f.taylor(z0, kOrder);
  double scale = 1.0;
  for (const cplx& v : c) scale = std::max(scale, std::abs(v));
  const double coeff_tol = 1e-12 * scale;
  auto nonzero = [&](int k) { return k < int(c.size()) && std::abs(c[k]) > coeff_tol; };

  FixedPointInfo info;
  info.z0 = z0;
  info.multiplier = c.size() > 1 ? c[1] : cplx{0.0, 0.0};
  const double mod = std::abs(info.multiplier);
  if (mod <= 1e-9) {
    info.klass = FixedPointClass::superattracting;
    for (int k = 2; k <= kOrder; ++k)
      if (nonzero(k)) {
        info.p = k;
        break;
      }
    if (info.p == 0)
      throw precondition_error("classify_fixed_point: locally constant germ");
  } else if (mod < 1.0 - 1e-9) {
    info.klass = FixedPointClass::attracting;
  } else if (std::abs(mod - 1.0) <= 1e-9) {
    if (std::abs(info.multiplier - cplx{1.0, 0.0}) <= 1e-9) {
      info.klass = FixedPointClass::neutral;
      for (int k = 2; k <= kOrder; ++k)
        if (nonzero(k)) {
          info.m = k - 1;
          break;
        }
      if (info.m == 0)
        throw precondition_error("classify_fixed_point: neutral point of the identity germ");
    } else {
      info.klass = FixedPointClass::irrationally_indifferent;
    }
  } else {
    info.klass = FixedPointClass::repelling;
  }
  return info;
}

// Smallest N <= n_max whose image of the sample set clears the set by more
// than the safety margin; nullopt when no iterate separates. margin < 0
// selects the default (pixel diagonal for rasters, 0 for clouds).
inline std::optional<int> run_away_index(const HolomorphicMap& f, const CompactGridSet& k,
                                         int n_max, double margin = -1.0) {
  const auto base = k.sample_points();
  if (base.empty()) throw precondition_error("run_away_index: empty compact");
  if (margin < 0.0) margin = k.is_raster() ? k.grid().pixel_diagonal() : 0.0;

  std::vector<cplx> orbit = base;
  for (int n = 1; n <= n_max; ++n) {
    for (auto& z : orbit) {
      z = f(z);
      if (!is_finite(z)) throw pole_hit(n);
      if (std::abs(z) > kEscapeGuard) throw orbit_escaped(n);
    }
    double min_sq = std::numeric_limits<double>::infinity();
    const double margin_sq = margin * margin;
    bool close = false;
    for (cplx w : orbit) {
      double best = std::numeric_limits<double>::infinity();
      for (cplx p : base) {
        const double dr = w.real() - p.real(), di = w.imag() - p.imag();
        best = std::min(best, dr * dr + di * di);
        if (best <= margin_sq) break;
      }
      min_sq = std::min(min_sq, best);
      if (min_sq <= margin_sq) {
        close = true;
        break;
      }
    }
    if (!close && min_sq > margin_sq) return n;
  }
  return std::nullopt;
}

// Pixels whose orbit enters the eps-disk around z0 within n_max steps.
// Escaped or pole-hitting orbits are simply unmarked.
inline CompactGridSet basin_raster(const HolomorphicMap& f, cplx z0, const GridSpec& grid,
                                   int n_max, double eps) {
  return rasterize(grid, [&](cplx z) {
    for (int n = 0; n <= n_max; ++n) {
      if (std::abs(z - z0) < eps) return true;
      z = f(z);
      if (!is_finite(z) || std::abs(z) > kEscapeGuard) return false;
    }
    return false;
  });
}

struct InjectivityVerdict {
  bool injective = true;
  int n = 0; // first collapsing iterate, or the checked bound
  int i = 0, j = 0;
};

// Two orbit values collide when they agree to 1e-10 relative to their own
// scale; orbits contracting jointly toward a fixed point would otherwise
// all "collide" in absolute terms once small enough.
inline bool orbit_values_collide(cplx a, cplx b) {
  return std::abs(a - b) < 1e-10 * std::max(std::abs(a), std::abs(b));
}

// First iterate (up to n_max) collapsing two entries of e, if any. Orbits
// that escape or hit a pole drop out of further comparisons.
inline InjectivityVerdict finite_injectivity_check(const HolomorphicMap& f,
                                                   const std::vector<cplx>& e, int n_max) {
  for (std::size_t i = 0; i < e.size(); ++i)
    for (std::size_t j = i + 1; j < e.size(); ++j)
      if (std::abs(e[i] - e[j]) < 1e-10)
        throw precondition_error("finite_injectivity_check: entries not distinct");

  std::vector<cplx> orbit = e;
  std::vector<std::uint8_t> alive(e.size(), 1);
  for (int n = 1; n <= n_max; ++n) {
    for (std::size_t i = 0; i < orbit.size(); ++i) {
      if (!alive[i]) continue;
      orbit[i] = f(orbit[i]);
      if (!is_finite(orbit[i]) || std::abs(orbit[i]) > kEscapeGuard) alive[i] = 0;
    }
    for (std::size_t i = 0; i < orbit.size(); ++i)
      for (std::size_t j = i + 1; j < orbit.size(); ++j)
        if (alive[i] && alive[j] && orbit_values_collide(orbit[i], orbit[j]))
          return {false, n, int(i), int(j)};
  }
  return {true, n_max, 0, 0};
}

} // namespace unilab
