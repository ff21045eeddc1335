#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "conjugacy.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "util.hpp"

namespace unilab {

// The logarithmic spiral cut S0 = {delta lambda^t : t > 0} u {0} and its
// bilateral extension {delta lambda^s : s in R}. Distances exploit the
// lambda-self-similarity of the extension: queries are rescaled into the
// fundamental annulus delta|lambda| <= |w| < delta, where a precomputed
// parameter table brackets the minimum and golden-section refines it.
class SpiralCut {
public:
  SpiralCut(double delta, cplx lambda) : delta_(delta), lambda_(lambda) {
    if (!(delta > 0.0)) throw precondition_error("SpiralCut: delta must be positive");
    const double mod = std::abs(lambda);
    if (!(mod > 0.0) || !(mod < 1.0))
      throw precondition_error("SpiralCut: need 0 < |lambda| < 1");
    log_lambda_ = std::log(lambda); // principal branch
    const double winding = std::abs(log_lambda_.imag());
    window_ = 6.0 + (winding > 1e-12 ? 2.0 * (2.0 * std::numbers::pi / winding) : 0.0);
    density_ = 64.0 + 32.0 * winding;

    const double ext_lo = -window_, ext_hi = window_ + 1.0;
    build_table(ext_lo, ext_hi, ext_t0_, ext_dt_, ext_pts_);

    // truncate the one-sided table where the spiral is better approximated
    // by its endpoint 0
    s0_tmax_ = 10.0 * std::numbers::ln10 / (-log_lambda_.real());
    build_table(0.0, s0_tmax_, s0_t0_, s0_dt_, s0_pts_);
  }

  double delta() const { return delta_; }
  cplx lambda() const { return lambda_; }
  double window() const { return window_; }

  cplx point(double t) const { return delta_ * std::exp(t * log_lambda_); }

  // Distance to S0 (extended=false) or to the full spiral (extended=true).
  double distance(cplx w, bool extended) const {
    if (!is_finite(w)) throw precondition_error("spiral distance: non-finite point");
    if (!extended) return distance_s0(w);
    const double aw = std::abs(w);
    if (aw == 0.0) return 0.0; // the closure of the full spiral reaches 0

    // rescale into the fundamental annulus; distances scale by |lambda|^-k
    const double la = log_lambda_.real();
    int k = int(std::floor((std::log(delta_) - std::log(aw)) / la));
    while (std::log(aw) + k * la >= std::log(delta_)) ++k;
    while (std::log(aw) + k * la < std::log(delta_) + la) --k;
    const cplx wt = std::exp(std::log(w) + double(k) * log_lambda_);
    const double d = scan_and_refine(wt, ext_pts_, ext_t0_, ext_dt_, -window_,
                                     window_ + 1.0);
    return d * std::exp(-double(k) * la);
  }

private:
  void build_table(double lo, double hi, double& t0, double& dt,
                   std::vector<cplx>& pts) const {
    const int n = std::max(16, int(std::ceil((hi - lo) * density_)));
    t0 = lo;
    dt = (hi - lo) / n;
    pts.resize(std::size_t(n) + 1);
    for (int i = 0; i <= n; ++i) pts[std::size_t(i)] = point(lo + i * dt);
  }

  static double dist_to(cplx w, cplx p) {
    const double dr = w.real() - p.real(), di = w.imag() - p.imag();
    return std::sqrt(dr * dr + di * di);
  }

  double golden(cplx w, double a, double b) const {
    constexpr double inv_phi = 0.6180339887498949;
    double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
    double f1 = dist_to(w, point(x1)), f2 = dist_to(w, point(x2));
    for (int it = 0; it < 80; ++it) {
      if (f1 < f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - inv_phi * (b - a);
        f1 = dist_to(w, point(x1));
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + inv_phi * (b - a);
        f2 = dist_to(w, point(x2));
      }
    }
    return std::min(f1, f2);
  }

  // Scan a table slice, then refine the best few local minima.
  double scan_and_refine(cplx w, const std::vector<cplx>& pts, double t0, double dt,
                         double lo, double hi) const {
    const int n = int(pts.size());
    int i_lo = std::max(0, int(std::floor((lo - t0) / dt)));
    int i_hi = std::min(n - 1, int(std::ceil((hi - t0) / dt)));
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::pair<double, int>> minima;
    double prev2 = std::numeric_limits<double>::infinity();
    double prev = std::numeric_limits<double>::infinity();
    for (int i = i_lo; i <= i_hi; ++i) {
      const double d = dist_to(w, pts[std::size_t(i)]);
      best = std::min(best, d);
      if (i > i_lo + 1 && prev <= prev2 && prev <= d) minima.emplace_back(prev, i - 1);
      prev2 = prev;
      prev = d;
    }
    minima.emplace_back(prev, i_hi); // closing sample may hide the bracket edge
    minima.emplace_back(dist_to(w, pts[std::size_t(i_lo)]), i_lo);
    std::sort(minima.begin(), minima.end());
    const std::size_t refine = std::min<std::size_t>(minima.size(), 4);
    for (std::size_t q = 0; q < refine; ++q) {
      const int i = minima[q].second;
      const double a = t0 + std::max(i_lo, i - 1) * dt;
      const double b = t0 + std::min(i_hi, i + 1) * dt;
      best = std::min(best, golden(w, a, b));
    }
    return best;
  }

  double distance_s0(cplx w) const {
    const double aw = std::abs(w);
    double best = aw;                      // endpoint 0
    best = std::min(best, std::abs(w - cplx{delta_, 0.0})); // closure endpoint t=0
    if (aw == 0.0) return 0.0;
    const double la = log_lambda_.real();
    const double t_star = (std::log(aw) - std::log(delta_)) / la;
    const double lo = std::max(0.0, t_star - window_);
    const double hi = std::min(s0_tmax_, t_star + window_);
    if (lo < hi)
      best = std::min(best, scan_and_refine(w, s0_pts_, s0_t0_, s0_dt_, lo, hi));
    return best;
  }

  double delta_;
  cplx lambda_;
  cplx log_lambda_;
  double window_ = 6.0;
  double density_ = 64.0;
  std::vector<cplx> ext_pts_;
  double ext_t0_ = 0, ext_dt_ = 1;
  std::vector<cplx> s0_pts_;
  double s0_t0_ = 0, s0_dt_ = 1, s0_tmax_ = 1;
};

// Membership in V0 = (open delta-disk) \ S0, at a raster clearance.
inline bool in_V0(const SpiralCut& s, cplx w, double clearance) {
  if (!(clearance > 0.0)) throw precondition_error("in_V0: clearance must be positive");
  return std::abs(w) < s.delta() && s.distance(w, false) > clearance;
}

// Collapsed membership test for G0: since phi(f^n(z)) = lambda^n Phi(z) and
// the full spiral is lambda-invariant, z lies in G0 exactly when Phi(z)
// avoids the full spiral and 0. Points within the clearance resolve
// conservatively to "not in G0".
inline bool in_G0(const ConjugacyChart& chart, const SpiralCut& s, cplx z, int n_max,
                  double clearance) {
  cplx phi;
  try {
    phi = koenigs_phi(chart, z, n_max);
  } catch (const not_in_basin&) {
    return false;
  }
  if (phi == cplx{0.0, 0.0}) return false; // backward orbit of the fixed point
  return s.distance(phi, true) > clearance;
}

// Direct union-of-preimages test: first orbit value inside the delta-disk of
// the local coordinate decides membership (the indicator is invariant under
// further iteration once the clearance is scaled along with the dynamics).
inline bool in_G0_direct(const ConjugacyChart& chart, const SpiralCut& s, cplx z,
                         int n_max, double clearance) {
  cplx w = z;
  for (int n = 0; n <= n_max; ++n) {
    if (std::abs(w - chart.info.z0) <= chart.local_radius) {
      cplx v = koenigs_phi(chart, w, 0);
      for (int j = n; j <= n_max; ++j) {
        const double scaled = clearance * std::pow(std::abs(chart.lambda), j);
        if (std::abs(v) < s.delta())
          return scaled > 0.0 && in_V0(s, v, scaled);
        v *= chart.lambda;
      }
      return false;
    }
    w = chart.f(w);
    if (!is_finite(w) || std::abs(w) > kEscapeGuard) return false;
  }
  return false;
}

struct G0Render {
  CompactGridSet g0;    // pixels in G0
  CompactGridSet basin; // pixels certified in the basin within the budget
};

// Raster of in_G0 over pixel centers, with the basin certificate alongside.
inline G0Render render_g0(const ConjugacyChart& chart, const SpiralCut& s,
                          const GridSpec& grid, int n_max, double clearance) {
  const int res = grid.resolution;
  std::vector<std::uint8_t> g0_mask(std::size_t(res) * res, 0);
  std::vector<std::uint8_t> basin_mask(std::size_t(res) * res, 0);
  parallel_for_rows(res, [&](int iy) {
    for (int ix = 0; ix < res; ++ix) {
      const cplx z = grid.pixel_center(ix, iy);
      cplx phi;
      try {
        phi = koenigs_phi(chart, z, n_max);
      } catch (const not_in_basin&) {
        continue;
      }
      const std::size_t at = std::size_t(iy) * res + ix;
      basin_mask[at] = 1;
      if (phi != cplx{0.0, 0.0} && s.distance(phi, true) > clearance) g0_mask[at] = 1;
    }
  });
  return {CompactGridSet::from_mask(grid, std::move(g0_mask)),
          CompactGridSet::from_mask(grid, std::move(basin_mask))};
}

// Least-squares slope of log N(eps) against log(1/eps) over box counts.
inline double box_dimension(const CompactGridSet& mask, const std::vector<int>& scales) {
  const auto& g = mask.grid();
  if (scales.size() < 3)
    throw precondition_error("box_dimension: need at least 3 scales");
  for (std::size_t i = 0; i < scales.size(); ++i) {
    if (scales[i] < 1) throw precondition_error("box_dimension: scales must be >= 1");
    if (i > 0 && scales[i] <= scales[i - 1])
      throw precondition_error("box_dimension: scales must be strictly increasing");
  }
  if (mask.set_count() == 0) throw degenerate_fit("box_dimension: empty mask");

  const int res = g.resolution;
  std::vector<double> xs, ys;
  for (int s : scales) {
    const int nb = (res + s - 1) / s;
    std::vector<std::uint8_t> boxes(std::size_t(nb) * nb, 0);
    for (int iy = 0; iy < res; ++iy)
      for (int ix = 0; ix < res; ++ix)
        if (mask.pixel(ix, iy)) boxes[std::size_t(iy / s) * nb + (ix / s)] = 1;
    std::size_t count = 0;
    for (auto v : boxes) count += v;
    xs.push_back(std::log(1.0 / double(s)));
    ys.push_back(std::log(double(count)));
  }
  const double n = double(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i], my += ys[i];
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0) throw degenerate_fit("box_dimension: degenerate scale list");
  return sxy / sxx;
}

} // namespace unilab
