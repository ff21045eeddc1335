#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "conjugacy.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "numeric.hpp"
#include "symbol.hpp"

namespace unilab {

struct PoleSpec {
  cplx location{};
  int max_order = 0;
};

// Rational function with a polynomial part plus principal parts at
// prescribed poles. Coefficients are laid out [polynomial ascending |
// per pole, orders descending].
class LaurentRational {
public:
  LaurentRational() = default; // the zero function

  LaurentRational(poly poly_part, std::vector<PoleSpec> poles,
                  std::vector<cplx> pole_coeffs)
      : poly_part_(std::move(poly_part)), poles_(std::move(poles)),
        pole_coeffs_(std::move(pole_coeffs)) {
    std::size_t want = 0;
    for (const auto& p : poles_) {
      if (p.max_order < 1)
        throw precondition_error("LaurentRational: pole order must be >= 1");
      want += std::size_t(p.max_order);
    }
    if (want != pole_coeffs_.size())
      throw precondition_error("LaurentRational: coefficient count mismatch");
  }

  const poly& polynomial_part() const { return poly_part_; }
  const std::vector<PoleSpec>& poles() const { return poles_; }
  const std::vector<cplx>& pole_coefficients() const { return pole_coeffs_; }

  int poly_degree_bound() const { return int(poly_part_.size()) - 1; }
  std::size_t basis_size() const { return poly_part_.size() + pole_coeffs_.size(); }

  cplx operator()(cplx z) const {
    cplx v = poly_eval(poly_part_, z);
    std::size_t at = 0;
    for (const auto& p : poles_) {
      const cplx inv = 1.0 / (z - p.location);
      // descending orders: c_ord inv^ord + ... + c_1 inv^1
      cplx acc{0.0, 0.0};
      for (int j = 0; j < p.max_order; ++j) acc = (acc + pole_coeffs_[at + j]) * inv;
      // The loop above computes (((c_ord) inv + c_{ord-1}) inv + ...) inv,
      // which telescopes to the principal part evaluated at z.
      v += acc;
      at += std::size_t(p.max_order);
    }
    return v;
  }

private:
  poly poly_part_;
  std::vector<PoleSpec> poles_;
  std::vector<cplx> pole_coeffs_;
};

namespace detail {

inline std::vector<cplx> laurent_basis_row(cplx z, int poly_degree,
                                           const std::vector<PoleSpec>& poles) {
  std::vector<cplx> row;
  std::size_t n = std::size_t(poly_degree + 1);
  for (const auto& p : poles) n += std::size_t(p.max_order);
  row.reserve(n);
  cplx zp{1.0, 0.0};
  for (int k = 0; k <= poly_degree; ++k) {
    row.push_back(zp);
    zp *= z;
  }
  for (const auto& p : poles) {
    const cplx inv = 1.0 / (z - p.location);
    std::vector<cplx> asc(std::size_t(p.max_order));
    cplx ip = inv;
    for (int j = 0; j < p.max_order; ++j) {
      asc[std::size_t(j)] = ip;
      ip *= inv;
    }
    for (int j = p.max_order; j-- > 0;) row.push_back(asc[std::size_t(j)]);
  }
  return row;
}

} // namespace detail

// Least-squares fit of a LaurentRational to point samples.
inline std::pair<LaurentRational, double>
fit_rational(const std::vector<cplx>& sample_points, const std::vector<cplx>& targets,
             const std::vector<PoleSpec>& pole_spec, int poly_degree, double ridge) {
  if (sample_points.empty() || sample_points.size() != targets.size())
    throw precondition_error("fit_rational: need matching nonempty samples");
  if (poly_degree < 0) throw precondition_error("fit_rational: negative degree");
  for (cplx z : sample_points)
    for (const auto& p : pole_spec)
      if (std::abs(z - p.location) < 1e-12)
        throw precondition_error("fit_rational: sample collides with a pole");

  std::vector<std::vector<cplx>> rows;
  rows.reserve(sample_points.size());
  for (cplx z : sample_points)
    rows.push_back(detail::laurent_basis_row(z, poly_degree, pole_spec));
  const auto sol = solve_least_squares(rows, targets, ridge);

  poly poly_part(sol.coeffs.begin(), sol.coeffs.begin() + poly_degree + 1);
  std::vector<cplx> pole_coeffs(sol.coeffs.begin() + poly_degree + 1, sol.coeffs.end());
  LaurentRational r(std::move(poly_part), pole_spec, std::move(pole_coeffs));

  double max_err = 0.0;
  for (std::size_t i = 0; i < sample_points.size(); ++i)
    max_err = std::max(max_err, std::abs(r(sample_points[i]) - targets[i]));
  return {std::move(r), max_err};
}

// A compact represented by fit samples plus a 4x denser validation set.
struct SampledCompact {
  std::vector<cplx> fit_pts;
  std::vector<cplx> val_pts;

  double diameter() const {
    double d = 0.0;
    for (std::size_t i = 0; i < fit_pts.size(); ++i)
      for (std::size_t j = i + 1; j < fit_pts.size(); ++j)
        d = std::max(d, std::abs(fit_pts[i] - fit_pts[j]));
    return d;
  }
};

// Closed disk sampled on its boundary circle (sup norms of holomorphic
// functions live there).
inline SampledCompact disk_compact(cplx center, double radius, int boundary_samples) {
  if (radius <= 0.0 || boundary_samples < 4)
    throw precondition_error("disk_compact: bad parameters");
  SampledCompact c;
  auto ring = [&](int n, std::vector<cplx>& out) {
    out.reserve(std::size_t(n));
    for (int j = 0; j < n; ++j) {
      const double th = 2.0 * std::numbers::pi * (j + 0.5) / n;
      out.push_back(center + std::polar(radius, th));
    }
  };
  ring(boundary_samples, c.fit_pts);
  ring(4 * boundary_samples, c.val_pts);
  return c;
}

// Raster-born compact; requires a hole-free mask. Rasters carry no denser
// information, so validation reuses the pixel centers.
inline SampledCompact raster_compact(const CompactGridSet& k) {
  if (count_holes(k) != 0)
    throw precondition_error("raster_compact: target compact has holes");
  SampledCompact c;
  c.fit_pts = k.sample_points();
  c.val_pts = c.fit_pts;
  return c;
}

// Target values aligned with a SampledCompact's fit and validation points.
struct SampledFunction {
  std::vector<cplx> fit_vals;
  std::vector<cplx> val_vals;
};

template <class F>
SampledFunction sample_on(const SampledCompact& L, F&& h) {
  SampledFunction s;
  s.fit_vals.reserve(L.fit_pts.size());
  s.val_vals.reserve(L.val_pts.size());
  for (cplx z : L.fit_pts) s.fit_vals.push_back(h(z));
  for (cplx z : L.val_pts) s.val_vals.push_back(h(z));
  return s;
}

// Union of already-pinned image compacts the next approximant must preserve.
struct KeepSet {
  std::vector<cplx> fit_pts;
  std::vector<cplx> val_pts;

  bool empty() const { return fit_pts.empty(); }
  void absorb(const std::vector<cplx>& fit, const std::vector<cplx>& val) {
    fit_pts.insert(fit_pts.end(), fit.begin(), fit.end());
    val_pts.insert(val_pts.end(), val.begin(), val.end());
  }
  double diameter() const {
    double d = 0.0;
    for (std::size_t i = 0; i < fit_pts.size(); ++i)
      for (std::size_t j = i + 1; j < fit_pts.size(); ++j)
        d = std::max(d, std::abs(fit_pts[i] - fit_pts[j]));
    return d;
  }
};

struct TransitivityResult {
  int n = 0;
  LaurentRational r;
  double err_keep = 0.0;
  double err_target = 0.0;
  int basis_size = 0;
};

namespace detail {

inline void advance_all(const HolomorphicMap& f, std::vector<cplx>& pts, int step) {
  for (auto& z : pts) {
    z = f(z);
    if (!is_finite(z)) throw pole_hit(step);
    if (std::abs(z) > kEscapeGuard) throw orbit_escaped(step);
  }
}

inline double min_distance(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double best = std::numeric_limits<double>::infinity();
  for (cplx p : a)
    for (cplx q : b) best = std::min(best, std::abs(p - q));
  return best;
}

struct EscalationStep {
  int poly_degree;
  std::vector<PoleSpec> poles;
  int total;
};

// Basis sizes double up to the cap; each size tries a balanced
// polynomial/pole split, a pole-heavy split (deep principal parts resolve
// data at scales far below the outermost samples), and a pure polynomial.
inline std::vector<EscalationStep> escalation_ladder(const std::vector<cplx>& punctures,
                                                     int cap = 256) {
  std::vector<EscalationStep> out;
  const int groups = 1 + int(punctures.size());
  for (int size = 8; size <= cap; size *= 2) {
    {
      EscalationStep s;
      const int share = std::max(1, size / groups);
      s.poly_degree = share - 1;
      for (cplx p : punctures) s.poles.push_back({p, share});
      s.total = share * groups;
      out.push_back(std::move(s));
    }
    if (!punctures.empty() && size >= 16) {
      EscalationStep s;
      const int poly_terms = std::max(4, size / 8);
      const int order = std::max(1, (size - poly_terms) / int(punctures.size()));
      s.poly_degree = poly_terms - 1;
      for (cplx p : punctures) s.poles.push_back({p, order});
      s.total = poly_terms + order * int(punctures.size());
      out.push_back(std::move(s));
    }
    {
      EscalationStep s;
      s.poly_degree = size - 1;
      s.total = size;
      out.push_back(std::move(s));
    }
  }
  return out;
}

} // namespace detail

// One topological-transitivity step: find the first iterate whose image of
// the target compact clears the keep set, then fit a rational function that
// looks like g_current on the keep set and like the target composed with the
// inverse branch on the image. Both sup errors are validated on the denser
// sample sets.
inline TransitivityResult
transitivity_step(const HolomorphicMap& f, const ConjugacyChart& chart,
                  const std::vector<cplx>& omega_punctures,
                  const LaurentRational& g_current, const KeepSet& keep,
                  const SampledCompact& l_target, const SampledFunction& h_target,
                  double eps, int n_max, int n_start = 1) {
  if (chart.kind != ChartKind::koenigs)
    throw precondition_error("transitivity_step: koenigs chart required");
  if (l_target.fit_pts.empty() || h_target.fit_vals.size() != l_target.fit_pts.size() ||
      h_target.val_vals.size() != l_target.val_pts.size())
    throw precondition_error("transitivity_step: target sampling mismatch");
  for (cplx z : l_target.fit_pts)
    if (std::abs(z - chart.info.z0) > chart.local_radius)
      throw precondition_error("transitivity_step: target compact leaves the chart disk");
  if (n_start < 1) n_start = 1;

  const double margin =
      keep.empty() ? 0.0 : std::max(1e-9, 0.1 * keep.diameter());

  std::vector<cplx> img_fit = l_target.fit_pts;
  std::vector<cplx> img_val = l_target.val_pts;
  std::optional<int> found;
  for (int n = 1; n <= n_max; ++n) {
    detail::advance_all(f, img_fit, n);
    detail::advance_all(f, img_val, n);
    if (n < n_start) continue;
    if (keep.empty() || (detail::min_distance(img_fit, keep.fit_pts) > margin &&
                         detail::min_distance(img_val, keep.fit_pts) > margin)) {
      found = n;
      break;
    }
  }
  if (!found)
    throw no_disjoint_n("transitivity_step: no iterate separates the target from the keep set");

  // Combined interpolation data: preserve g_current on the keep set, realize
  // h on the image (the inverse branch of f^N maps image samples back to the
  // original target samples, so the values pair up directly).
  std::vector<cplx> pts = keep.fit_pts;
  std::vector<cplx> vals;
  vals.reserve(pts.size() + img_fit.size());
  for (cplx z : keep.fit_pts) vals.push_back(g_current(z));
  pts.insert(pts.end(), img_fit.begin(), img_fit.end());
  vals.insert(vals.end(), h_target.fit_vals.begin(), h_target.fit_vals.end());

  double best_seen = std::numeric_limits<double>::infinity();
  for (const auto& rung : detail::escalation_ladder(omega_punctures)) {
    std::optional<std::pair<LaurentRational, double>> fit;
    try {
      fit = fit_rational(pts, vals, rung.poles, rung.poly_degree, 0.0);
    } catch (const ill_conditioned&) {
      fit = fit_rational(pts, vals, rung.poles, rung.poly_degree, 1e-12);
    }
    double err_keep = 0.0;
    for (std::size_t i = 0; i < keep.val_pts.size(); ++i)
      err_keep = std::max(err_keep, std::abs(fit->first(keep.val_pts[i]) -
                                             g_current(keep.val_pts[i])));
    double err_target = 0.0;
    for (std::size_t i = 0; i < img_val.size(); ++i)
      err_target = std::max(err_target,
                            std::abs(fit->first(img_val[i]) - h_target.val_vals[i]));
    best_seen = std::min(best_seen, std::max(err_keep, err_target));
    if (err_keep < eps && err_target < eps)
      return {*found, std::move(fit->first), err_keep, err_target, rung.total};
  }
  throw approximation_failed(best_seen);
}

struct ScheduleTarget {
  SampledCompact L;
  SampledFunction h;
  double eps = 1e-2;
};

struct UniversalSchedule {
  LaurentRational g;
  std::vector<int> indices;
  std::vector<double> achieved;    // final sup error per target, validation samples
  std::vector<int> basis_sizes;    // escalation outcome per step
};

// Realize a finite family of targets through consecutive transitivity steps.
// Step j works at half its own budget; earlier targets keep the other half,
// split evenly over the remaining steps.
inline UniversalSchedule
build_universal_schedule(const HolomorphicMap& f, const ConjugacyChart& chart,
                         const std::vector<cplx>& omega_punctures,
                         const std::vector<ScheduleTarget>& targets, int n_max = 64) {
  UniversalSchedule sched;
  if (targets.empty()) return sched;

  const int total = int(targets.size());
  KeepSet keep;
  std::vector<std::vector<cplx>> pinned_val; // f^{N_j}(L_j) validation images
  int n_start = 1;
  for (int k = 0; k < total; ++k) {
    double eps_step = targets[std::size_t(k)].eps / 2.0;
    for (int j = 0; j < k; ++j)
      eps_step = std::min(eps_step,
                          targets[std::size_t(j)].eps / (2.0 * (total - 1 - j)));
    auto step = transitivity_step(f, chart, omega_punctures, sched.g, keep,
                                  targets[std::size_t(k)].L, targets[std::size_t(k)].h,
                                  eps_step, n_max, n_start);
    std::vector<cplx> img_fit = targets[std::size_t(k)].L.fit_pts;
    std::vector<cplx> img_val = targets[std::size_t(k)].L.val_pts;
    for (int n = 1; n <= step.n; ++n) {
      detail::advance_all(f, img_fit, n);
      detail::advance_all(f, img_val, n);
    }
    keep.absorb(img_fit, img_val);
    pinned_val.push_back(std::move(img_val));
    sched.g = std::move(step.r);
    sched.indices.push_back(step.n);
    sched.basis_sizes.push_back(step.basis_size);
    n_start = step.n + 1;
  }

  for (int j = 0; j < total; ++j) {
    double err = 0.0;
    const auto& vals = targets[std::size_t(j)].h.val_vals;
    for (std::size_t i = 0; i < vals.size(); ++i)
      err = std::max(err, std::abs(sched.g(pinned_val[std::size_t(j)][i]) - vals[i]));
    if (err > targets[std::size_t(j)].eps) throw approximation_failed(err);
    sched.achieved.push_back(err);
  }
  return sched;
}

// C(E)-style universality for a finite set: realize each prescribed value
// vector at some iterate of E by extending the interpolation system.
inline UniversalSchedule
finite_set_universal(const HolomorphicMap& f, const std::vector<cplx>& e,
                     const std::vector<cplx>& omega_punctures,
                     const std::vector<std::vector<cplx>>& value_targets, double eps,
                     int n_budget = 64) {
  if (e.empty()) throw precondition_error("finite_set_universal: empty point set");
  for (const auto& v : value_targets)
    if (v.size() != e.size())
      throw precondition_error("finite_set_universal: value vector size mismatch");

  const auto verdict = finite_injectivity_check(f, e, n_budget);
  if (!verdict.injective)
    throw injectivity_violated(verdict.n, verdict.i, verdict.j);

  UniversalSchedule sched;
  if (value_targets.empty()) return sched;

  std::vector<cplx> pts, vals;
  std::vector<std::vector<cplx>> images;
  std::vector<cplx> orbit = e;
  int n_prev = 0;
  int n_at = 0;
  for (const auto& target : value_targets) {
    std::optional<int> found;
    for (int n = n_prev + 1; n <= n_budget; ++n) {
      while (n_at < n) detail::advance_all(f, orbit, ++n_at);
      double scale = 1.0;
      for (cplx w : orbit) scale = std::max(scale, std::abs(w));
      const double sep = 1e-8 * scale;
      bool ok = true;
      for (std::size_t i = 0; ok && i < orbit.size(); ++i)
        for (std::size_t j = i + 1; ok && j < orbit.size(); ++j)
          if (std::abs(orbit[i] - orbit[j]) < sep) ok = false;
      for (std::size_t i = 0; ok && i < orbit.size(); ++i)
        for (cplx q : pts)
          if (std::abs(orbit[i] - q) < sep) {
            ok = false;
            break;
          }
      if (ok) {
        found = n;
        break;
      }
    }
    if (!found)
      throw no_disjoint_n("finite_set_universal: no iterate separates the point images");
    n_prev = *found;
    sched.indices.push_back(*found);
    images.push_back(orbit);
    for (std::size_t i = 0; i < orbit.size(); ++i) {
      pts.push_back(orbit[i]);
      vals.push_back(target[i]);
    }
  }

  double best_seen = std::numeric_limits<double>::infinity();
  for (const auto& rung : detail::escalation_ladder(omega_punctures)) {
    std::optional<std::pair<LaurentRational, double>> fit;
    try {
      fit = fit_rational(pts, vals, rung.poles, rung.poly_degree, 0.0);
    } catch (const ill_conditioned&) {
      fit = fit_rational(pts, vals, rung.poles, rung.poly_degree, 1e-12);
    }
    best_seen = std::min(best_seen, fit->second);
    if (fit->second <= eps) {
      sched.g = std::move(fit->first);
      for (std::size_t t = 0; t < value_targets.size(); ++t) {
        double err = 0.0;
        for (std::size_t i = 0; i < e.size(); ++i)
          err = std::max(err, std::abs(sched.g(images[t][i]) - value_targets[t][i]));
        sched.achieved.push_back(err);
        sched.basis_sizes.push_back(rung.total);
      }
      return sched;
    }
  }
  throw approximation_failed(best_seen);
}

} // namespace unilab
