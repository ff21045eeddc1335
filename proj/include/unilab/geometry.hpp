#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "poly.hpp"

namespace unilab {

inline bool is_finite(cplx z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// Square pixel grid. Row 0 is the top of the image (largest imaginary part),
// pixels are sampled at their centers.
struct GridSpec {
  cplx center{0.0, 0.0};
  double half_width = 1.0;
  int resolution = 512;

  bool valid() const { return resolution >= 2 && half_width > 0.0; }
  double pixel_size() const { return 2.0 * half_width / resolution; }
  double pixel_diagonal() const { return pixel_size() * std::sqrt(2.0); }

  cplx pixel_center(int ix, int iy) const {
    const double ps = pixel_size();
    return {center.real() - half_width + (ix + 0.5) * ps,
            center.imag() + half_width - (iy + 0.5) * ps};
  }

  // Pixel containing z, or nullopt if z falls outside the grid.
  std::optional<std::pair<int, int>> locate(cplx z) const {
    const double ps = pixel_size();
    const double fx = (z.real() - (center.real() - half_width)) / ps;
    const double fy = ((center.imag() + half_width) - z.imag()) / ps;
    const int ix = int(std::floor(fx));
    const int iy = int(std::floor(fy));
    if (ix < 0 || iy < 0 || ix >= resolution || iy >= resolution) return std::nullopt;
    return std::make_pair(ix, iy);
  }
};

// A nonempty compact set, either as a raster mask over a grid or as a finite
// point cloud. Exactly one representation is populated.
class CompactGridSet {
public:
  static CompactGridSet from_mask(GridSpec grid, std::vector<std::uint8_t> mask) {
    if (!grid.valid()) throw precondition_error("CompactGridSet: invalid grid");
    if (mask.size() != std::size_t(grid.resolution) * grid.resolution)
      throw precondition_error("CompactGridSet: mask size does not match grid");
    CompactGridSet s;
    s.grid_ = grid;
    s.mask_ = std::move(mask);
    if (s.set_count() == 0) throw precondition_error("CompactGridSet: empty mask");
    return s;
  }

  static CompactGridSet from_points(std::vector<cplx> points) {
    if (points.empty()) throw precondition_error("CompactGridSet: empty point cloud");
    for (cplx p : points)
      if (!is_finite(p)) throw precondition_error("CompactGridSet: non-finite point");
    CompactGridSet s;
    s.points_ = std::move(points);
    return s;
  }

  bool is_raster() const { return grid_.has_value(); }
  const GridSpec& grid() const {
    if (!grid_) throw unsupported_representation("raster representation required");
    return *grid_;
  }
  const std::vector<std::uint8_t>& mask() const {
    if (!grid_) throw unsupported_representation("raster representation required");
    return mask_;
  }
  const std::vector<cplx>& points() const {
    if (grid_) throw unsupported_representation("point-cloud representation required");
    return points_;
  }

  bool pixel(int ix, int iy) const {
    return mask()[std::size_t(iy) * grid_->resolution + ix] != 0;
  }

  std::size_t set_count() const {
    if (!grid_) return points_.size();
    std::size_t n = 0;
    for (auto v : mask_) n += (v != 0);
    return n;
  }

  // Centers of set pixels (raster) or the stored points (cloud).
  std::vector<cplx> sample_points() const {
    if (!grid_) return points_;
    std::vector<cplx> pts;
    pts.reserve(set_count());
    for (int iy = 0; iy < grid_->resolution; ++iy)
      for (int ix = 0; ix < grid_->resolution; ++ix)
        if (pixel(ix, iy)) pts.push_back(grid_->pixel_center(ix, iy));
    return pts;
  }

private:
  CompactGridSet() = default;
  std::optional<GridSpec> grid_;
  std::vector<std::uint8_t> mask_;
  std::vector<cplx> points_;
};

// Rasterize a membership predicate over pixel centers.
template <class Pred>
CompactGridSet rasterize(const GridSpec& grid, Pred&& inside) {
  std::vector<std::uint8_t> mask(std::size_t(grid.resolution) * grid.resolution, 0);
  for (int iy = 0; iy < grid.resolution; ++iy)
    for (int ix = 0; ix < grid.resolution; ++ix)
      if (inside(grid.pixel_center(ix, iy)))
        mask[std::size_t(iy) * grid.resolution + ix] = 1;
  return CompactGridSet::from_mask(grid, std::move(mask));
}

namespace detail {

// Directed Hausdorff sup_{a in A} dist(a, B), early-exit scan on squared
// distances.
inline double directed_hausdorff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double worst_sq = 0.0;
  for (cplx p : a) {
    double best_sq = std::numeric_limits<double>::infinity();
    for (cplx q : b) {
      const double dr = p.real() - q.real();
      const double di = p.imag() - q.imag();
      const double d = dr * dr + di * di;
      if (d < best_sq) {
        best_sq = d;
        if (best_sq <= worst_sq) break; // cannot raise the max
      }
    }
    if (best_sq > worst_sq) worst_sq = best_sq;
  }
  return std::sqrt(worst_sq);
}

// Flood-filled complement labels over a 1-pixel padded copy of the raster.
// Label -2: set pixel; -1: outer complement; >=0: hole id.
struct HoleLabels {
  int width = 0;
  std::vector<int> label; // padded (res+2)^2, row-major
  int hole_count = 0;
  int at(int ix, int iy) const { return label[std::size_t(iy + 1) * width + (ix + 1)]; }
};

inline HoleLabels label_holes(const CompactGridSet& k) {
  const auto& g = k.grid();
  const int res = g.resolution;
  HoleLabels out;
  out.width = res + 2;
  const int n = out.width * out.width;
  out.label.assign(n, -3); // -3: unvisited complement
  for (int iy = 0; iy < res; ++iy)
    for (int ix = 0; ix < res; ++ix)
      if (k.pixel(ix, iy)) out.label[std::size_t(iy + 1) * out.width + (ix + 1)] = -2;

  // Complement is 4-connected (set pixels are 8-connected by duality).
  auto flood = [&](int seed, int id) {
    std::vector<int> stack{seed};
    out.label[seed] = id;
    while (!stack.empty()) {
      const int c = stack.back();
      stack.pop_back();
      const int cx = c % out.width, cy = c / out.width;
      const int nb[4] = {c - 1, c + 1, c - out.width, c + out.width};
      const bool ok[4] = {cx > 0, cx + 1 < out.width, cy > 0, cy + 1 < out.width};
      for (int d = 0; d < 4; ++d)
        if (ok[d] && out.label[nb[d]] == -3) {
          out.label[nb[d]] = id;
          stack.push_back(nb[d]);
        }
    }
  };

  flood(0, -1); // padding frame seeds the unbounded component
  for (int i = 0; i < n; ++i)
    if (out.label[i] == -3) flood(i, out.hole_count++);
  return out;
}

} // namespace detail

// Hausdorff distance between two compacts in the same representation.
inline double hausdorff_distance(const CompactGridSet& a, const CompactGridSet& b) {
  if (a.is_raster() != b.is_raster())
    throw precondition_error("hausdorff_distance: mixed representations");
  const auto pa = a.sample_points();
  const auto pb = b.sample_points();
  if (pa.empty() || pb.empty())
    throw precondition_error("hausdorff_distance: empty set");
  return std::max(detail::directed_hausdorff(pa, pb),
                  detail::directed_hausdorff(pb, pa));
}

// Number of bounded complementary components of a raster set.
inline int count_holes(const CompactGridSet& k) {
  return detail::label_holes(k).hole_count;
}

// K united with every hole of K containing none of the excluded points.
// With an empty exclusion list this is the polynomially convex hull.
inline CompactGridSet relative_hull(const CompactGridSet& k,
                                    const std::vector<cplx>& omega_excluded) {
  const auto labels = detail::label_holes(k);
  const auto& g = k.grid();
  std::vector<std::uint8_t> keep_hole(std::size_t(std::max(labels.hole_count, 1)), 0);
  for (cplx p : omega_excluded) {
    const auto loc = g.locate(p);
    if (!loc) continue; // punctures outside the grid cannot sit in a hole
    const int id = labels.at(loc->first, loc->second);
    if (id >= 0) keep_hole[id] = 1;
  }
  std::vector<std::uint8_t> mask(k.mask());
  for (int iy = 0; iy < g.resolution; ++iy)
    for (int ix = 0; ix < g.resolution; ++ix) {
      const int id = labels.at(ix, iy);
      if (id >= 0 && !keep_hole[id]) mask[std::size_t(iy) * g.resolution + ix] = 1;
    }
  return CompactGridSet::from_mask(g, std::move(mask));
}

} // namespace unilab
