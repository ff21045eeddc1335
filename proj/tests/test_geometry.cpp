#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "unilab/geometry.hpp"
#include "unilab/io.hpp"

using namespace unilab;

namespace {

CompactGridSet cloud(std::initializer_list<cplx> pts) {
  return CompactGridSet::from_points(std::vector<cplx>(pts));
}

std::vector<cplx> random_cloud(std::mt19937& rng, int n, double box = 2.0) {
  std::uniform_real_distribution<double> u(-box, box);
  std::vector<cplx> pts;
  pts.reserve(std::size_t(n));
  for (int i = 0; i < n; ++i) pts.emplace_back(u(rng), u(rng));
  return pts;
}

CompactGridSet disk_raster(const GridSpec& g, cplx c, double r) {
  return rasterize(g, [&](cplx z) { return std::abs(z - c) <= r; });
}

CompactGridSet annulus_raster(const GridSpec& g, cplx c, double r0, double r1) {
  return rasterize(g, [&](cplx z) {
    const double d = std::abs(z - c);
    return d >= r0 && d <= r1;
  });
}

} // namespace

TEST_CASE("hausdorff distance on singletons") {
  CHECK(hausdorff_distance(cloud({{0, 0}}), cloud({{0, 0}})) == doctest::Approx(0.0));
  CHECK(hausdorff_distance(cloud({{0, 0}}), cloud({{1, 0}})) == doctest::Approx(1.0));
}

TEST_CASE("hausdorff distance matches the exhaustive scan on random clouds") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const auto a = random_cloud(rng, 20);
    const auto b = random_cloud(rng, 20);
    const double got =
        hausdorff_distance(CompactGridSet::from_points(a), CompactGridSet::from_points(b));
    CHECK(got == doctest::Approx(oracles::exhaustive_hausdorff(a, b)).epsilon(1e-12));
  }
}

TEST_CASE("hausdorff distance is a metric on sampled sets") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_cloud(rng, 12);
    const auto b = random_cloud(rng, 15);
    const auto c = random_cloud(rng, 9);
    const auto A = CompactGridSet::from_points(a);
    const auto B = CompactGridSet::from_points(b);
    const auto C = CompactGridSet::from_points(c);
    CHECK(hausdorff_distance(A, A) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(hausdorff_distance(A, B) ==
          doctest::Approx(hausdorff_distance(B, A)).epsilon(1e-12));
    CHECK(hausdorff_distance(A, C) <=
          hausdorff_distance(A, B) + hausdorff_distance(B, C) + 1e-12);
  }
}

TEST_CASE("hausdorff distance rejects mixed representations and empties") {
  const GridSpec g{{0, 0}, 1.0, 32};
  const auto raster = disk_raster(g, {0, 0}, 0.5);
  CHECK_THROWS_AS(hausdorff_distance(raster, cloud({{0, 0}})), precondition_error);
}

TEST_CASE("count_holes on canonical shapes") {
  const GridSpec g{{0, 0}, 1.0, 96};
  CHECK(count_holes(disk_raster(g, {0, 0}, 0.6)) == 0);
  CHECK(count_holes(annulus_raster(g, {0, 0}, 0.3, 0.6)) == 1);
  const auto two = rasterize(g, [&](cplx z) {
    const double d0 = std::abs(z - cplx{-0.45, 0.0});
    const double d1 = std::abs(z - cplx{0.45, 0.0});
    return (d0 >= 0.15 && d0 <= 0.35) || (d1 >= 0.15 && d1 <= 0.35);
  });
  CHECK(count_holes(two) == 2);
}

TEST_CASE("count_holes requires a raster") {
  CHECK_THROWS_AS(count_holes(cloud({{0, 0}})), unsupported_representation);
}

TEST_CASE("relative_hull fills and preserves holes as prescribed") {
  const GridSpec g{{0, 0}, 1.0, 96};
  const auto annulus = annulus_raster(g, {0, 0}, 0.3, 0.6);
  const auto disk = disk_raster(g, {0, 0}, 0.6);

  const auto hull = relative_hull(annulus, {});
  CHECK(hull.mask() == disk.mask());

  const auto kept = relative_hull(annulus, {cplx{0, 0}});
  CHECK(kept.mask() == annulus.mask());
}

TEST_CASE("relative_hull matches the per-hole flood-fill oracle on random blobs") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> u(-0.25, 0.25);
  const GridSpec g{{0, 0}, 1.0, 72};
  for (int trial = 0; trial < 40; ++trial) {
    const cplx c1{-0.35 + u(rng) * 0.4, u(rng)};
    const cplx c2{0.35 + u(rng) * 0.4, u(rng)};
    const auto blob = rasterize(g, [&](cplx z) {
      if (std::abs(z) > 0.85) return false;
      return std::abs(z - c1) > 0.14 && std::abs(z - c2) > 0.14;
    });
    // one excluded point inside the first punched hole
    const std::vector<cplx> excluded{c1};
    const auto hull = relative_hull(blob, excluded);
    CHECK(hull.mask() == oracles::relative_hull_uf(blob, excluded));
    // the hole containing c1 survives, the other is filled
    const auto remaining = count_holes(hull);
    CHECK(remaining == 1);
  }
}

TEST_CASE("relative_hull is idempotent and monotone in the exclusion list") {
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  const GridSpec g{{0, 0}, 1.0, 64};
  for (int trial = 0; trial < 20; ++trial) {
    const cplx c1{u(rng) - 0.3, u(rng)};
    const cplx c2{u(rng) + 0.3, u(rng)};
    const auto blob = rasterize(g, [&](cplx z) {
      if (std::abs(z) > 0.8) return false;
      return std::abs(z - c1) > 0.12 && std::abs(z - c2) > 0.12;
    });
    const auto h1 = relative_hull(blob, {c1});
    const auto h1_again = relative_hull(h1, {c1});
    CHECK(h1.mask() == h1_again.mask());

    const auto h2 = relative_hull(blob, {c1, c2});
    for (std::size_t i = 0; i < h2.mask().size(); ++i)
      CHECK(h2.mask()[i] <= h1.mask()[i]); // more exclusions => smaller hull

    CHECK(count_holes(relative_hull(blob, {})) == 0);
  }
}

TEST_CASE("pgm and csv round-trips preserve sets") {
  const GridSpec g{{0.25, -0.5}, 0.75, 48};
  const auto set = annulus_raster(g, {0.25, -0.5}, 0.2, 0.5);
  const std::string path = "roundtrip_test.pgm";
  write_pgm(set, path);
  const auto back = read_pgm(path);
  CHECK(back.mask() == set.mask());
  CHECK(back.grid().resolution == g.resolution);
  CHECK(back.grid().center.real() == doctest::Approx(g.center.real()));
  CHECK(back.grid().half_width == doctest::Approx(g.half_width));
  std::remove(path.c_str());

  std::mt19937 rng(5);
  const auto pts = random_cloud(rng, 17);
  const std::string csv = "roundtrip_test.csv";
  write_points_csv(pts, csv);
  const auto pts_back = read_points_csv(csv);
  REQUIRE(pts_back.size() == pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i)
    CHECK(std::abs(pts_back[i] - pts[i]) == doctest::Approx(0.0));
  std::remove(csv.c_str());
}
