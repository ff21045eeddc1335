#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "unilab/symbol.hpp"

using namespace unilab;

namespace {

HolomorphicMap square_map() { return HolomorphicMap::polynomial({{0, 0}, {0, 0}, {1, 0}}); }
HolomorphicMap half_map() { return HolomorphicMap::polynomial({{0, 0}, {0.5, 0}}); }
HolomorphicMap affine_shift() { return HolomorphicMap::polynomial({{1, 0}, {1, 0}}); }

} // namespace

TEST_CASE("iterate closed forms") {
  CHECK(std::abs(iterate_value(square_map(), {2, 0}, 3) - cplx{256, 0}) < 1e-12);
  CHECK(std::abs(iterate_value(half_map(), {1, 0}, 10) - cplx{1.0 / 1024, 0}) < 1e-15);
  CHECK(iterate(square_map(), {5, 0}, 0).value == cplx{5, 0}); // f^0 = id
}

TEST_CASE("blaschke orbit contracts to the origin") {
  const auto b = HolomorphicMap::blaschke({0.6, 0});
  const auto r = iterate(b, {0.3, 0}, 40);
  REQUIRE(r.ok());
  CHECK(std::abs(r.value) < 1e-6);
}

TEST_CASE("iterate reports poles and escapes") {
  const auto inv = HolomorphicMap::rational({{1, 0}}, {{0, 0}, {1, 0}}); // 1/z
  CHECK_THROWS_AS(iterate(inv, {0, 0}, 1), pole_hit);

  const auto r = iterate(square_map(), {10, 0}, 30);
  CHECK(r.status == IterateResult::Status::escaped);
  CHECK(r.steps < 30);
}

TEST_CASE("iterate semigroup property on random basin points") {
  const auto b = HolomorphicMap::blaschke({0.6, 0});
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int trial = 0; trial < 50; ++trial) {
    const cplx z{u(rng), u(rng)};
    const int a = 1 + int(rng() % 10), c = 1 + int(rng() % 10);
    const cplx lhs = iterate_value(b, z, a + c);
    const cplx rhs = iterate_value(b, iterate_value(b, z, a), c);
    CHECK(std::abs(lhs - rhs) <= 1e-9 * std::max(1.0, std::abs(lhs)));
  }
}

TEST_CASE("find_fixed_point") {
  const auto b = HolomorphicMap::blaschke({0.6, 0});
  CHECK(std::abs(find_fixed_point(b, {0.1, 0})) < 1e-9);

  const auto f = HolomorphicMap::polynomial({{0, 0}, {0.5, 0}, {1, 0}}); // z/2 + z^2
  CHECK(std::abs(find_fixed_point(f, {0.1, 0})) < 1e-9);
  CHECK(std::abs(find_fixed_point(f, {0.6, 0}) - cplx{0.5, 0}) < 1e-9);

  const auto parabolic = HolomorphicMap::polynomial({{0, 0}, {1, 0}, {1, 0}}); // z + z^2
  CHECK(std::abs(find_fixed_point(parabolic, {0, 0.05})) < 1e-5);
}

TEST_CASE("classify_fixed_point on the worked examples") {
  const auto sq = classify_fixed_point(square_map(), {0, 0});
  CHECK(sq.klass == FixedPointClass::superattracting);
  CHECK(sq.p == 2);

  const auto b = classify_fixed_point(HolomorphicMap::blaschke({0.6, 0}), {0, 0});
  CHECK(b.klass == FixedPointClass::attracting);
  CHECK(std::abs(b.multiplier - cplx{-0.6, 0}) < 1e-12);

  const auto cubic =
      classify_fixed_point(HolomorphicMap::polynomial({{0, 0}, {1, 0}, {0, 0}, {1, 0}}),
                           {0, 0}); // z + z^3
  CHECK(cubic.klass == FixedPointClass::neutral);
  CHECK(cubic.m == 2);

  const auto rot = classify_fixed_point(
      HolomorphicMap::polynomial({{0, 0}, std::polar(1.0, 1.0), {0, 0}, {1, 0}}), {0, 0});
  CHECK(rot.klass == FixedPointClass::irrationally_indifferent);

  const auto rep = classify_fixed_point(
      HolomorphicMap::polynomial({{0, 0}, {2, 0}, {1, 0}}), {0, 0});
  CHECK(rep.klass == FixedPointClass::repelling);

  CHECK_THROWS_AS(classify_fixed_point(square_map(), {0.3, 0}), not_a_fixed_point);
}

TEST_CASE("multiplier agrees with a central finite difference") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(-0.8, 0.8);
  for (int trial = 0; trial < 25; ++trial) {
    const auto f = HolomorphicMap::polynomial(
        {{0, 0}, {u(rng), u(rng)}, {u(rng), u(rng)}, {u(rng), u(rng)}});
    const auto info = classify_fixed_point(f, {0, 0});
    const cplx fd = oracles::finite_difference_multiplier(f, {0, 0});
    CHECK(std::abs(info.multiplier - fd) < 1e-6);
  }
}

TEST_CASE("run_away_index: translated disk separates at N=3") {
  const GridSpec g{{0, 0}, 1.1, 64};
  const auto disk = rasterize(g, [](cplx z) { return std::abs(z) <= 1.0; });
  const auto n = run_away_index(affine_shift(), disk, 10);
  REQUIRE(n.has_value());
  CHECK(*n == 3);
}

TEST_CASE("run_away_index: rotation never leaves the annulus") {
  const double theta = 2.399963229728653; // golden angle, no small periods
  const auto rot = HolomorphicMap::polynomial({{0, 0}, std::polar(1.0, theta)});
  const GridSpec g{{0, 0}, 0.6, 96};
  const auto annulus = rasterize(g, [](cplx z) {
    const double d = std::abs(z);
    return d >= 0.4 && d <= 0.5;
  });
  CHECK(!run_away_index(rot, annulus, 50).has_value());
}

TEST_CASE("run_away_index: blaschke annulus runs away and re-checks denser") {
  const auto b = HolomorphicMap::blaschke({0.6, 0});
  const GridSpec g{{0, 0}, 0.6, 96};
  const auto annulus = rasterize(g, [](cplx z) {
    const double d = std::abs(z);
    return d >= 0.4 && d <= 0.5;
  });
  const auto n = run_away_index(b, annulus, 60);
  REQUIRE(n.has_value());

  // 4x denser sampling of the true boundary circles must stay clear too
  const double margin = g.pixel_diagonal();
  const auto base = annulus.sample_points();
  for (double radius : {0.4, 0.5}) {
    const int count = 4 * int(2 * std::numbers::pi * radius / g.pixel_size());
    for (int i = 0; i < count; ++i) {
      cplx z = std::polar(radius, 2 * std::numbers::pi * i / count);
      z = iterate_value(b, z, *n);
      double best = std::numeric_limits<double>::infinity();
      for (cplx p : base) best = std::min(best, std::abs(z - p));
      CHECK(best > margin);
    }
  }
}

TEST_CASE("basin_raster coverage") {
  const auto b = HolomorphicMap::blaschke({0.6, 0});
  const GridSpec g{{0, 0}, 1.0, 128};
  const auto basin = basin_raster(b, {0, 0}, g, 200, 0.05);
  std::size_t inside = 0, marked = 0;
  for (int iy = 0; iy < g.resolution; ++iy)
    for (int ix = 0; ix < g.resolution; ++ix) {
      if (std::abs(g.pixel_center(ix, iy)) < 0.98) {
        ++inside;
        if (basin.pixel(ix, iy)) ++marked;
      }
    }
  CHECK(double(marked) >= 0.99 * double(inside));

  const GridSpec small{{0, 0}, 0.5, 64};
  const auto all = basin_raster(square_map(), {0, 0}, small, 100, 0.05);
  CHECK(all.set_count() == std::size_t(64) * 64);

  const auto f = HolomorphicMap::polynomial({{0, 0}, {0.5, 0}, {1, 0}});
  const GridSpec tiny{{0, 0}, 0.3, 64};
  const auto contracting = basin_raster(f, {0, 0}, tiny, 200, 0.02);
  for (int iy = 0; iy < tiny.resolution; ++iy)
    for (int ix = 0; ix < tiny.resolution; ++ix)
      if (std::abs(tiny.pixel_center(ix, iy)) < 0.2) CHECK(contracting.pixel(ix, iy));
}

TEST_CASE("basin_raster is forward-invariant at raster level") {
  const auto b = HolomorphicMap::blaschke({0.6, 0});
  const GridSpec g{{0, 0}, 1.0, 96};
  const double eps = 0.05;
  const auto basin = basin_raster(b, {0, 0}, g, 200, eps);
  std::size_t marked = 0, good = 0;
  for (int iy = 0; iy < g.resolution; ++iy)
    for (int ix = 0; ix < g.resolution; ++ix) {
      if (!basin.pixel(ix, iy)) continue;
      ++marked;
      const cplx w = b(g.pixel_center(ix, iy));
      if (std::abs(w) < eps) {
        ++good;
        continue;
      }
      const auto loc = g.locate(w);
      if (loc && basin.pixel(loc->first, loc->second)) ++good;
    }
  CHECK(double(good) >= 0.99 * double(marked));
}

TEST_CASE("finite_injectivity_check verdicts") {
  const auto v = finite_injectivity_check(square_map(), {{0.3, 0}, {-0.3, 0}}, 10);
  CHECK(!v.injective);
  CHECK(v.n == 1);
  CHECK(v.i == 0);
  CHECK(v.j == 1);

  const auto ok = finite_injectivity_check(square_map(), {{0.3, 0}, {0.5, 0}}, 30);
  CHECK(ok.injective);
  CHECK(ok.n == 30);

  CHECK_THROWS_AS(finite_injectivity_check(square_map(), {{0.3, 0}, {0.3, 0}}, 5),
                  precondition_error);
}

TEST_CASE("finite_injectivity_check matches the pairwise oracle") {
  const auto b = HolomorphicMap::blaschke({0.6, 0});
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<cplx> e;
    while (e.size() < 4) {
      const cplx z{u(rng), u(rng)};
      if (std::abs(z) > 1e-3 && std::abs(z) < 0.3) e.push_back(z);
    }
    const auto got = finite_injectivity_check(b, e, 30);
    const auto want = oracles::pairwise_orbit_scan(b, e, 30);
    CHECK(got.injective == want.injective);
    if (!got.injective) {
      CHECK(got.n == want.n);
      CHECK(got.i == want.i);
      CHECK(got.j == want.j);
    }
  }
}
