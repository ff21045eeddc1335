#include <doctest.h>

#include <numbers>
#include <random>

#include "unilab/runge.hpp"
#include "unilab/serialize.hpp"

using namespace unilab;

namespace {

HolomorphicMap blaschke06() { return HolomorphicMap::blaschke({0.6, 0}); }

std::vector<cplx> circle_pts(cplx center, double radius, int n) {
  std::vector<cplx> pts;
  pts.reserve(std::size_t(n));
  for (int i = 0; i < n; ++i)
    pts.push_back(center + std::polar(radius, 2 * std::numbers::pi * (i + 0.5) / n));
  return pts;
}

} // namespace

TEST_CASE("fit_rational reproduces in-basis targets exactly") {
  const auto pts = circle_pts({0, 0}, 1.0, 64);
  std::vector<cplx> identity(pts.begin(), pts.end());
  const auto [r1, e1] = fit_rational(pts, identity, {}, 1, 0.0);
  CHECK(e1 <= 1e-12);

  std::vector<cplx> pole_vals;
  for (cplx z : pts) pole_vals.push_back(1.0 / (z - cplx{2, 0}));
  const auto [r2, e2] = fit_rational(pts, pole_vals, {{cplx{2, 0}, 1}}, 0, 0.0);
  CHECK(e2 <= 1e-12);
}

TEST_CASE("fit_rational separates two plateaus at moderate degree") {
  std::vector<cplx> pts = circle_pts({0, 0}, 0.5, 64);
  std::vector<cplx> vals(64, cplx{0, 0});
  const auto far = circle_pts({3, 0}, 0.5, 64);
  pts.insert(pts.end(), far.begin(), far.end());
  vals.insert(vals.end(), 64, cplx{1, 0});

  const auto [r, err] = fit_rational(pts, vals, {}, 25, 0.0);
  CHECK(err <= 1e-3);

  // residual is non-increasing in the polynomial degree
  double prev = std::numeric_limits<double>::infinity();
  for (int d : {5, 10, 15, 20, 25}) {
    const auto [rd, ed] = fit_rational(pts, vals, {}, d, 0.0);
    CHECK(ed <= prev + 1e-12);
    prev = ed;
  }
}

TEST_CASE("fit_rational flags hopeless conditioning, ridge recovers") {
  // high-degree monomials sampled on a short off-center arc
  std::vector<cplx> pts;
  for (int i = 0; i < 60; ++i)
    pts.push_back(cplx{0.99, 0} + std::polar(0.005, 2 * std::numbers::pi * i / 60.0));
  std::vector<cplx> vals;
  for (cplx z : pts) vals.push_back(std::exp(z));
  CHECK_THROWS_AS(fit_rational(pts, vals, {}, 40, 0.0), ill_conditioned);
  const auto [r, err] = fit_rational(pts, vals, {}, 40, 1e-12);
  CHECK(err < 1e-6);
}

TEST_CASE("raster-born target compacts must be hole-free") {
  const GridSpec g{{0, 0}, 0.3, 64};
  const auto annulus = rasterize(g, [](cplx z) {
    const double d = std::abs(z);
    return d >= 0.1 && d <= 0.2;
  });
  CHECK_THROWS_AS(raster_compact(annulus), precondition_error);

  const auto disk = rasterize(g, [](cplx z) { return std::abs(z) <= 0.2; });
  CHECK(raster_compact(disk).fit_pts.size() == disk.set_count());
}

TEST_CASE("transitivity step reproduces an in-basis current function") {
  const auto f = blaschke06();
  const auto chart = make_koenigs_chart(f, {0, 0});
  const std::vector<cplx> punctures{{0, 0}};

  // g_current representable on the first escalation rung
  LaurentRational g_cur(poly{{0.3, 0}, {1.0, 0.2}}, {{cplx{0, 0}, 1}}, {cplx{0.05, 0}});

  const auto L = disk_compact({0, 0}, 0.15, 64);
  SampledFunction h;
  for (cplx z : L.fit_pts) h.fit_vals.push_back(g_cur(f(z)));
  for (cplx z : L.val_pts) h.val_vals.push_back(g_cur(f(z)));

  const auto res = transitivity_step(f, chart, punctures, g_cur, KeepSet{}, L, h, 1e-8, 32);
  CHECK(res.n == 1);
  CHECK(res.err_target <= 1e-10);
  CHECK(res.err_keep == 0.0); // empty keep set
  // the fitted function agrees with g_current where it matters
  for (cplx z : L.val_pts)
    CHECK(std::abs(res.r(iterate_value(f, z, res.n)) - g_cur(iterate_value(f, z, res.n))) <=
          1e-9);
}

TEST_CASE("transitivity step realizes a constant on a shifted circle") {
  const auto f = blaschke06();
  const auto chart = make_koenigs_chart(f, {0, 0});
  const auto L = disk_compact({0, 0}, 0.15, 96);
  const auto h = sample_on(L, [](cplx) { return cplx{1, 0}; });
  const auto res =
      transitivity_step(f, chart, {{0, 0}}, LaurentRational{}, KeepSet{}, L, h, 1e-3, 32);
  CHECK(res.err_target < 1e-3);
  CHECK(res.n >= 1);
}

TEST_CASE("transitivity step requires the compact inside the chart disk") {
  const auto f = blaschke06();
  const auto chart = make_koenigs_chart(f, {0, 0});
  const auto L = disk_compact({0, 0}, chart.local_radius * 1.5, 32);
  const auto h = sample_on(L, [](cplx) { return cplx{1, 0}; });
  CHECK_THROWS_AS(
      transitivity_step(f, chart, {{0, 0}}, LaurentRational{}, KeepSet{}, L, h, 1e-3, 32),
      precondition_error);
}

TEST_CASE("universal schedule realizes identity and square on one compact") {
  const auto f = blaschke06();
  const auto chart = make_koenigs_chart(f, {0, 0});
  const auto L = disk_compact({0, 0}, 0.15, 96);

  std::vector<ScheduleTarget> targets;
  targets.push_back({L, sample_on(L, [](cplx z) { return z; }), 1e-2});
  targets.push_back({L, sample_on(L, [](cplx z) { return z * z; }), 1e-2});

  const auto sched = build_universal_schedule(f, chart, {{0, 0}}, targets);
  REQUIRE(sched.indices.size() == 2);
  CHECK(sched.indices[0] < sched.indices[1]);
  CHECK(sched.achieved[0] <= 1e-2);
  CHECK(sched.achieved[1] <= 1e-2);

  // the one function g exhibits both limit behaviours on L
  double err1 = 0.0, err2 = 0.0;
  for (cplx z : L.val_pts) {
    err1 = std::max(err1, std::abs(sched.g(iterate_value(f, z, sched.indices[0])) - z));
    err2 = std::max(err2, std::abs(sched.g(iterate_value(f, z, sched.indices[1])) - z * z));
  }
  CHECK(err1 <= 1e-2);
  CHECK(err2 <= 1e-2);

  // images of the target compact stay pairwise separated (injective iterates)
  for (int idx : sched.indices) {
    std::vector<cplx> img;
    for (cplx z : L.fit_pts) img.push_back(iterate_value(f, z, idx));
    for (std::size_t i = 0; i < img.size(); ++i)
      for (std::size_t j = i + 1; j < img.size(); ++j)
        CHECK(std::abs(img[i] - img[j]) > 1e-10);
  }
}

TEST_CASE("universal schedule on an empty target list is the zero function") {
  const auto f = blaschke06();
  const auto chart = make_koenigs_chart(f, {0, 0});
  const auto sched = build_universal_schedule(f, chart, {{0, 0}}, {});
  CHECK(sched.indices.empty());
  CHECK(std::abs(sched.g({0.3, 0.1})) == 0.0);
}

TEST_CASE("schedules round-trip through json with identical behaviour") {
  const auto f = blaschke06();
  const auto chart = make_koenigs_chart(f, {0, 0});
  const auto L = disk_compact({0, 0}, 0.15, 64);
  std::vector<ScheduleTarget> targets;
  targets.push_back({L, sample_on(L, [](cplx) { return cplx{1, 0}; }), 1e-3});
  const auto sched = build_universal_schedule(f, chart, {{0, 0}}, targets);

  const json j = schedule_to_json(sched);
  const auto back = schedule_from_json(json::parse(j.dump()));
  CHECK(back.indices == sched.indices);
  CHECK(back.achieved == sched.achieved);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-0.2, 0.2);
  for (int i = 0; i < 50; ++i) {
    const cplx z{u(rng), u(rng)};
    if (std::abs(z) < 1e-3) continue;
    const cplx a = sched.g(z), b = back.g(z);
    CHECK(a.real() == b.real());
    CHECK(a.imag() == b.imag());
  }
}

TEST_CASE("finite-set universality realizes prescribed vectors") {
  const auto sq = HolomorphicMap::polynomial({{0, 0}, {0, 0}, {1, 0}});
  const std::vector<cplx> e{{0.3, 0}, {0.5, 0}};
  const std::vector<std::vector<cplx>> targets{{{0, 0}, {1, 0}}, {{1, 0}, {0, 0}}};
  const auto sched = finite_set_universal(sq, e, {{0, 0}}, targets, 1e-6);
  REQUIRE(sched.indices.size() == 2);
  CHECK(sched.indices[0] < sched.indices[1]);
  for (double a : sched.achieved) CHECK(a <= 1e-6);
  for (std::size_t t = 0; t < targets.size(); ++t)
    for (std::size_t i = 0; i < e.size(); ++i) {
      const cplx img = iterate_value(sq, e[i], sched.indices[t]);
      CHECK(std::abs(sched.g(img) - targets[t][i]) <= 1e-6);
    }
}

TEST_CASE("finite-set universality rejects collapsing point sets with a witness") {
  const auto sq = HolomorphicMap::polynomial({{0, 0}, {0, 0}, {1, 0}});
  const std::vector<cplx> e{{0.3, 0}, {-0.3, 0}};
  try {
    finite_set_universal(sq, e, {{0, 0}}, {{{0, 0}, {1, 0}}}, 1e-6);
    FAIL("expected injectivity_violated");
  } catch (const injectivity_violated& err) {
    CHECK(err.n == 1);
    CHECK(err.i == 0);
    CHECK(err.j == 1);
  }
}

TEST_CASE("finite-set universality with one point and one constant target") {
  const auto sq = HolomorphicMap::polynomial({{0, 0}, {0, 0}, {1, 0}});
  const cplx c{0.7, -0.2};
  const auto sched = finite_set_universal(sq, {{0.4, 0}}, {{0, 0}}, {{c}}, 1e-6);
  REQUIRE(sched.indices.size() == 1);
  const cplx img = iterate_value(sq, {0.4, 0}, sched.indices[0]);
  CHECK(std::abs(sched.g(img) - c) <= 1e-6);
}

TEST_CASE("symbol configs round-trip through json") {
  const auto b = HolomorphicMap::blaschke({0.6, 0.1});
  const auto b2 = symbol_from_json(json::parse(symbol_to_json(b).dump()));
  CHECK(b2.kind() == MapKind::blaschke);
  CHECK(b2.blaschke_alpha() == b.blaschke_alpha());

  const auto p = HolomorphicMap::polynomial({{0, 0}, {0.5, 0}, {1, 0}});
  const auto p2 = symbol_from_json(json::parse(symbol_to_json(p).dump()));
  CHECK(p2.numerator() == p.numerator());

  const auto r = HolomorphicMap::rational({{0, 0}, {1, 0}}, {{1, 0}, {1, 0}});
  const auto r2 = symbol_from_json(json::parse(symbol_to_json(r).dump()));
  CHECK(r2.numerator() == r.numerator());
  CHECK(r2.denominator() == r.denominator());

  CHECK_THROWS_AS(symbol_from_json(json::parse(R"({"kind":"exp"})")), config_error);
  CHECK_THROWS_AS(symbol_from_json(json::parse(R"({"kind":"blaschke","alpha":[0.5,0],"x":1})")),
                  config_error);
}

TEST_CASE("laurent rationals evaluate their stored principal parts") {
  // value = 2 + z + 3/(z-1) + 5/(z-1)^2, coefficients descending per pole
  LaurentRational r(poly{{2, 0}, {1, 0}}, {{cplx{1, 0}, 2}}, {cplx{5, 0}, cplx{3, 0}});
  const cplx z{3, 0};
  const cplx want = cplx{2, 0} + z + 3.0 / (z - cplx{1, 0}) + 5.0 / ((z - cplx{1, 0}) * (z - cplx{1, 0}));
  CHECK(std::abs(r(z) - want) < 1e-14);

  const json j = laurent_to_json(r);
  const auto back = laurent_from_json(j);
  CHECK(std::abs(back(z) - want) < 1e-14);
}
