// universality-lab command line: classification, basin and chart rasters,
// the spiral-cut domain renderer, rational fitting, universal schedules and
// fiber checks. All outputs are deterministic and written atomically.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "unilab/conjugacy.hpp"
#include "unilab/errors.hpp"
#include "unilab/geometry.hpp"
#include "unilab/io.hpp"
#include "unilab/omega.hpp"
#include "unilab/runge.hpp"
#include "unilab/serialize.hpp"
#include "unilab/spiral.hpp"
#include "unilab/symbol.hpp"

using namespace unilab;

namespace {

cplx parse_complex(const std::string& text) {
  const auto comma = text.find(',');
  try {
    if (comma == std::string::npos) return {std::stod(text), 0.0};
    return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
  } catch (const std::exception&) {
    throw config_error("cannot parse complex value '" + text + "' (use re[,im])");
  }
}

std::vector<cplx> parse_complex_list(const std::string& text) {
  std::vector<cplx> out;
  std::size_t at = 0;
  while (at < text.size()) {
    const auto semi = text.find(';', at);
    const std::string item =
        semi == std::string::npos ? text.substr(at) : text.substr(at, semi - at);
    if (!item.empty()) out.push_back(parse_complex(item));
    if (semi == std::string::npos) break;
    at = semi + 1;
  }
  return out;
}

// blaschke:re[,im] | poly:re,im;re,im;... | rational:pairs|pairs
HolomorphicMap parse_symbol(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos)
    throw config_error("symbol spec needs a kind prefix: '" + spec + "'");
  const std::string kind = spec.substr(0, colon);
  const std::string rest = spec.substr(colon + 1);
  if (kind == "blaschke") return HolomorphicMap::blaschke(parse_complex(rest));
  if (kind == "poly" || kind == "polynomial")
    return HolomorphicMap::polynomial(parse_complex_list(rest));
  if (kind == "rational") {
    const auto bar = rest.find('|');
    if (bar == std::string::npos)
      throw config_error("rational symbol spec needs num|den");
    return HolomorphicMap::rational(parse_complex_list(rest.substr(0, bar)),
                                    parse_complex_list(rest.substr(bar + 1)));
  }
  throw config_error("unknown symbol kind '" + kind + "'");
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::fwrite(content.data(), 1, content.size(), stdout);
    return;
  }
  write_file_atomic(out_path, content);
}

json load_config(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("malformed config JSON: ") + e.what());
  }
}

// Fine dyadic window: coarse boxes saturate once the set spans the grid and
// then measure grid-filling rather than the set.
std::vector<int> dyadic_scales(int res) {
  std::vector<int> scales;
  for (int s = 2; s <= std::min(32, res / 4); s *= 2) scales.push_back(s);
  return scales;
}

struct SymbolOptions {
  std::string spec = "blaschke:0.6";
  std::string guess = "0.1,0";
};

// ---------------------------------------------------------------------------

int cmd_classify(const SymbolOptions& sym, const std::string& out) {
  const auto f = parse_symbol(sym.spec);
  const cplx z0 = find_fixed_point(f, parse_complex(sym.guess));
  const auto info = classify_fixed_point(f, z0);
  json rep;
  rep["command"] = "classify";
  rep["config"] = {{"symbol", symbol_to_json(f)},
                   {"guess", to_json(parse_complex(sym.guess))}};
  rep["z0"] = to_json(info.z0);
  rep["multiplier"] = to_json(info.multiplier);
  rep["class"] = to_string(info.klass);
  rep["p"] = info.p;
  rep["m"] = info.m;
  emit(out, rep.dump(2) + "\n");
  return 0;
}

int cmd_basin(const SymbolOptions& sym, const std::string& z0_text,
              const std::string& center, double half_width, int res, int nmax,
              double eps, const std::string& out, const std::string& report_path) {
  const auto f = parse_symbol(sym.spec);
  const cplx z0 = z0_text.empty() ? find_fixed_point(f, parse_complex(sym.guess))
                                  : parse_complex(z0_text);
  const auto info = classify_fixed_point(f, z0);
  if (info.klass != FixedPointClass::attracting &&
      info.klass != FixedPointClass::superattracting)
    throw precondition_error("basin requires an attracting or superattracting fixed point");
  const GridSpec grid{parse_complex(center), half_width, res};
  const auto basin = basin_raster(f, z0, grid, nmax, eps);
  write_pgm(basin, out);
  if (!report_path.empty()) {
    json rep;
    rep["command"] = "basin";
    rep["config"] = {{"symbol", symbol_to_json(f)}, {"z0", to_json(z0)},
                     {"center", to_json(grid.center)}, {"half_width", half_width},
                     {"res", res},   {"nmax", nmax},
                     {"eps", eps},   {"out", out}};
    rep["marked_pixels"] = basin.set_count();
    emit(report_path, rep.dump(2) + "\n");
  }
  return 0;
}

int cmd_chart_table(const SymbolOptions& sym, const std::string& chart_kind, int petal,
                    int depth, const std::string& center, double half_width, int res,
                    const std::string& out) {
  const auto f = parse_symbol(sym.spec);
  const cplx z0 = find_fixed_point(f, parse_complex(sym.guess));

  ConjugacyChart chart;
  if (chart_kind == "koenigs")
    chart = make_koenigs_chart(f, z0, depth > 0 ? depth : 60);
  else if (chart_kind == "boettcher")
    chart = make_boettcher_chart(f, z0, depth > 0 ? depth : 8);
  else if (chart_kind == "abel")
    chart = make_abel_chart(f, z0, petal, depth > 0 ? depth : 4000);
  else
    throw config_error("chart kind must be koenigs|boettcher|abel");

  const GridSpec grid{parse_complex(center), half_width, res};
  std::string csv = "re,im,phi_re,phi_im,residual\n";
  for (int iy = 0; iy < res; ++iy)
    for (int ix = 0; ix < res; ++ix) {
      const cplx z = grid.pixel_center(ix, iy);
      try {
        cplx phi, residual;
        if (chart.kind == ChartKind::koenigs) {
          phi = koenigs_phi(chart, z);
          residual = koenigs_phi(chart, f(z)) - chart.lambda * phi;
        } else if (chart.kind == ChartKind::boettcher) {
          phi = boettcher_phi(chart, z);
          residual = boettcher_phi(chart, f(z)) - std::pow(phi, chart.p);
        } else {
          phi = abel_phi(chart, z);
          residual = abel_phi(chart, f(z)) - phi - 1.0;
        }
        csv += format_double(z.real()) + "," + format_double(z.imag()) + "," +
               format_double(phi.real()) + "," + format_double(phi.imag()) + "," +
               format_double(std::abs(residual)) + "\n";
      } catch (const error&) {
        // outside the chart/petal/basin: no row
      }
    }
  emit(out, csv);
  return 0;
}

int cmd_render_g0(cplx alpha, double delta, int res, int nmax, double clearance,
                  cplx center, double half_width, const std::string& out,
                  const std::string& stats_path) {
  const auto f = HolomorphicMap::blaschke(alpha);
  const auto chart = make_koenigs_chart(f, {0, 0});
  if (delta <= 0.0) delta = chart.range_radius / 2.0;
  if (delta > chart.range_radius)
    throw precondition_error("render-g0: delta exceeds the chart range radius");
  const GridSpec grid{center, half_width, res};
  if (clearance <= 0.0) clearance = grid.pixel_diagonal();

  const SpiralCut cut(delta, chart.lambda);
  const auto render = render_g0(chart, cut, grid, nmax, clearance);
  write_pgm(render.g0, out);

  if (!stats_path.empty()) {
    const std::size_t basin_px = render.basin.set_count();
    std::vector<std::uint8_t> complement(std::size_t(res) * res, 0);
    std::size_t comp_px = 0;
    for (std::size_t i = 0; i < complement.size(); ++i)
      if (render.basin.mask()[i] && !render.g0.mask()[i]) {
        complement[i] = 1;
        ++comp_px;
      }
    double dim = 0.0;
    if (comp_px > 0 && dyadic_scales(res).size() >= 3)
      dim = box_dimension(CompactGridSet::from_mask(grid, std::move(complement)),
                          dyadic_scales(res));
    std::string csv =
        "basin_pixels,complement_pixels,complement_fraction,box_dimension\n";
    csv += std::to_string(basin_px) + "," + std::to_string(comp_px) + "," +
           format_double(basin_px ? double(comp_px) / double(basin_px) : 0.0) + "," +
           format_double(dim) + "\n";
    emit(stats_path, csv);
  }
  return 0;
}

int cmd_runge_fit(const std::string& config_path, const std::string& out) {
  const json cfg = load_config(config_path);
  require_keys(cfg, {"samples", "poles", "poly_degree", "ridge", "seed"}, "runge-fit");
  std::vector<cplx> pts, vals;
  for (const auto& s : cfg.at("samples")) {
    require_keys(s, {"z", "value"}, "runge-fit.sample");
    pts.push_back(complex_from_json(s.at("z"), "sample.z"));
    vals.push_back(complex_from_json(s.at("value"), "sample.value"));
  }
  std::vector<PoleSpec> poles;
  if (cfg.contains("poles"))
    for (const auto& p : cfg.at("poles")) {
      require_keys(p, {"location", "max_order"}, "runge-fit.pole");
      poles.push_back({complex_from_json(p.at("location"), "pole.location"),
                       p.at("max_order").get<int>()});
    }
  const int degree = cfg.value("poly_degree", 8);
  const double ridge = cfg.value("ridge", 0.0);
  const auto [r, max_err] = fit_rational(pts, vals, poles, degree, ridge);
  json rep;
  rep["command"] = "runge-fit";
  rep["config"] = cfg;
  rep["coefficients"] = laurent_to_json(r);
  rep["max_error"] = max_err;
  emit(out, rep.dump(2) + "\n");
  return 0;
}

SampledFunction make_target(const std::string& kind, const std::vector<cplx>& coeffs,
                            const SampledCompact& L) {
  if (kind == "const") {
    const cplx c = coeffs.empty() ? cplx{0, 0} : coeffs[0];
    return sample_on(L, [&](cplx) { return c; });
  }
  if (kind == "identity") return sample_on(L, [](cplx z) { return z; });
  if (kind == "poly") return sample_on(L, [&](cplx z) { return poly_eval(coeffs, z); });
  throw config_error("target kind must be const|identity|poly");
}

int cmd_universal_build(const SymbolOptions& sym, const std::string& config_path,
                        const std::string& out) {
  const json cfg = load_config(config_path);
  const auto f = parse_symbol(sym.spec);
  json rep;
  rep["command"] = "universal-build";
  rep["config"] = cfg;
  rep["symbol"] = symbol_to_json(f);

  std::vector<cplx> punctures;
  if (cfg.contains("punctures"))
    for (const auto& p : cfg.at("punctures"))
      punctures.push_back(complex_from_json(p, "punctures"));

  if (cfg.contains("E")) {
    require_keys(cfg, {"E", "value_targets", "punctures", "eps", "n_budget", "seed"},
                 "universal-build");
    std::vector<cplx> e;
    for (const auto& p : cfg.at("E")) e.push_back(complex_from_json(p, "E"));
    std::vector<std::vector<cplx>> value_targets;
    for (const auto& v : cfg.at("value_targets")) {
      std::vector<cplx> vec;
      for (const auto& x : v) vec.push_back(complex_from_json(x, "value_targets"));
      value_targets.push_back(std::move(vec));
    }
    const auto sched =
        finite_set_universal(f, e, punctures, value_targets, cfg.value("eps", 1e-6),
                             cfg.value("n_budget", 64));
    rep["mode"] = "finite";
    rep["schedule"] = schedule_to_json(sched);
    emit(out, rep.dump(2) + "\n");
    return 0;
  }

  require_keys(cfg, {"targets", "punctures", "guess", "n_max", "seed"}, "universal-build");
  const cplx guess = cfg.contains("guess") ? complex_from_json(cfg.at("guess"), "guess")
                                           : parse_complex(sym.guess);
  const cplx z0 = find_fixed_point(f, guess);
  const auto chart = make_koenigs_chart(f, z0);

  std::vector<ScheduleTarget> targets;
  for (const auto& t : cfg.at("targets")) {
    require_keys(t, {"target", "coeffs", "L", "eps"}, "universal-build.target");
    const auto& Lj = t.at("L");
    require_keys(Lj, {"center", "radius", "samples"}, "universal-build.target.L");
    const auto L = disk_compact(complex_from_json(Lj.at("center"), "L.center"),
                                Lj.at("radius").get<double>(), Lj.value("samples", 128));
    std::vector<cplx> coeffs;
    if (t.contains("coeffs"))
      for (const auto& c : t.at("coeffs")) coeffs.push_back(complex_from_json(c, "coeffs"));
    targets.push_back({L, make_target(t.at("target").get<std::string>(), coeffs, L),
                       t.value("eps", 1e-2)});
  }
  const auto sched =
      build_universal_schedule(f, chart, punctures, targets, cfg.value("n_max", 64));
  rep["mode"] = "targets";
  rep["guess"] = to_json(guess);
  rep["schedule"] = schedule_to_json(sched);
  emit(out, rep.dump(2) + "\n");
  return 0;
}

int cmd_omega_check(const std::string& schedule_path, const std::string& points_path,
                    double tol_in, double tol_out, double cauchy_tol,
                    const std::string& out) {
  const json rep_in = load_config(schedule_path);
  if (!rep_in.contains("schedule") || !rep_in.contains("symbol"))
    throw config_error("omega-check: schedule file lacks schedule/symbol");
  const auto f = symbol_from_json(rep_in.at("symbol"));
  const auto sched = schedule_from_json(rep_in.at("schedule"));
  const cplx guess = rep_in.contains("guess")
                         ? complex_from_json(rep_in.at("guess"), "guess")
                         : cplx{0.1, 0};
  const cplx z0 = find_fixed_point(f, guess);
  const auto chart = make_koenigs_chart(f, z0);
  const auto points = read_points_csv(points_path);

  bool limit_found = false;
  std::vector<cplx> h(points.size());
  if (sched.indices.size() >= 3) {
    const auto lim = omega_limit_estimate(sched.g, f, sched.indices, points, cauchy_tol);
    if (lim) {
      limit_found = true;
      h = *lim;
    }
  }
  if (!limit_found) {
    const int n_last = sched.indices.empty() ? 0 : sched.indices.back();
    for (std::size_t i = 0; i < points.size(); ++i)
      h[i] = sched.g(iterate_value(f, points[i], n_last));
  }

  const auto fr = phi_fiber_check(chart, points, h, tol_in, tol_out);
  json rep;
  rep["command"] = "omega-check";
  rep["config"] = {{"schedule", schedule_path}, {"points", points_path},
                   {"tol_in", tol_in},          {"tol_out", tol_out},
                   {"cauchy_tol", cauchy_tol}};
  rep["limit_found"] = limit_found;
  rep["pairs_checked"] = fr.pairs_checked;
  json viols = json::array();
  for (const auto& v : fr.violations)
    viols.push_back({{"z", to_json(v.z)},
                     {"w", to_json(v.w)},
                     {"fiber_gap", v.fiber_gap},
                     {"value_gap", v.value_gap}});
  rep["violations"] = std::move(viols);
  emit(out, rep.dump(2) + "\n");
  return 0;
}

int cmd_hull(const std::string& in, const std::string& exclude, const std::string& out) {
  const auto mask = read_pgm(in);
  const auto hull = relative_hull(mask, parse_complex_list(exclude));
  write_pgm(hull, out);
  return 0;
}

CompactGridSet load_compact(const std::string& path) {
  if (path.size() > 4 && path.substr(path.size() - 4) == ".pgm") return read_pgm(path);
  return CompactGridSet::from_points(read_points_csv(path));
}

int cmd_hausdorff(const std::string& a, const std::string& b, const std::string& out) {
  const double d = hausdorff_distance(load_compact(a), load_compact(b));
  json rep;
  rep["command"] = "hausdorff";
  rep["config"] = {{"a", a}, {"b", b}};
  rep["distance"] = d;
  emit(out, rep.dump(2) + "\n");
  return 0;
}

int cmd_boxdim(const std::string& in, const std::string& scales_text,
               const std::string& out) {
  const auto mask = read_pgm(in);
  std::vector<int> scales;
  std::size_t at = 0;
  while (at < scales_text.size()) {
    const auto comma = scales_text.find(',', at);
    const std::string item = comma == std::string::npos
                                 ? scales_text.substr(at)
                                 : scales_text.substr(at, comma - at);
    if (!item.empty()) scales.push_back(std::stoi(item));
    if (comma == std::string::npos) break;
    at = comma + 1;
  }
  const double dim = box_dimension(mask, scales);
  json rep;
  rep["command"] = "boxdim";
  rep["config"] = {{"in", in}, {"scales", scales}};
  rep["dimension"] = dim;
  emit(out, rep.dump(2) + "\n");
  return 0;
}

void report_error(const error& e, const json& extra = {}) {
  json err;
  err["error"] = e.kind();
  err["message"] = e.what();
  if (!extra.empty()) err["data"] = extra;
  std::cerr << err.dump() << "\n";
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "universality-lab: numerical dynamics of holomorphic maps near fixed points"};
  app.require_subcommand(1);

  SymbolOptions sym;
  std::string out, report_path, stats_path;

  auto* classify = app.add_subcommand("classify", "locate and classify a fixed point");
  classify->add_option("--symbol", sym.spec, "symbol spec, e.g. blaschke:0.6");
  classify->add_option("--guess", sym.guess, "fixed-point seed re,im");
  classify->add_option("--out", out, "output JSON path (default stdout)");

  std::string z0_text, center_text = "0,0";
  double half_width = 1.0, eps = 0.05;
  int res = 512, nmax = 200;
  auto* basin = app.add_subcommand("basin", "raster the basin of attraction");
  basin->add_option("--symbol", sym.spec);
  basin->add_option("--guess", sym.guess);
  basin->add_option("--z0", z0_text, "fixed point re,im (skips the search)");
  basin->add_option("--center", center_text);
  basin->add_option("--half-width", half_width);
  basin->add_option("--res", res);
  basin->add_option("--nmax", nmax);
  basin->add_option("--eps", eps, "attraction disk radius");
  basin->add_option("--out", out)->required();
  basin->add_option("--report", report_path, "optional JSON report");

  std::string chart_kind = "koenigs";
  int petal = 1, depth = 0, table_res = 64;
  std::string table_center = "0,0";
  double table_hw = 0.2;
  auto* table = app.add_subcommand("chart-table", "tabulate a linearizing coordinate");
  table->add_option("--symbol", sym.spec);
  table->add_option("--guess", sym.guess);
  table->add_option("--chart", chart_kind, "koenigs|boettcher|abel");
  table->add_option("--petal", petal);
  table->add_option("--depth", depth, "0 = per-kind default");
  table->add_option("--center", table_center);
  table->add_option("--half-width", table_hw);
  table->add_option("--res", table_res);
  table->add_option("--out", out)->required();

  std::string alpha_text = "0.6", g0_center = "0,0", g0_config;
  double delta = 0.0, clearance = 0.0, g0_hw = 1.0;
  int g0_res = 512, g0_nmax = 200;
  auto* g0 = app.add_subcommand("render-g0", "raster the spiral-cut invariant domain");
  auto* alpha_opt = g0->add_option("--alpha", alpha_text, "blaschke parameter re[,im]");
  auto* delta_opt = g0->add_option("--delta", delta, "cut radius (0 = half chart range)");
  auto* res_opt = g0->add_option("--res", g0_res);
  auto* nmax_opt = g0->add_option("--nmax", g0_nmax);
  auto* clear_opt = g0->add_option("--clearance", clearance, "0 = pixel diagonal");
  auto* center_opt = g0->add_option("--center", g0_center);
  auto* hw_opt = g0->add_option("--half-width", g0_hw);
  auto* out_opt = g0->add_option("--out", out, "output PGM");
  g0->add_option("--stats", stats_path, "companion stats CSV");
  g0->add_option("--config", g0_config, "JSON config; explicit flags override");

  std::string fit_config;
  auto* fit =
      app.add_subcommand("runge-fit", "least-squares rational fit with prescribed poles");
  fit->add_option("--config", fit_config)->required();
  fit->add_option("--out", out);

  std::string build_config;
  auto* build = app.add_subcommand("universal-build", "build a finite universal schedule");
  build->add_option("--symbol", sym.spec);
  build->add_option("--guess", sym.guess);
  build->add_option("--config", build_config)->required();
  build->add_option("--out", out);

  std::string schedule_path, points_path;
  double tol_in = 1e-8, tol_out = 1e-4, cauchy_tol = 1e-6;
  auto* omega =
      app.add_subcommand("omega-check", "fiber-compatibility report for a schedule");
  omega->add_option("--schedule", schedule_path)->required();
  omega->add_option("--points", points_path)->required();
  omega->add_option("--tol-in", tol_in);
  omega->add_option("--tol-out", tol_out);
  omega->add_option("--cauchy-tol", cauchy_tol);
  omega->add_option("--out", out);

  std::string hull_in, hull_exclude;
  auto* hull = app.add_subcommand("hull", "fill holes relative to excluded punctures");
  hull->add_option("--in", hull_in)->required();
  hull->add_option("--exclude", hull_exclude, "punctures re,im;re,im;...");
  hull->add_option("--out", out)->required();

  std::string hd_a, hd_b;
  auto* hd = app.add_subcommand("hausdorff", "hausdorff distance between two sets");
  hd->add_option("--a", hd_a)->required();
  hd->add_option("--b", hd_b)->required();
  hd->add_option("--out", out);

  std::string bd_in, bd_scales = "8,16,32,64";
  auto* bd = app.add_subcommand("boxdim", "box-counting dimension of a mask");
  bd->add_option("--in", bd_in)->required();
  bd->add_option("--scales", bd_scales);
  bd->add_option("--out", out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(classify)) return cmd_classify(sym, out);
    if (app.got_subcommand(basin))
      return cmd_basin(sym, z0_text, center_text, half_width, res, nmax, eps, out,
                       report_path);
    if (app.got_subcommand(table))
      return cmd_chart_table(sym, chart_kind, petal, depth, table_center, table_hw,
                             table_res, out);
    if (app.got_subcommand(g0)) {
      if (!g0_config.empty()) {
        const json cfg = load_config(g0_config);
        require_keys(cfg,
                     {"alpha", "delta", "res", "nmax", "clearance", "center",
                      "half_width", "out", "stats", "seed"},
                     "render-g0");
        auto complex_text = [](const json& j, const std::string& where) {
          const cplx z = complex_from_json(j, where);
          return format_double(z.real()) + "," + format_double(z.imag());
        };
        if (!alpha_opt->count() && cfg.contains("alpha"))
          alpha_text = complex_text(cfg.at("alpha"), "alpha");
        if (!delta_opt->count() && cfg.contains("delta"))
          delta = cfg.at("delta").get<double>();
        if (!res_opt->count() && cfg.contains("res")) g0_res = cfg.at("res").get<int>();
        if (!nmax_opt->count() && cfg.contains("nmax")) g0_nmax = cfg.at("nmax").get<int>();
        if (!clear_opt->count() && cfg.contains("clearance"))
          clearance = cfg.at("clearance").get<double>();
        if (!center_opt->count() && cfg.contains("center"))
          g0_center = complex_text(cfg.at("center"), "center");
        if (!hw_opt->count() && cfg.contains("half_width"))
          g0_hw = cfg.at("half_width").get<double>();
        if (!out_opt->count() && cfg.contains("out")) out = cfg.at("out").get<std::string>();
        if (stats_path.empty() && cfg.contains("stats"))
          stats_path = cfg.at("stats").get<std::string>();
      }
      if (out.empty()) throw config_error("render-g0: --out or config 'out' required");
      return cmd_render_g0(parse_complex(alpha_text), delta, g0_res, g0_nmax, clearance,
                           parse_complex(g0_center), g0_hw, out, stats_path);
    }
    if (app.got_subcommand(fit)) return cmd_runge_fit(fit_config, out);
    if (app.got_subcommand(build)) return cmd_universal_build(sym, build_config, out);
    if (app.got_subcommand(omega))
      return cmd_omega_check(schedule_path, points_path, tol_in, tol_out, cauchy_tol,
                             out);
    if (app.got_subcommand(hull)) return cmd_hull(hull_in, hull_exclude, out);
    if (app.got_subcommand(hd)) return cmd_hausdorff(hd_a, hd_b, out);
    if (app.got_subcommand(bd)) return cmd_boxdim(bd_in, bd_scales, out);
    return 2;
  } catch (const io_error& e) {
    report_error(e);
    return 3;
  } catch (const config_error& e) {
    report_error(e);
    return 2;
  } catch (const injectivity_violated& e) {
    report_error(e, {{"n", e.n}, {"i", e.i}, {"j", e.j}});
    return 1;
  } catch (const approximation_failed& e) {
    report_error(e, {{"best_error", e.best_error}});
    return 1;
  } catch (const error& e) {
    report_error(e);
    return 1;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << R"({"error":"config","message":")" << e.what() << "\"}\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << R"({"error":"internal","message":")" << e.what() << "\"}\n";
    return 1;
  }
}
