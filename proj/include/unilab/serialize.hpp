#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "errors.hpp"
#include "runge.hpp"
#include "symbol.hpp"

namespace unilab {

using json = nlohmann::json;

struct config_error : error {
  explicit config_error(const std::string& what) : error("config", what) {}
};

// Unknown keys are rejected so config typos fail loudly.
inline void require_keys(const json& j, const std::vector<std::string>& allowed,
                         const std::string& where) {
  if (!j.is_object()) throw config_error(where + ": expected an object");
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const auto& k : allowed)
      if (item.key() == k) {
        ok = true;
        break;
      }
    if (!ok) throw config_error(where + ": unknown key '" + item.key() + "'");
  }
}

inline json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline cplx complex_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw config_error(where + ": complex values are [re, im] pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline json coeffs_to_json(const std::vector<cplx>& coeffs) {
  json a = json::array();
  for (cplx c : coeffs) a.push_back(to_json(c));
  return a;
}

inline std::vector<cplx> coeffs_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw config_error(where + ": expected a coefficient array");
  std::vector<cplx> out;
  out.reserve(j.size());
  for (const auto& item : j) out.push_back(complex_from_json(item, where));
  return out;
}

inline json symbol_to_json(const HolomorphicMap& f) {
  json j;
  switch (f.kind()) {
    case MapKind::blaschke:
      j["kind"] = "blaschke";
      j["alpha"] = to_json(f.blaschke_alpha());
      break;
    case MapKind::polynomial:
      j["kind"] = "polynomial";
      j["coeffs"] = coeffs_to_json(f.numerator());
      break;
    case MapKind::rational:
      j["kind"] = "rational";
      j["num"] = coeffs_to_json(f.numerator());
      j["den"] = coeffs_to_json(f.denominator());
      break;
  }
  return j;
}

inline HolomorphicMap symbol_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw config_error("symbol: missing kind");
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "blaschke") {
    require_keys(j, {"kind", "alpha"}, "symbol");
    return HolomorphicMap::blaschke(complex_from_json(j.at("alpha"), "symbol.alpha"));
  }
  if (kind == "polynomial") {
    require_keys(j, {"kind", "coeffs"}, "symbol");
    return HolomorphicMap::polynomial(coeffs_from_json(j.at("coeffs"), "symbol.coeffs"));
  }
  if (kind == "rational") {
    require_keys(j, {"kind", "num", "den"}, "symbol");
    return HolomorphicMap::rational(coeffs_from_json(j.at("num"), "symbol.num"),
                                    coeffs_from_json(j.at("den"), "symbol.den"));
  }
  throw config_error("symbol: unknown kind '" + kind + "'");
}

inline json laurent_to_json(const LaurentRational& r) {
  json j;
  j["poly"] = coeffs_to_json(r.polynomial_part());
  json poles = json::array();
  std::size_t at = 0;
  for (const auto& p : r.poles()) {
    json pj;
    pj["location"] = to_json(p.location);
    pj["order"] = p.max_order;
    std::vector<cplx> coeffs(r.pole_coefficients().begin() + long(at),
                             r.pole_coefficients().begin() + long(at) + p.max_order);
    pj["coeffs"] = coeffs_to_json(coeffs); // descending orders
    poles.push_back(std::move(pj));
    at += std::size_t(p.max_order);
  }
  j["poles"] = std::move(poles);
  return j;
}

inline LaurentRational laurent_from_json(const json& j) {
  require_keys(j, {"poly", "poles"}, "laurent");
  poly poly_part = coeffs_from_json(j.at("poly"), "laurent.poly");
  std::vector<PoleSpec> poles;
  std::vector<cplx> flat;
  for (const auto& pj : j.at("poles")) {
    require_keys(pj, {"location", "order", "coeffs"}, "laurent.pole");
    PoleSpec p;
    p.location = complex_from_json(pj.at("location"), "laurent.pole.location");
    p.max_order = pj.at("order").get<int>();
    const auto coeffs = coeffs_from_json(pj.at("coeffs"), "laurent.pole.coeffs");
    if (int(coeffs.size()) != p.max_order)
      throw config_error("laurent.pole: coefficient count mismatch");
    poles.push_back(p);
    flat.insert(flat.end(), coeffs.begin(), coeffs.end());
  }
  return LaurentRational(std::move(poly_part), std::move(poles), std::move(flat));
}

inline json schedule_to_json(const UniversalSchedule& s) {
  json j;
  j["g"] = laurent_to_json(s.g);
  j["indices"] = s.indices;
  j["achieved"] = s.achieved;
  j["basis_sizes"] = s.basis_sizes;
  return j;
}

inline UniversalSchedule schedule_from_json(const json& j) {
  require_keys(j, {"g", "indices", "achieved", "basis_sizes"}, "schedule");
  UniversalSchedule s;
  s.g = laurent_from_json(j.at("g"));
  s.indices = j.at("indices").get<std::vector<int>>();
  s.achieved = j.at("achieved").get<std::vector<double>>();
  s.basis_sizes = j.at("basis_sizes").get<std::vector<int>>();
  return s;
}

} // namespace unilab
