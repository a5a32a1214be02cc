#pragma once

#include "rcalc/facts/class_token.hpp"
#include "rcalc/numlab/oscillation.hpp"

#include <fstream>
#include <sstream>
#include <string>

namespace rcalc::numlab {

/// An estimate run read from a JSON config:
///   {"domain": [a, b], "weight": <weight json>,
///    "class": "A(3)" | "pair": [r, s],          (strong and weak kinds)
///    "kind": "strong" | "weak" | "BMO" | "BLO" | "BUO",
///    "family": {"kind": "centered", "focus", "n_radii", "min_ratio"}
///            | {"kind": "grid", "n_centers", "n_radii", "min_ratio", "include"?}
///            | {"kind": "explicit", "balls": [[center, radius], ...]},
///    "resolution": N, "method": "auto" | "quadrature" | "midpoint"}
/// A weak class token (RCweak) implies kind "weak".
struct EstimateConfig {
  Weight weight = Weight::constant(1);
  std::string kind = "strong";
  double r = 0, s = 0;
  BallFamily family;
  MeanOptions mean;
};

namespace detail {

inline double config_number(const nlohmann::json& j, const char* what) {
  try {
    return sentinel_from_json(j);
  } catch (const std::exception& e) {
    throw Error(std::string("config: bad ") + what + ": " + e.what());
  }
}

inline BallFamily family_from_json(const Domain& D, const nlohmann::json& f) {
  std::string kind = f.at("kind").get<std::string>();
  if (kind == "centered")
    return centered_family(D, f.value("focus", 0.0), f.at("n_radii").get<int>(), f.value("min_ratio", 1e-3));
  if (kind == "grid") {
    std::optional<double> inc;
    if (f.contains("include")) inc = f.at("include").get<double>();
    return grid_family(D, f.at("n_centers").get<int>(), f.at("n_radii").get<int>(), f.value("min_ratio", 1e-3), inc);
  }
  if (kind == "explicit") {
    std::vector<Ball> balls;
    for (const auto& b : f.at("balls")) balls.push_back({b.at(0).get<double>(), b.at(1).get<double>()});
    return explicit_family(D, std::move(balls));
  }
  throw Error("config: unknown family kind '" + kind + "' (centered, grid, explicit)");
}

}  // namespace detail

inline EstimateConfig parse_estimate_config(const nlohmann::json& j) {
  try {
    EstimateConfig c;
    const auto& d = j.at("domain");
    Domain D(d.at(0).get<double>(), d.at(1).get<double>());
    c.weight = Weight::from_json(j.at("weight"));
    c.kind = j.value("kind", std::string("strong"));
    if (c.kind == "strong" || c.kind == "weak") {
      if (j.contains("class")) {
        ClassSpec spec = parse_class_spec(j.at("class").get<std::string>());
        c.r = exponent_value(spec.pair.lo());
        c.s = exponent_value(spec.pair.hi());
        if (spec.strength == Strength::Weak) c.kind = "weak";
      } else if (j.contains("pair")) {
        c.r = detail::config_number(j.at("pair").at(0), "pair");
        c.s = detail::config_number(j.at("pair").at(1), "pair");
      } else {
        throw Error("config: needs \"class\" or \"pair\"");
      }
      if (!(c.r < c.s)) throw Error("config: pair needs r < s");
    } else {
      parse_oscillation(c.kind);
    }
    c.family = detail::family_from_json(D, j.at("family"));
    c.mean.resolution = j.value("resolution", std::size_t{10000});
    c.mean.method = parse_method(j.value("method", std::string("auto")));
    if (c.mean.resolution < 2) throw Error("config: resolution must be at least 2");
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("config: ") + e.what());
  }
}

inline EstimateConfig load_estimate_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read config '" + path + "'");
  try {
    return parse_estimate_config(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error("config '" + path + "': " + e.what());
  }
}

inline EstimateReport run_estimate(const EstimateConfig& c) {
  if (c.kind == "strong") return estimate_constant(c.weight, c.family, c.r, c.s, c.mean);
  if (c.kind == "weak") return weak_estimate(c.weight, c.family, c.r, c.s, c.mean);
  return log_oscillation(c.weight, c.family, parse_oscillation(c.kind), c.mean);
}

}  // namespace rcalc::numlab
