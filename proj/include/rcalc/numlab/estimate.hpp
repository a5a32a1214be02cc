#pragma once

#include "rcalc/numlab/pmean.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace rcalc::numlab {

inline constexpr const char* kEstimateSchema = "rcalc.estimate/1";

/// Infinite values and the 0 sentinel travel as strings.
inline nlohmann::json sentinel_json(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0) return "zero";
  return v;
}

inline double sentinel_from_json(const nlohmann::json& j) {
  if (j.is_string()) {
    auto s = j.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
    if (s == "zero") return 0;
    throw Error("bad numeric value '" + s + "'");
  }
  return j.get<double>();
}

struct BallValue {
  Ball ball;
  double value;
};

/// Sup of a per-ball functional over a finite family: always a lower bound
/// for the supremum over all admissible balls.
struct EstimateReport {
  std::string kind;  // strong | weak | BMO | BLO | BUO
  double r = 0, s = 0;
  std::vector<BallValue> values;
  double sup = 0;
  std::size_t argmax = 0;
  bool divergent = false;
  Method method = Method::Auto;
  std::size_t resolution = 0;
  nlohmann::json family;
  nlohmann::json weight;
  Domain domain;

  const Ball& argmax_ball() const { return values.at(argmax).ball; }

  /// Hoelder: finite strong ratios are at least 1.
  bool holder_ok(double tol = 1e-9) const {
    if (kind != "strong") return true;
    for (const auto& v : values)
      if (std::isfinite(v.value) && v.value < 1 - tol) return false;
    return true;
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["schema"] = kEstimateSchema;
    j["kind"] = kind;
    j["weight"] = weight;
    j["domain"] = {domain.a, domain.b};
    if (kind == "strong" || kind == "weak") j["pair"] = {sentinel_json(r), sentinel_json(s)};
    j["family"] = family;
    j["method"] = method_name(method);
    j["resolution"] = resolution;
    j["sup"] = sentinel_json(sup);
    j["lower_bound"] = true;
    j["divergent"] = divergent;
    if (!values.empty()) {
      const Ball& b = argmax_ball();
      j["argmax"] = {{"index", argmax}, {"center", b.center}, {"radius", b.radius}};
    }
    nlohmann::json per = nlohmann::json::array();
    for (const auto& v : values) per.push_back({v.ball.center, v.ball.radius, sentinel_json(v.value)});
    j["values"] = per;
    return j;
  }
};

namespace detail {

inline void check_pair(double r, double s) {
  if (!(r < s)) throw Error("reversal needs r < s");
}

/// Sup with the first (lowest index) maximiser.
inline void reduce(EstimateReport& rep) {
  rep.sup = 0;
  rep.argmax = 0;
  for (std::size_t i = 0; i < rep.values.size(); ++i) {
    double v = rep.values[i].value;
    if (std::isinf(v)) rep.divergent = true;
    if (i == 0 || v > rep.sup) {
      rep.sup = v;
      rep.argmax = i;
    }
  }
}

inline EstimateReport start(const char* kind, const Weight& w, const BallFamily& fam, double r, double s,
                            const MeanOptions& opt) {
  if (fam.balls.empty()) throw Error("ball family is empty");
  if (opt.resolution < 2) throw Error("quadrature resolution must be at least 2");
  for (const auto& B : fam.balls) require_admissible(B, fam.domain);
  EstimateReport rep;
  rep.kind = kind;
  rep.r = r;
  rep.s = s;
  rep.method = opt.method;
  rep.resolution = opt.resolution;
  rep.family = fam.description;
  rep.weight = w.to_json();
  rep.domain = fam.domain;
  return rep;
}

inline double quotient(double num, double den) {
  if (std::isinf(num) || den == 0) return kInf;
  return num / den;
}

}  // namespace detail

/// w(s,B) / w(r,B); +inf when the numerator is infinite or the denominator
/// is the 0 sentinel.
inline double reversal_ratio(const Weight& w, const Ball& B, double r, double s, const MeanOptions& opt = {}) {
  detail::check_pair(r, s);
  return detail::quotient(p_mean(w, B, s, opt), p_mean(w, B, r, opt));
}

inline EstimateReport estimate_constant(const Weight& w, const BallFamily& fam, double r, double s,
                                        const MeanOptions& opt = {}) {
  detail::check_pair(r, s);
  EstimateReport rep = detail::start("strong", w, fam, r, s, opt);
  for (const auto& B : fam.balls) rep.values.push_back({B, reversal_ratio(w, B, r, s, opt)});
  detail::reduce(rep);
  return rep;
}

/// ((1/mu(B)) int_{2B} w^r)^(1/r): the weak-class denominator. The
/// normalizer is mu(B) although the integral runs over 2B.
inline double doubled_mean(const Weight& w, const Ball& B, double r, const MeanOptions& opt = {}) {
  Ball D = B.doubled();
  if (std::isinf(r)) return ess_bound(w, D.lo(), D.hi(), r > 0 ? 1 : -1, opt);
  if (r == 0) throw Error("weak estimate is undefined for r = 0 (the mu(B) normalizer has no geometric-mean limit)");
  Integral I = integrate(w, D.lo(), D.hi(), r, opt);
  if (I.divergent || std::isinf(I.value)) return r > 0 ? kInf : 0.0;
  return std::exp(std::log(I.value / B.measure()) / r);
}

inline EstimateReport weak_estimate(const Weight& w, const BallFamily& fam, double r, double s,
                                    const MeanOptions& opt = {}) {
  detail::check_pair(r, s);
  EstimateReport rep = detail::start("weak", w, fam, r, s, opt);
  for (const auto& B : fam.balls)
    rep.values.push_back({B, detail::quotient(p_mean(w, B, s, opt), doubled_mean(w, B, r, opt))});
  detail::reduce(rep);
  return rep;
}

}  // namespace rcalc::numlab
