#pragma once

#include "rcalc/numlab/estimate.hpp"

namespace rcalc::numlab {

enum class Oscillation { BMO, BLO, BUO };

inline const char* oscillation_name(Oscillation k) {
  switch (k) {
    case Oscillation::BMO: return "BMO";
    case Oscillation::BLO: return "BLO";
    case Oscillation::BUO: return "BUO";
  }
  return "?";
}

inline Oscillation parse_oscillation(const std::string& s) {
  if (s == "BMO") return Oscillation::BMO;
  if (s == "BLO") return Oscillation::BLO;
  if (s == "BUO") return Oscillation::BUO;
  throw Error("unknown oscillation kind '" + s + "' (BMO, BLO, BUO)");
}

namespace detail {

/// Integral of |f - m| over [tl, tr] for f(t) = ln c + a ln|t| with a != 0.
/// f is monotone in |t|, so the sign of f - m changes only at |t| = tau.
inline double abs_dev_power_piece(double tl, double tr, double a, double lnc, double m) {
  double tau = std::exp((m - lnc) / a);
  std::vector<double> pts{tl};
  for (double x : {-tau, 0.0, tau})
    if (x > tl && x < tr) pts.push_back(x);
  pts.push_back(tr);
  double total = 0;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    double l = pts[k], r = pts[k + 1];
    double v = (r - l) * (lnc - m) + a * abs_log_integral(l, r);
    total += std::abs(v);
  }
  return total;
}

}  // namespace detail

/// Mean of |ln w - m| over B where m is the mean of ln w.
inline double mean_oscillation(const Weight& w, const Ball& B, const MeanOptions& opt = {}) {
  double m = integrate(w, B.lo(), B.hi(), 0, opt).value / B.measure();
  if (opt.method == Method::Auto) {
    if (auto pieces = w.pieces(B.lo(), B.hi())) {
      double total = 0;
      for (const auto& pc : *pieces) {
        double lnc = std::log(pc.coef);
        if (pc.exponent == 0)
          total += (pc.hi - pc.lo) * std::abs(lnc - m);
        else
          total += detail::abs_dev_power_piece(pc.lo - pc.center, pc.hi - pc.center, pc.exponent, lnc, m);
      }
      return total / B.measure();
    }
  }
  auto cut = detail::cuts(w, B.lo(), B.hi());
  auto counts = detail::allocate(cut, opt.resolution);
  double total = 0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    double h = (cut[k + 1] - cut[k]) / static_cast<double>(counts[k]);
    for (std::size_t i = 0; i < counts[k]; ++i)
      total += std::abs(w.log_at(cut[k] + (static_cast<double>(i) + 0.5) * h) - m) * h;
  }
  return total / B.measure();
}

/// The oscillation functional of ln w on one ball; +inf when ln w is
/// unbounded on the side the functional measures.
inline double oscillation_on(const Weight& w, const Ball& B, Oscillation kind, const MeanOptions& opt = {}) {
  if (!(B.radius > 0)) throw Error("ball radius must be positive");
  if (opt.resolution < 2) throw Error("quadrature resolution must be at least 2");
  if (kind == Oscillation::BMO) return mean_oscillation(w, B, opt);
  double m = integrate(w, B.lo(), B.hi(), 0, opt).value / B.measure();
  if (kind == Oscillation::BLO) {
    double lo = ess_bound(w, B.lo(), B.hi(), -1, opt);
    return lo == 0 ? kInf : m - std::log(lo);
  }
  double hi = ess_bound(w, B.lo(), B.hi(), 1, opt);
  return std::isinf(hi) ? kInf : std::log(hi) - m;
}

/// Sup over the family of the oscillation functional applied to ln w.
inline EstimateReport log_oscillation(const Weight& w, const BallFamily& fam, Oscillation kind,
                                      const MeanOptions& opt = {}) {
  EstimateReport rep = detail::start(oscillation_name(kind), w, fam, 0, 0, opt);
  for (const auto& B : fam.balls) rep.values.push_back({B, oscillation_on(w, B, kind, opt)});
  detail::reduce(rep);
  return rep;
}

}  // namespace rcalc::numlab
