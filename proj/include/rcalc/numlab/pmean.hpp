#pragma once

#include "rcalc/core/exponent.hpp"
#include "rcalc/numlab/ball.hpp"
#include "rcalc/numlab/weight.hpp"

#include <boost/math/special_functions/zeta.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

namespace rcalc::numlab {

/// How integrals are evaluated.
///   Auto       exact antiderivatives when the weight decomposes into power
///              pieces on the ball, otherwise Quadrature.
///   Quadrature composite midpoint rule split at special points, with the
///              leading endpoint-singularity term removed and analytic
///              divergence detection from the local exponents.
///   Midpoint   plain composite midpoint rule; divergence only by the
///              refinement heuristic.
enum class Method { Auto, Quadrature, Midpoint };

inline const char* method_name(Method m) {
  switch (m) {
    case Method::Auto: return "auto";
    case Method::Quadrature: return "quadrature";
    case Method::Midpoint: return "midpoint";
  }
  return "?";
}

inline Method parse_method(const std::string& s) {
  if (s == "auto") return Method::Auto;
  if (s == "quadrature") return Method::Quadrature;
  if (s == "midpoint") return Method::Midpoint;
  throw Error("unknown method '" + s + "' (auto, quadrature, midpoint)");
}

struct MeanOptions {
  Method method = Method::Auto;
  std::size_t resolution = 10000;
  /// Midpoint only: also evaluate at 2N and 4N and declare divergence when
  /// the integral grows more than tenfold at both doublings.
  bool heuristic_divergence = true;
};

struct Integral {
  double value = 0;
  bool divergent = false;
};

namespace detail {

inline double sign(double t) { return t < 0 ? -1.0 : 1.0; }

/// Integral of |t|^b over [tl, tr]; +inf when it diverges at t = 0.
inline double abs_power_integral(double tl, double tr, double b) {
  if (tl >= tr) return 0;
  if (b <= -1 && tl <= 0 && tr >= 0) return kInf;
  if (b == -1) {
    auto F = [](double t) { return sign(t) * std::log(std::abs(t)); };
    return F(tr) - F(tl);
  }
  auto G = [b](double t) { return sign(t) * std::pow(std::abs(t), b + 1) / (b + 1); };
  return G(tr) - G(tl);
}

/// Integral of ln|t| over [tl, tr].
inline double abs_log_integral(double tl, double tr) {
  auto H = [](double t) { return t == 0 ? 0.0 : t * std::log(std::abs(t)) - t; };
  return H(tr) - H(tl);
}

/// Midpoint-rule excess over the integral of |t|^beta near t = 0, per unit
/// cofactor: Hurwitz zeta(-beta, 1/2) h^(1+beta).
inline double singular_excess(double beta, double h) {
  if (beta == 0) return 0;
  double z = (std::pow(2.0, -beta) - 1) * boost::math::zeta(-beta);
  return z * std::pow(h, 1 + beta);
}

/// Split points of [lo, hi] for quadrature.
inline std::vector<double> cuts(const Weight& w, double lo, double hi) {
  std::vector<double> out{lo};
  for (double x : w.special_points())
    if (x > lo && x < hi) out.push_back(x);
  out.push_back(hi);
  return out;
}

inline std::vector<std::size_t> allocate(const std::vector<double>& cut, std::size_t n) {
  std::vector<std::size_t> out;
  double total = cut.back() - cut.front();
  for (std::size_t k = 0; k + 1 < cut.size(); ++k) {
    double share = static_cast<double>(n) * (cut[k + 1] - cut[k]) / total;
    out.push_back(std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(share))));
  }
  return out;
}

// Power p (p != 0) or logarithm (p == 0) of w, integrated by the midpoint rule.
inline Integral quadrature(const Weight& w, double lo, double hi, double p, std::size_t n, bool corrected) {
  auto cut = cuts(w, lo, hi);
  auto counts = allocate(cut, n);
  Integral out;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    double l = cut[k], r = cut[k + 1];
    double h = (r - l) / static_cast<double>(counts[k]);
    double sum = 0;
    for (std::size_t i = 0; i < counts[k]; ++i) {
      double x = l + (static_cast<double>(i) + 0.5) * h;
      sum += p == 0 ? w.log_at(x) : std::exp(p * w.log_at(x));
    }
    double piece = sum * h;
    if (corrected) {
      for (auto [e, side] : {std::pair{l, +1}, std::pair{r, -1}}) {
        Local loc = w.local(e, side);
        if (loc.exponent == 0) continue;
        if (p == 0) {
          piece -= loc.exponent * h * std::log(2.0) / 2;
          continue;
        }
        double beta = p * loc.exponent;
        if (beta <= -1) return {kInf, true};
        // Smooth endpoint behaviour: the regular error terms already match.
        if (beta > 0 && beta == std::floor(beta)) continue;
        piece -= singular_excess(beta, h) * std::pow(loc.cofactor, p);
      }
    }
    out.value += piece;
  }
  return out;
}

}  // namespace detail

/// Integral over (lo, hi) of w^p for p != 0, or of ln w for p == 0.
inline Integral integrate(const Weight& w, double lo, double hi, double p, const MeanOptions& opt = {}) {
  if (opt.resolution < 2) throw Error("quadrature resolution must be at least 2");
  if (opt.method == Method::Auto) {
    if (auto pieces = w.pieces(lo, hi)) {
      Integral out;
      for (const auto& pc : *pieces) {
        double tl = pc.lo - pc.center, tr = pc.hi - pc.center;
        if (p == 0) {
          out.value += (pc.hi - pc.lo) * std::log(pc.coef) +
                       (pc.exponent == 0 ? 0.0 : pc.exponent * detail::abs_log_integral(tl, tr));
        } else if (pc.exponent == 0) {
          out.value += std::pow(pc.coef, p) * (pc.hi - pc.lo);
        } else {
          double v = detail::abs_power_integral(tl, tr, pc.exponent * p);
          if (std::isinf(v)) return {kInf, true};
          out.value += std::pow(pc.coef, p) * v;
        }
      }
      return out;
    }
  }
  if (opt.method == Method::Midpoint) {
    Integral a = detail::quadrature(w, lo, hi, p, opt.resolution, false);
    if (p == 0 || !opt.heuristic_divergence) return a;
    Integral b = detail::quadrature(w, lo, hi, p, 2 * opt.resolution, false);
    Integral c = detail::quadrature(w, lo, hi, p, 4 * opt.resolution, false);
    if (b.value > 10 * a.value && c.value > 10 * b.value) return {kInf, true};
    return a;
  }
  return detail::quadrature(w, lo, hi, p, opt.resolution, true);
}

/// ess inf (which < 0) or ess sup (which > 0) of w over (lo, hi).
inline double ess_bound(const Weight& w, double lo, double hi, int which, const MeanOptions& opt = {}) {
  auto better = [which](double a, double b) { return which > 0 ? std::max(a, b) : std::min(a, b); };
  double best = which > 0 ? 0.0 : kInf;
  if (auto pieces = w.pieces(lo, hi)) {
    for (const auto& pc : *pieces) {
      if (pc.exponent == 0) {
        best = better(best, pc.coef);
        continue;
      }
      double tl = pc.lo - pc.center, tr = pc.hi - pc.center;
      auto at = [&](double t) {
        if (t == 0) return pc.exponent > 0 ? 0.0 : kInf;
        return pc.coef * std::pow(std::abs(t), pc.exponent);
      };
      best = better(best, better(at(tl), at(tr)));
      if (tl < 0 && tr > 0) best = better(best, pc.exponent > 0 ? 0.0 : kInf);
    }
    return best;
  }
  // Nodes plus one-sided limits at the ends and at every special point.
  auto cut = detail::cuts(w, lo, hi);
  auto counts = detail::allocate(cut, opt.resolution);
  auto limit = [&](double x, int side) {
    Local l = w.local(x, side);
    if (l.exponent > 0) return 0.0;
    if (l.exponent < 0) return kInf;
    return l.cofactor;
  };
  for (std::size_t k = 0; k < counts.size(); ++k) {
    double l = cut[k], r = cut[k + 1];
    double h = (r - l) / static_cast<double>(counts[k]);
    for (std::size_t i = 0; i < counts[k]; ++i) best = better(best, w(l + (static_cast<double>(i) + 0.5) * h));
    best = better(best, better(limit(l, +1), limit(r, -1)));
  }
  return best;
}

/// The p-mean of w over B. Sentinels: +inf when the integral of w^p
/// diverges with p > 0 (or ess sup is infinite), 0 when it diverges with
/// p < 0 (or ess inf vanishes).
inline double p_mean(const Weight& w, const Ball& B, double p, const MeanOptions& opt = {}) {
  if (!(B.radius > 0)) throw Error("ball radius must be positive");
  if (opt.resolution < 2) throw Error("quadrature resolution must be at least 2");
  if (std::isinf(p)) return ess_bound(w, B.lo(), B.hi(), p > 0 ? 1 : -1, opt);
  Integral I = integrate(w, B.lo(), B.hi(), p, opt);
  if (p == 0) return std::exp(I.value / B.measure());
  if (I.divergent || std::isinf(I.value)) return p > 0 ? kInf : 0.0;
  return std::exp(std::log(I.value / B.measure()) / p);
}

inline double exponent_value(const Exponent& e) {
  if (e.is_neg_inf()) return -kInf;
  if (e.is_pos_inf()) return kInf;
  if (!e.is_rational()) throw Error("numeric evaluation needs a concrete exponent, got " + e.str());
  return to_double(e.value());
}

inline double p_mean(const Weight& w, const Ball& B, const Exponent& p, const MeanOptions& opt = {}) {
  return p_mean(w, B, exponent_value(p), opt);
}

}  // namespace rcalc::numlab
