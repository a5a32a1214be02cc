#pragma once

#include "rcalc/core/rational.hpp"

#include <json.hpp>

#include <cmath>
#include <string>
#include <vector>

namespace rcalc::numlab {

/// Open interval (a, b) with Lebesgue measure.
struct Domain {
  double a = -1;
  double b = 1;

  Domain() = default;
  Domain(double lo, double hi) : a(lo), b(hi) {
    if (!(b - a > 0) || !std::isfinite(a) || !std::isfinite(b)) throw Error("domain needs finite a < b");
  }
};

/// B = (center - radius, center + radius).
struct Ball {
  double center;
  double radius;

  double lo() const { return center - radius; }
  double hi() const { return center + radius; }
  double measure() const { return 2 * radius; }
  Ball doubled() const { return {center, 2 * radius}; }
};

/// A ball is usable when its double still lies in the domain (up to
/// rounding in the family generators).
inline bool admissible(const Ball& B, const Domain& D) {
  double slack = 1e-12 * (D.b - D.a);
  return B.radius > 0 && B.center - 2 * B.radius >= D.a - slack && B.center + 2 * B.radius <= D.b + slack;
}

inline void require_admissible(const Ball& B, const Domain& D) {
  if (!admissible(B, D))
    throw Error("ball (" + std::to_string(B.lo()) + ", " + std::to_string(B.hi()) + ") is not admissible: 2B leaves the domain");
}

/// Finite surrogate for the supremum over all admissible balls.
struct BallFamily {
  Domain domain;
  std::vector<Ball> balls;
  nlohmann::json description;

  std::size_t size() const { return balls.size(); }
};

namespace detail {

// Geometric ladder from the largest admissible radius at c down by min_ratio.
inline void ladder(std::vector<Ball>& out, const Domain& D, double c, int n_radii, double min_ratio) {
  double top = std::min(c - D.a, D.b - c) / 2;
  if (!(top > 0)) return;
  for (int k = 0; k < n_radii; ++k) {
    double t = n_radii == 1 ? 0.0 : static_cast<double>(k) / (n_radii - 1);
    out.push_back({c, top * std::pow(min_ratio, t)});
  }
}

inline void check_family_args(int n_radii, double min_ratio) {
  if (n_radii < 1) throw Error("ball family needs at least one radius");
  if (!(min_ratio > 0 && min_ratio <= 1)) throw Error("min_ratio must lie in (0, 1]");
}

}  // namespace detail

/// Balls all centred at `focus`, radii descending geometrically.
inline BallFamily centered_family(const Domain& D, double focus, int n_radii, double min_ratio) {
  detail::check_family_args(n_radii, min_ratio);
  if (!(focus > D.a && focus < D.b)) throw Error("family focus must lie inside the domain");
  BallFamily f{D, {}, {{"kind", "centered"}, {"focus", focus}, {"n_radii", n_radii}, {"min_ratio", min_ratio}}};
  detail::ladder(f.balls, D, focus, n_radii, min_ratio);
  f.description["size"] = f.balls.size();
  return f;
}

/// n_centers equally spaced centres (cell midpoints), the one nearest to
/// `include_point` moved onto it, each with a geometric radius ladder.
inline BallFamily grid_family(const Domain& D, int n_centers, int n_radii, double min_ratio,
                              std::optional<double> include_point = std::nullopt) {
  detail::check_family_args(n_radii, min_ratio);
  if (n_centers < 1) throw Error("ball family needs at least one centre");
  std::vector<double> centers;
  for (int i = 0; i < n_centers; ++i) centers.push_back(D.a + (D.b - D.a) * (i + 0.5) / n_centers);
  if (include_point) {
    if (!(*include_point > D.a && *include_point < D.b)) throw Error("included point must lie inside the domain");
    std::size_t best = 0;
    for (std::size_t i = 1; i < centers.size(); ++i)
      if (std::abs(centers[i] - *include_point) < std::abs(centers[best] - *include_point)) best = i;
    centers[best] = *include_point;
  }
  BallFamily f{D, {}, {{"kind", "grid"}, {"n_centers", n_centers}, {"n_radii", n_radii}, {"min_ratio", min_ratio}}};
  if (include_point) f.description["include"] = *include_point;
  for (double c : centers) detail::ladder(f.balls, D, c, n_radii, min_ratio);
  f.description["size"] = f.balls.size();
  return f;
}

inline BallFamily explicit_family(const Domain& D, std::vector<Ball> balls) {
  for (const auto& B : balls) require_admissible(B, D);
  BallFamily f{D, std::move(balls), {{"kind", "explicit"}}};
  f.description["size"] = f.balls.size();
  return f;
}

}  // namespace rcalc::numlab
