#pragma once

#include "rcalc/core/rational.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace rcalc::numlab {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// w(x) = coef * |x - center|^exponent on (lo, hi).
struct Piece {
  double lo, hi;
  double coef;
  double exponent;
  double center;

  bool is_constant() const { return exponent == 0; }
};

/// Leading behaviour w(x) ~ cofactor * |x - x0|^exponent as x -> x0 from one
/// side, with a cofactor that is smooth on that side.
struct Local {
  double exponent = 0;
  double cofactor = 1;
};

namespace detail {

/// Shortest text that reads back to the same double.
inline std::string num(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// Merges two piece lists over the same interval into aligned pairs.
template <class F>
std::optional<std::vector<Piece>> overlay(const std::vector<Piece>& a, const std::vector<Piece>& b, F combine) {
  std::vector<Piece> out;
  std::size_t i = 0, j = 0;
  double at = a.front().lo;
  while (i < a.size() && j < b.size()) {
    double end = std::min(a[i].hi, b[j].hi);
    if (end > at) {
      auto pieces = combine(a[i], b[j], at, end);
      if (!pieces) return std::nullopt;
      out.insert(out.end(), pieces->begin(), pieces->end());
    }
    at = end;
    if (a[i].hi <= end) ++i;
    if (j < b.size() && b[j].hi <= end) ++j;
  }
  return out;
}

inline double piece_value(const Piece& p, double x) {
  if (p.exponent == 0) return p.coef;
  return p.coef * std::pow(std::abs(x - p.center), p.exponent);
}

}  // namespace detail

/// Closed-form weight on the real line: powers |x - x0|^a, constants,
/// piecewise constants, and their products, real powers and maxima.
class Weight {
 public:
  enum class Kind { Power, Constant, Piecewise, Product, Pow, Max };

  static Weight power(double exponent, double center = 0, double coef = 1) {
    if (!(coef > 0)) throw Error("power weight needs a positive coefficient");
    if (exponent == 0) return constant(coef);
    return Weight(std::make_shared<Node>(Node{Kind::Power, coef, exponent, center, {}, {}, {}}));
  }
  static Weight constant(double c) {
    if (!(c > 0) || !std::isfinite(c)) throw Error("constant weight needs a positive finite value");
    return Weight(std::make_shared<Node>(Node{Kind::Constant, c, 0, 0, {}, {}, {}}));
  }
  /// values[k] holds on (breaks[k-1], breaks[k]); breaks ascending.
  static Weight piecewise(std::vector<double> breaks, std::vector<double> values) {
    if (values.size() != breaks.size() + 1) throw Error("piecewise weight needs one more value than breaks");
    if (!std::is_sorted(breaks.begin(), breaks.end()) ||
        std::adjacent_find(breaks.begin(), breaks.end()) != breaks.end())
      throw Error("piecewise breaks must be strictly increasing");
    for (double v : values)
      if (!(v > 0) || !std::isfinite(v)) throw Error("piecewise values must be positive and finite");
    return Weight(std::make_shared<Node>(Node{Kind::Piecewise, 1, 0, 0, std::move(breaks), std::move(values), {}}));
  }
  static Weight product(std::vector<Weight> factors) {
    if (factors.empty()) return constant(1);
    if (factors.size() == 1) return factors[0];
    return Weight(std::make_shared<Node>(Node{Kind::Product, 1, 0, 0, {}, {}, std::move(factors)}));
  }
  static Weight pow(Weight base, double theta) {
    if (theta == 0) return constant(1);
    if (theta == 1) return base;
    const Node& n = *base.node_;
    if (n.kind == Kind::Power) return power(n.exponent * theta, n.center, std::pow(n.coef, theta));
    if (n.kind == Kind::Constant) return constant(std::pow(n.coef, theta));
    return Weight(std::make_shared<Node>(Node{Kind::Pow, 1, theta, 0, {}, {}, {std::move(base)}}));
  }
  static Weight max(std::vector<Weight> args) {
    if (args.empty()) throw Error("max of no weights");
    if (args.size() == 1) return args[0];
    return Weight(std::make_shared<Node>(Node{Kind::Max, 1, 0, 0, {}, {}, std::move(args)}));
  }

  Kind kind() const { return node_->kind; }

  /// Value at x; +inf at the center of a negative power, 0 at a positive one.
  double operator()(double x) const {
    const Node& n = *node_;
    switch (n.kind) {
      case Kind::Constant: return n.coef;
      case Kind::Power: {
        double t = std::abs(x - n.center);
        if (t == 0) return n.exponent > 0 ? 0.0 : kInf;
        return n.coef * std::pow(t, n.exponent);
      }
      case Kind::Piecewise: {
        auto k = std::upper_bound(n.breaks.begin(), n.breaks.end(), x) - n.breaks.begin();
        return n.values[static_cast<std::size_t>(k)];
      }
      case Kind::Product: {
        double v = 1;
        for (const auto& f : n.children) v *= f(x);
        return v;
      }
      case Kind::Pow: return std::pow(n.children[0](x), n.exponent);
      case Kind::Max: {
        double v = 0;
        for (const auto& f : n.children) v = std::max(v, f(x));
        return v;
      }
    }
    return 0;
  }

  /// ln w(x), computed without forming w(x) where possible.
  double log_at(double x) const {
    const Node& n = *node_;
    switch (n.kind) {
      case Kind::Constant: return std::log(n.coef);
      case Kind::Power: {
        double t = std::abs(x - n.center);
        if (t == 0) return n.exponent > 0 ? -kInf : kInf;
        return std::log(n.coef) + n.exponent * std::log(t);
      }
      case Kind::Piecewise: return std::log((*this)(x));
      case Kind::Product: {
        double v = 0;
        for (const auto& f : n.children) v += f.log_at(x);
        return v;
      }
      case Kind::Pow: return n.exponent * n.children[0].log_at(x);
      case Kind::Max: {
        double v = -kInf;
        for (const auto& f : n.children) v = std::max(v, f.log_at(x));
        return v;
      }
    }
    return 0;
  }

  /// Leading one-sided behaviour at x0; side < 0 means x -> x0 from the left.
  Local local(double x0, int side) const {
    const Node& n = *node_;
    switch (n.kind) {
      case Kind::Constant: return {0, n.coef};
      case Kind::Power:
        if (x0 == n.center) return {n.exponent, n.coef};
        return {0, n.coef * std::pow(std::abs(x0 - n.center), n.exponent)};
      case Kind::Piecewise: {
        auto it = side < 0 ? std::lower_bound(n.breaks.begin(), n.breaks.end(), x0)
                           : std::upper_bound(n.breaks.begin(), n.breaks.end(), x0);
        return {0, n.values[static_cast<std::size_t>(it - n.breaks.begin())]};
      }
      case Kind::Product: {
        Local out{0, 1};
        for (const auto& f : n.children) {
          Local l = f.local(x0, side);
          out.exponent += l.exponent;
          out.cofactor *= l.cofactor;
        }
        return out;
      }
      case Kind::Pow: {
        Local l = n.children[0].local(x0, side);
        return {l.exponent * n.exponent, std::pow(l.cofactor, n.exponent)};
      }
      case Kind::Max: {
        // The smallest exponent dominates near x0.
        Local best = n.children[0].local(x0, side);
        for (std::size_t k = 1; k < n.children.size(); ++k) {
          Local l = n.children[k].local(x0, side);
          if (l.exponent < best.exponent || (l.exponent == best.exponent && l.cofactor > best.cofactor)) best = l;
        }
        return best;
      }
    }
    return {};
  }

  /// Points where some power factor vanishes or blows up.
  std::vector<double> singular_points() const {
    std::vector<double> out;
    collect(out, false);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  /// Singular points plus jump points of piecewise constants.
  std::vector<double> special_points() const {
    std::vector<double> out;
    collect(out, true);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  /// Exact decomposition of w on (lo, hi) into single-centre power pieces,
  /// if the expression admits one.
  std::optional<std::vector<Piece>> pieces(double lo, double hi) const {
    const Node& n = *node_;
    switch (n.kind) {
      case Kind::Constant: return std::vector<Piece>{{lo, hi, n.coef, 0, 0}};
      case Kind::Power: return std::vector<Piece>{{lo, hi, n.coef, n.exponent, n.center}};
      case Kind::Piecewise: {
        std::vector<Piece> out;
        double at = lo;
        for (std::size_t k = 0; k <= n.breaks.size(); ++k) {
          double end = k < n.breaks.size() ? std::min(n.breaks[k], hi) : hi;
          if (end > at) out.push_back({at, end, n.values[k], 0, 0});
          at = std::max(at, end);
        }
        return out;
      }
      case Kind::Product: {
        auto acc = n.children[0].pieces(lo, hi);
        for (std::size_t k = 1; acc && k < n.children.size(); ++k) {
          auto next = n.children[k].pieces(lo, hi);
          if (!next) return std::nullopt;
          acc = detail::overlay(*acc, *next, [](const Piece& a, const Piece& b, double l, double r)
                                                   -> std::optional<std::vector<Piece>> {
            if (a.exponent != 0 && b.exponent != 0 && a.center != b.center) return std::nullopt;
            double center = a.exponent != 0 ? a.center : b.center;
            double e = a.exponent + b.exponent;
            return std::vector<Piece>{{l, r, a.coef * b.coef, e, e == 0 ? 0 : center}};
          });
        }
        return acc;
      }
      case Kind::Pow: {
        auto base = n.children[0].pieces(lo, hi);
        if (!base) return std::nullopt;
        for (auto& p : *base) {
          p.coef = std::pow(p.coef, n.exponent);
          p.exponent *= n.exponent;
          if (p.exponent == 0) p.center = 0;
        }
        return base;
      }
      case Kind::Max: {
        auto acc = n.children[0].pieces(lo, hi);
        for (std::size_t k = 1; acc && k < n.children.size(); ++k) {
          auto next = n.children[k].pieces(lo, hi);
          if (!next) return std::nullopt;
          acc = detail::overlay(*acc, *next, max_pieces);
        }
        return acc;
      }
    }
    return std::nullopt;
  }

  std::string str() const {
    const Node& n = *node_;
    auto join = [&](const char* sep) {
      std::string out;
      for (const auto& c : n.children) out += (out.empty() ? "" : sep) + c.str();
      return out;
    };
    switch (n.kind) {
      case Kind::Constant: return detail::num(n.coef);
      case Kind::Power: {
        std::string base = n.center == 0 ? "|x|" : "|x-(" + detail::num(n.center) + ")|";
        std::string out = base + "^" + detail::num(n.exponent);
        return n.coef == 1 ? out : detail::num(n.coef) + "*" + out;
      }
      case Kind::Piecewise: {
        std::string out = "piecewise(";
        for (std::size_t k = 0; k < n.values.size(); ++k) {
          out += detail::num(n.values[k]);
          if (k < n.breaks.size()) out += " |" + detail::num(n.breaks[k]) + "| ";
        }
        return out + ")";
      }
      case Kind::Product: return "(" + join(" * ") + ")";
      case Kind::Pow: return "(" + n.children[0].str() + ")^" + detail::num(n.exponent);
      case Kind::Max: return "max(" + join(", ") + ")";
    }
    return "?";
  }

  nlohmann::json to_json() const {
    const Node& n = *node_;
    using nlohmann::json;
    auto kids = [&] {
      json arr = json::array();
      for (const auto& c : n.children) arr.push_back(c.to_json());
      return arr;
    };
    switch (n.kind) {
      case Kind::Constant: return {{"type", "constant"}, {"value", n.coef}};
      case Kind::Power:
        return {{"type", "power"}, {"exponent", n.exponent}, {"center", n.center}, {"coef", n.coef}};
      case Kind::Piecewise: return {{"type", "piecewise"}, {"breaks", n.breaks}, {"values", n.values}};
      case Kind::Product: return {{"type", "product"}, {"factors", kids()}};
      case Kind::Pow: return {{"type", "pow"}, {"base", n.children[0].to_json()}, {"theta", n.exponent}};
      case Kind::Max: return {{"type", "max"}, {"args", kids()}};
    }
    return {};
  }

  static Weight from_json(const nlohmann::json& j) {
    std::string type = j.at("type").get<std::string>();
    auto list = [&](const char* key) {
      std::vector<Weight> out;
      for (const auto& x : j.at(key)) out.push_back(from_json(x));
      return out;
    };
    if (type == "constant") return constant(j.at("value").get<double>());
    if (type == "power")
      return power(j.at("exponent").get<double>(), j.value("center", 0.0), j.value("coef", 1.0));
    if (type == "piecewise")
      return piecewise(j.at("breaks").get<std::vector<double>>(), j.at("values").get<std::vector<double>>());
    if (type == "product") return product(list("factors"));
    if (type == "pow") return pow(from_json(j.at("base")), j.at("theta").get<double>());
    if (type == "max") return max(list("args"));
    throw Error("unknown weight type '" + type + "'");
  }

 private:
  struct Node {
    Kind kind;
    double coef;      // Power, Constant
    double exponent;  // Power exponent, Pow theta
    double center;    // Power
    std::vector<double> breaks;
    std::vector<double> values;
    std::vector<Weight> children;
  };

  explicit Weight(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  void collect(std::vector<double>& out, bool with_jumps) const {
    const Node& n = *node_;
    if (n.kind == Kind::Power) out.push_back(n.center);
    if (n.kind == Kind::Piecewise && with_jumps) out.insert(out.end(), n.breaks.begin(), n.breaks.end());
    for (const auto& c : n.children) c.collect(out, with_jumps);
  }

  // Pointwise max of two pieces on (l, r), split where they cross.
  static std::optional<std::vector<Piece>> max_pieces(const Piece& a, const Piece& b, double l, double r) {
    auto as = [&](const Piece& p, double lo, double hi) { return Piece{lo, hi, p.coef, p.exponent, p.center}; };
    if (a.exponent == b.exponent && (a.exponent == 0 || a.center == b.center))
      return std::vector<Piece>{as(a.coef >= b.coef ? a : b, l, r)};
    if (a.exponent != 0 && b.exponent != 0 && a.center != b.center) return std::nullopt;
    double center = a.exponent != 0 ? a.center : b.center;
    // a.coef |t|^ea = b.coef |t|^eb at |t| = (b.coef / a.coef)^(1 / (ea - eb)).
    double tau = std::pow(b.coef / a.coef, 1.0 / (a.exponent - b.exponent));
    std::vector<double> cuts{l};
    for (double x : {center - tau, center + tau})
      if (x > l && x < r) cuts.push_back(x);
    cuts.push_back(r);
    std::vector<Piece> out;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      double mid = 0.5 * (cuts[k] + cuts[k + 1]);
      const Piece& top = detail::piece_value(a, mid) >= detail::piece_value(b, mid) ? a : b;
      out.push_back(as(top, cuts[k], cuts[k + 1]));
    }
    return out;
  }

  std::shared_ptr<const Node> node_;
};

}  // namespace rcalc::numlab
