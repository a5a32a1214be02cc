#pragma once

#include "rcalc/core/power_product.hpp"
#include "rcalc/core/rational.hpp"

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <tuple>

namespace rcalc {

/// A reversal-constant atom. Named atoms stand for known constants (they can
/// be bound to numbers); existential atoms only assert that some constant
/// exists and carry a human-readable note about where it came from.
struct ConstAtom {
  enum class Kind { Named, Existential };
  Kind kind = Kind::Named;
  std::string label;
  std::string note;

  friend bool operator==(const ConstAtom& a, const ConstAtom& b) {
    return a.kind == b.kind && a.label == b.label;
  }
  friend bool operator<(const ConstAtom& a, const ConstAtom& b) {
    return std::tie(a.label, a.kind) < std::tie(b.label, b.kind);
  }
};

using ConstBindings = std::map<std::string, double>;

/// Symbolic reversal constant: a canonical product of nonnegative powers of
/// atoms. One is the empty product.
class ConstExpr {
 public:
  ConstExpr() = default;

  static ConstExpr one() { return {}; }
  static ConstExpr named(std::string label) {
    return ConstExpr(PowerProduct<ConstAtom>::atom({ConstAtom::Kind::Named, std::move(label), {}}));
  }
  static ConstExpr existential(std::string label, std::string note) {
    return ConstExpr(PowerProduct<ConstAtom>::atom(
        {ConstAtom::Kind::Existential, std::move(label), std::move(note)}));
  }

  bool is_one() const { return prod_.is_unit(); }
  const auto& factors() const { return prod_.factors(); }

  /// Power(c, k) for k >= 0; Power(c, 0) is One.
  ConstExpr pow(const Rational& k) const {
    if (k < 0) throw Error("reversal constants are raised to nonnegative powers only");
    return ConstExpr(prod_.pow(k));
  }

  friend ConstExpr operator*(const ConstExpr& a, const ConstExpr& b) {
    return ConstExpr(a.prod_ * b.prod_);
  }

  bool evaluable() const {
    for (const auto& [atom, k] : factors())
      if (atom.kind == ConstAtom::Kind::Existential) return false;
    return true;
  }

  /// Numeric value; absent when an existential atom or an unbound name occurs.
  std::optional<double> evaluate(const ConstBindings& bindings) const {
    double v = 1.0;
    for (const auto& [atom, k] : factors()) {
      if (atom.kind == ConstAtom::Kind::Existential) return std::nullopt;
      auto it = bindings.find(atom.label);
      if (it == bindings.end()) return std::nullopt;
      v *= std::pow(it->second, to_double(k));
    }
    return v;
  }

  std::string str() const { return render(false); }

  /// Rendering with existential labels replaced by their order of appearance,
  /// so that two constants differing only in fresh names compare equal.
  std::string shape() const { return render(true); }

  friend bool operator==(const ConstExpr& a, const ConstExpr& b) { return a.prod_ == b.prod_; }

 private:
  explicit ConstExpr(PowerProduct<ConstAtom> p) : prod_(std::move(p)) {}

  std::string render(bool anonymize) const {
    if (is_one()) return "1";
    std::string out;
    int fresh = 0;
    for (const auto& [atom, k] : factors()) {
      if (!out.empty()) out += "*";
      if (anonymize && atom.kind == ConstAtom::Kind::Existential)
        out += "?" + std::to_string(++fresh);
      else
        out += atom.label;
      if (k != 1) out += "^" + format_power(k);
    }
    return out;
  }

  PowerProduct<ConstAtom> prod_;
};

inline std::ostream& operator<<(std::ostream& os, const ConstExpr& c) { return os << c.str(); }

/// Constant transport under w -> w^theta: C^|theta|.
inline ConstExpr scale_const(const ConstExpr& c, const Rational& theta) {
  if (theta == 0) throw Error("scaling by theta = 0 is undefined");
  return c.pow(theta < 0 ? Rational(-theta) : theta);
}

}  // namespace rcalc
