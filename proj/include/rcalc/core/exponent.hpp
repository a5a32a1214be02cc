#pragma once

#include "rcalc/core/rational.hpp"

#include <compare>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>

namespace rcalc {

struct ExistentialSymbol;
using SymbolPtr = std::shared_ptr<const ExistentialSymbol>;

/// A point of the extended real line [-inf, +inf].
///
/// Finite values are exact rationals. A finite value may also be symbolic:
/// `coef * sym`, where `sym` is an existentially quantified number known
/// only to lie in an open interval with concrete endpoints. Comparisons
/// involving symbols are decided from those bounds and may be unordered.
class Exponent {
 public:
  enum class Kind { NegInf, Finite, Symbolic, PosInf };

  Exponent() : kind_(Kind::Finite) {}
  Exponent(const Rational& value) : kind_(Kind::Finite), value_(value) {}  // NOLINT
  Exponent(long long value) : kind_(Kind::Finite), value_(value) {}       // NOLINT
  Exponent(int value) : kind_(Kind::Finite), value_(value) {}             // NOLINT

  static Exponent neg_inf() { return Exponent(Kind::NegInf); }
  static Exponent pos_inf() { return Exponent(Kind::PosInf); }
  static Exponent symbolic(const Rational& coef, SymbolPtr sym);

  Kind kind() const { return kind_; }
  bool is_neg_inf() const { return kind_ == Kind::NegInf; }
  bool is_pos_inf() const { return kind_ == Kind::PosInf; }
  bool is_infinite() const { return is_neg_inf() || is_pos_inf(); }
  bool is_rational() const { return kind_ == Kind::Finite; }
  bool is_symbolic() const { return kind_ == Kind::Symbolic; }
  /// Rational or infinite: no existential symbol involved.
  bool is_concrete() const { return kind_ != Kind::Symbolic; }

  const Rational& value() const {
    if (kind_ != Kind::Finite) throw Error("exponent " + str() + " is not a rational");
    return value_;
  }
  const Rational& coef() const { return value_; }
  const SymbolPtr& symbol() const { return sym_; }

  /// Multiplication by a nonzero rational; infinities flip with the sign.
  Exponent times(const Rational& k) const {
    if (k == 0) throw Error("exponent scaled by zero");
    switch (kind_) {
      case Kind::NegInf: return k > 0 ? neg_inf() : pos_inf();
      case Kind::PosInf: return k > 0 ? pos_inf() : neg_inf();
      case Kind::Finite: return Exponent(Rational(value_ * k));
      case Kind::Symbolic: return symbolic(value_ * k, sym_);
    }
    return *this;
  }
  Exponent divided_by(const Rational& k) const {
    if (k == 0) throw Error("exponent divided by zero");
    return times(Rational(1) / k);
  }

  /// Known sign (-1, 0, +1), absent when a symbol's bounds straddle zero.
  std::optional<int> sign() const;

  /// Double value; symbols use a deterministic representative in their range.
  double approx() const;

  std::string str() const;

  friend bool operator==(const Exponent& a, const Exponent& b);
  friend std::partial_ordering operator<=>(const Exponent& a, const Exponent& b);

 private:
  explicit Exponent(Kind kind) : kind_(kind) {}

  Kind kind_;
  Rational value_;
  SymbolPtr sym_;
};

/// An existential number with concrete open bounds, e.g. "1+delta" in (1, inf).
struct ExistentialSymbol {
  std::string label;
  Exponent lo;
  Exponent hi;
  std::string meaning;

  double representative() const {
    double a = lo.approx(), b = hi.approx();
    if (lo.is_neg_inf() && hi.is_pos_inf()) return 0.0;
    if (lo.is_neg_inf()) return b - 1.0;
    if (hi.is_pos_inf()) return a + (a > 0 ? a : 1.0);
    return 0.5 * (a + b);
  }
};

inline SymbolPtr make_symbol(std::string label, Exponent lo, Exponent hi, std::string meaning) {
  if (!lo.is_concrete() || !hi.is_concrete()) throw Error("symbol bounds must be concrete");
  if (!(lo < hi)) throw Error("symbol bounds must satisfy lo < hi");
  return std::make_shared<const ExistentialSymbol>(
      ExistentialSymbol{std::move(label), std::move(lo), std::move(hi), std::move(meaning)});
}

inline Exponent Exponent::symbolic(const Rational& coef, SymbolPtr sym) {
  if (coef == 0) throw Error("symbolic exponent with zero coefficient");
  if (!sym) throw Error("symbolic exponent without symbol");
  Exponent e(Kind::Symbolic);
  e.value_ = coef;
  e.sym_ = std::move(sym);
  return e;
}

namespace detail {

struct Bound {
  Exponent at;
  bool open;
};

struct Range {
  Bound lo;
  Bound hi;
};

inline std::partial_ordering concrete_order(const Exponent& a, const Exponent& b) {
  auto rank = [](const Exponent& e) {
    return e.is_neg_inf() ? 0 : e.is_pos_inf() ? 2 : 1;
  };
  int ra = rank(a), rb = rank(b);
  if (ra != rb) return ra <=> rb;
  if (ra != 1) return std::partial_ordering::equivalent;
  const Rational& x = a.value();
  const Rational& y = b.value();
  if (x < y) return std::partial_ordering::less;
  if (y < x) return std::partial_ordering::greater;
  return std::partial_ordering::equivalent;
}

inline Range range_of(const Exponent& e) {
  if (e.is_concrete()) return {{e, false}, {e, false}};
  const auto& s = *e.symbol();
  Exponent a = s.lo.times(e.coef());
  Exponent b = s.hi.times(e.coef());
  if (e.coef() > 0) return {{a, true}, {b, true}};
  return {{b, true}, {a, true}};
}

// a < b for certain when a's upper bound sits at or below b's lower bound.
inline bool range_below(const Range& a, const Range& b) {
  auto c = concrete_order(a.hi.at, b.lo.at);
  if (c == std::partial_ordering::less) return true;
  if (c == std::partial_ordering::equivalent) return a.hi.open || b.lo.open;
  return false;
}

}  // namespace detail

inline bool operator==(const Exponent& a, const Exponent& b) {
  if (a.kind_ != b.kind_) return false;
  switch (a.kind_) {
    case Exponent::Kind::NegInf:
    case Exponent::Kind::PosInf: return true;
    case Exponent::Kind::Finite: return a.value_ == b.value_;
    case Exponent::Kind::Symbolic:
      return a.value_ == b.value_ && a.sym_->label == b.sym_->label;
  }
  return false;
}

inline std::partial_ordering operator<=>(const Exponent& a, const Exponent& b) {
  if (a.is_concrete() && b.is_concrete()) return detail::concrete_order(a, b);
  if (a == b) return std::partial_ordering::equivalent;
  if (a.is_symbolic() && b.is_symbolic() && a.sym_->label == b.sym_->label) {
    // Same symbol: compare coefficients, oriented by the symbol's sign.
    auto s = Exponent::symbolic(1, a.sym_).sign();
    if (!s || *s == 0) return std::partial_ordering::unordered;
    Rational d = (a.value_ - b.value_) * (*s);
    return d < 0 ? std::partial_ordering::less : std::partial_ordering::greater;
  }
  auto ra = detail::range_of(a);
  auto rb = detail::range_of(b);
  if (detail::range_below(ra, rb)) return std::partial_ordering::less;
  if (detail::range_below(rb, ra)) return std::partial_ordering::greater;
  return std::partial_ordering::unordered;
}

inline std::optional<int> Exponent::sign() const {
  auto c = *this <=> Exponent(0);
  if (c == std::partial_ordering::less) return -1;
  if (c == std::partial_ordering::greater) return 1;
  if (c == std::partial_ordering::equivalent) return 0;
  return std::nullopt;
}

inline double Exponent::approx() const {
  switch (kind_) {
    case Kind::NegInf: return -std::numeric_limits<double>::infinity();
    case Kind::PosInf: return std::numeric_limits<double>::infinity();
    case Kind::Finite: return to_double(value_);
    case Kind::Symbolic: return to_double(value_) * sym_->representative();
  }
  return 0.0;
}

inline std::string Exponent::str() const {
  switch (kind_) {
    case Kind::NegInf: return "-inf";
    case Kind::PosInf: return "inf";
    case Kind::Finite: return format_exact(value_);
    case Kind::Symbolic:
      if (value_ == 1) return sym_->label;
      if (value_ == -1) return "-" + sym_->label;
      return format_exact(value_) + "*" + sym_->label;
  }
  return {};
}

inline std::ostream& operator<<(std::ostream& os, const Exponent& e) { return os << e.str(); }

/// Parses "-inf", "inf", "+inf" or a rational (fraction or exact decimal).
inline Exponent parse_exponent(std::string_view text) {
  if (text == "-inf") return Exponent::neg_inf();
  if (text == "inf" || text == "+inf") return Exponent::pos_inf();
  return Exponent(parse_rational(text));
}

/// An ordered pair lo < hi of exponents: the two ends of an arrow.
class ExponentPair {
 public:
  ExponentPair(Exponent lo, Exponent hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
    if (!(lo_ < hi_))
      throw Error("exponent pair needs lo < hi, got (" + lo_.str() + ", " + hi_.str() + ")");
  }

  const Exponent& lo() const { return lo_; }
  const Exponent& hi() const { return hi_; }
  bool is_concrete() const { return lo_.is_concrete() && hi_.is_concrete(); }

  /// [lo, hi] of this pair lies inside [other.lo, other.hi] for certain.
  bool nested_in(const ExponentPair& other) const {
    return other.lo_ <= lo_ && hi_ <= other.hi_;
  }

  std::string str() const { return "(" + lo_.str() + ", " + hi_.str() + ")"; }

  friend bool operator==(const ExponentPair&, const ExponentPair&) = default;

 private:
  Exponent lo_;
  Exponent hi_;
};

inline std::ostream& operator<<(std::ostream& os, const ExponentPair& p) { return os << p.str(); }

/// Exponent transport under w -> w^theta.
inline ExponentPair scale_pair(const ExponentPair& pair, const Rational& theta) {
  if (theta == 0) throw Error("scaling by theta = 0 is undefined");
  if (theta > 0) return {pair.lo().divided_by(theta), pair.hi().divided_by(theta)};
  return {pair.hi().divided_by(theta), pair.lo().divided_by(theta)};
}

namespace detail {

// 1/e for a concrete nonzero exponent, with 1/(+-inf) = 0.
inline Rational reciprocal_or_zero(const Exponent& e) {
  if (e.is_infinite()) return 0;
  return Rational(1) / e.value();
}

}  // namespace detail

/// Harmonic interpolation of two arrows that cross zero.
inline ExponentPair interpolate_exponents(const Exponent& r1, const Exponent& r2, const Exponent& s1,
                                          const Exponent& s2, const Rational& theta) {
  for (const auto* e : {&r1, &r2, &s1, &s2})
    if (!e->is_concrete()) throw Error("interpolation needs concrete exponents, got " + e->str());
  if (theta < 0 || theta > 1) throw Error("interpolation parameter must lie in [0, 1]");
  if (!(r1 <= r2)) throw Error("interpolation needs r1 <= r2, got " + r1.str() + " > " + r2.str());
  if (!(r2 < Exponent(0))) throw Error("interpolation needs r2 < 0, got " + r2.str());
  if (!(Exponent(0) < s1)) throw Error("interpolation needs s1 > 0, got " + s1.str());
  if (!(s1 <= s2)) throw Error("interpolation needs s1 <= s2, got " + s1.str() + " > " + s2.str());
  Rational one_minus = Rational(1) - theta;
  Rational inv_r = theta * detail::reciprocal_or_zero(r1) + one_minus * detail::reciprocal_or_zero(r2);
  Rational inv_s = theta * detail::reciprocal_or_zero(s1) + one_minus * detail::reciprocal_or_zero(s2);
  Exponent r = inv_r == 0 ? Exponent::neg_inf() : Exponent(Rational(Rational(1) / inv_r));
  Exponent s = inv_s == 0 ? Exponent::pos_inf() : Exponent(Rational(Rational(1) / inv_s));
  return {r, s};
}

/// Muckenhoupt A_p as an exponent pair: A_1 = (-inf, 1), A_p = (1/(1-p), 1), A_inf = (0, 1).
inline ExponentPair ap_exponent(const Exponent& p) {
  if (p.is_pos_inf()) return {Exponent(0), Exponent(1)};
  if (!p.is_rational() || p.value() < 1)
    throw Error("A_p needs 1 <= p <= inf, got p = " + p.str());
  if (p.value() == 1) return {Exponent::neg_inf(), Exponent(1)};
  return {Exponent(Rational(Rational(1) / (Rational(1) - p.value()))), Exponent(1)};
}

inline Exponent holder_conjugate(const Exponent& p) {
  if (!p.is_rational() || p.value() <= 1)
    throw Error("Hoelder conjugate needs 1 < p < inf, got p = " + p.str());
  const Rational& v = p.value();
  return Exponent(Rational(v / (v - 1)));
}

}  // namespace rcalc
