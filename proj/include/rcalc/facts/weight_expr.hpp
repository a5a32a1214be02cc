#pragma once

#include "rcalc/core/power_product.hpp"
#include "rcalc/core/rational.hpp"

#include <cctype>
#include <optional>
#include <string>
#include <string_view>

namespace rcalc {

/// A weight built from named atoms by real powers and products, kept in
/// canonical form. The empty product is the constant-one weight.
class WeightExpr {
 public:
  WeightExpr() = default;

  static WeightExpr atom(std::string name) { return WeightExpr(PowerProduct<std::string>::atom(std::move(name))); }
  static WeightExpr unit() { return {}; }

  bool is_unit() const { return prod_.is_unit(); }
  const auto& factors() const { return prod_.factors(); }

  WeightExpr pow(const Rational& theta) const {
    if (theta == 0) throw Error("weight raised to the power 0");
    return WeightExpr(prod_.pow(theta));
  }

  friend WeightExpr operator*(const WeightExpr& a, const WeightExpr& b) {
    return WeightExpr(a.prod_ * b.prod_);
  }

  /// theta with *this == base^theta, if any.
  std::optional<Rational> exponent_over(const WeightExpr& base) const {
    return prod_.exponent_over(base.prod_);
  }

  std::string str() const {
    if (is_unit()) return "1";
    std::string out;
    for (const auto& [name, k] : factors()) {
      if (!out.empty()) out += "*";
      out += name;
      if (k != 1) out += "^" + format_power(k);
    }
    return out;
  }

  friend bool operator==(const WeightExpr& a, const WeightExpr& b) { return a.prod_ == b.prod_; }
  friend bool operator<(const WeightExpr& a, const WeightExpr& b) { return a.str() < b.str(); }

 private:
  explicit WeightExpr(PowerProduct<std::string> p) : prod_(std::move(p)) {}
  PowerProduct<std::string> prod_;
};

inline std::ostream& operator<<(std::ostream& os, const WeightExpr& w) { return os << w.str(); }

namespace detail {

// Recursive-descent parser for: expr := factor ('*' factor)*;
// factor := primary ('^' power)*; primary := name | '(' expr ')';
// power := unsigned-rational | '(' signed-rational ')' | '-' unsigned-rational.
class WeightParser {
 public:
  explicit WeightParser(std::string_view text) : s_(text) {}

  WeightExpr parse() {
    WeightExpr w = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return w;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("weight expression '" + std::string(s_) + "': " + what);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  WeightExpr expr() {
    WeightExpr w = factor();
    while (eat('*')) w = w * factor();
    return w;
  }

  WeightExpr factor() {
    WeightExpr w = primary();
    while (eat('^')) w = w.pow(power());
    return w;
  }

  WeightExpr primary() {
    if (eat('(')) {
      WeightExpr w = expr();
      if (!eat(')')) fail("missing ')'");
      return w;
    }
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      ++pos_;
    if (start == pos_) fail("expected a weight name");
    std::string name(s_.substr(start, pos_ - start));
    if (!std::isalpha(static_cast<unsigned char>(name[0])) && name[0] != '_')
      fail("weight names start with a letter: '" + name + "'");
    return WeightExpr::atom(name);
  }

  Rational power() {
    if (eat('(')) {
      skip();
      std::size_t start = pos_;
      while (pos_ < s_.size() && s_[pos_] != ')') ++pos_;
      std::string_view body = s_.substr(start, pos_ - start);
      if (!eat(')')) fail("missing ')' after exponent");
      return number(body);
    }
    skip();
    std::size_t start = pos_;
    if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
    while (pos_ < s_.size() &&
           (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.' || s_[pos_] == '/'))
      ++pos_;
    return number(s_.substr(start, pos_ - start));
  }

  Rational number(std::string_view body) {
    std::string trimmed;
    for (char c : body)
      if (!std::isspace(static_cast<unsigned char>(c))) trimmed += c;
    Rational q;
    try {
      q = parse_rational(trimmed);
    } catch (const ParseError&) {
      fail("bad exponent '" + trimmed + "'");
    }
    if (q == 0) fail("exponent 0 is not allowed");
    return q;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline WeightExpr parse_weight(std::string_view text) { return detail::WeightParser(text).parse(); }

}  // namespace rcalc
