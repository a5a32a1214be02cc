#pragma once

#include "rcalc/core/exponent.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace rcalc {

enum class Strength { Strong, Weak };

inline const char* strength_name(Strength s) { return s == Strength::Strong ? "strong" : "weak"; }

/// A parsed class token: the exponent pair plus whether it names a weak class.
struct ClassSpec {
  ExponentPair pair;
  Strength strength = Strength::Strong;
};

namespace detail {

inline std::string strip(std::string_view s) {
  std::string out;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) out += c;
  return out;
}

}  // namespace detail

/// Parses A(p), RH(s), RC(r,s), RCweak(r,s) and Harnack.
inline ClassSpec parse_class_spec(std::string_view token) {
  std::string t = detail::strip(token);
  auto fail = [&](const std::string& why) -> ClassSpec {
    throw ParseError("class token '" + std::string(token) + "': " + why);
  };
  if (t == "Harnack") return {{Exponent::neg_inf(), Exponent::pos_inf()}, Strength::Strong};
  auto open = t.find('(');
  if (open == std::string::npos || t.back() != ')') return fail("expected NAME(args)");
  std::string head = t.substr(0, open);
  std::string args = t.substr(open + 1, t.size() - open - 2);
  try {
    if (head == "A") {
      Exponent p = parse_exponent(args);
      if (p.is_neg_inf() || (p.is_rational() && p.value() < 1)) return fail("A(p) needs p >= 1");
      return {ap_exponent(p), Strength::Strong};
    }
    if (head == "RH") {
      Exponent s = parse_exponent(args);
      if (!(Exponent(1) < s)) return fail("RH(s) needs s > 1");
      return {{Exponent(1), s}, Strength::Strong};
    }
    if (head == "RC" || head == "RCweak") {
      auto comma = args.find(',');
      if (comma == std::string::npos || args.find(',', comma + 1) != std::string::npos)
        return fail("expected two exponents");
      Exponent lo = parse_exponent(args.substr(0, comma));
      Exponent hi = parse_exponent(args.substr(comma + 1));
      if (!(lo < hi)) return fail("needs lo < hi");
      return {{lo, hi}, head == "RC" ? Strength::Strong : Strength::Weak};
    }
  } catch (const ParseError& e) {
    if (std::string(e.what()).rfind("class token", 0) == 0) throw;
    return fail(e.what());
  } catch (const Error& e) {
    return fail(e.what());
  }
  return fail("unknown class '" + head + "'");
}

inline ExponentPair parse_class(std::string_view token) { return parse_class_spec(token).pair; }

/// Named class of an exponent pair, if it has one.
inline std::optional<std::string> name_class(const ExponentPair& pair) {
  const Exponent& lo = pair.lo();
  const Exponent& hi = pair.hi();
  if (!pair.is_concrete()) return std::nullopt;
  if (lo.is_neg_inf() && hi.is_pos_inf()) return "Harnack";
  if (hi == Exponent(1)) {
    if (lo.is_neg_inf()) return "A(1)";
    if (lo == Exponent(0)) return "A(inf)";
    if (lo.is_rational() && lo.value() < 0) {
      Rational p = Rational(1) - Rational(1) / lo.value();
      return "A(" + format_exact(p) + ")";
    }
    return std::nullopt;
  }
  if (lo == Exponent(1)) return "RH(" + hi.str() + ")";
  return std::nullopt;
}

/// Token text for a class: the named form when available, otherwise RC/RCweak.
inline std::string class_token(const ExponentPair& pair, Strength strength) {
  if (strength == Strength::Strong) {
    if (auto name = name_class(pair)) return *name;
    return "RC(" + pair.lo().str() + "," + pair.hi().str() + ")";
  }
  return "RCweak(" + pair.lo().str() + "," + pair.hi().str() + ")";
}

}  // namespace rcalc
