#pragma once

#include "rcalc/facts/fact.hpp"

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace rcalc {

/// A membership question: is `subject` in the class `pair` (strong or weak)?
struct Goal {
  WeightExpr subject;
  ExponentPair pair;
  Strength strength = Strength::Strong;

  std::string str() const { return subject.str() + " in " + class_token(pair, strength); }
};

struct FactFile {
  FactBase base;
  std::vector<Goal> goals;
};

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

// Splits "<left> <keyword> <right>" at the first whitespace-delimited keyword.
inline std::optional<std::pair<std::string, std::string>> split_keyword(const std::string& s,
                                                                         const std::string& kw) {
  std::size_t from = 0;
  while (true) {
    auto at = s.find(kw, from);
    if (at == std::string::npos) return std::nullopt;
    bool left_ok = at > 0 && std::isspace(static_cast<unsigned char>(s[at - 1]));
    std::size_t end = at + kw.size();
    bool right_ok = end < s.size() && std::isspace(static_cast<unsigned char>(s[end]));
    if (left_ok && right_ok) return std::make_pair(trim(s.substr(0, at)), trim(s.substr(end)));
    from = at + 1;
  }
}

inline bool is_identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'')) return false;
  return true;
}

}  // namespace detail

/// Parses a weight expression and checks every atom was declared.
inline WeightExpr parse_declared_weight(const FactBase& base, const std::string& text, int line) {
  WeightExpr w;
  try {
    w = parse_weight(text);
  } catch (const ParseError& e) {
    throw ParseError(e.what(), line);
  }
  for (const auto& [name, k] : w.factors())
    if (!base.declared(name)) throw ParseError("undeclared weight '" + name + "'", line);
  return w;
}

inline Goal parse_goal_text(const FactBase& base, const std::string& text, int line = 0) {
  auto parts = detail::split_keyword(text, "in");
  if (!parts) throw ParseError("expected '<weight> in <class>'", line);
  WeightExpr subject = parse_declared_weight(base, parts->first, line);
  try {
    ClassSpec spec = parse_class_spec(parts->second);
    return {subject, spec.pair, spec.strength};
  } catch (const ParseError& e) {
    throw ParseError(e.what(), line);
  }
}

/// Reads the line-oriented fact format:
///   weight <name>
///   assume <weight-expr> in <class-token> constant <atom-name>
///   doubling <weight-expr>^<r> constant <atom-name>
///   goal <weight-expr> in <class-token>
/// '#' starts a comment.
inline FactFile parse_fact_file(std::istream& in) {
  FactFile file;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::string text = detail::trim(raw);
    if (text.empty()) continue;
    auto space = text.find_first_of(" \t");
    std::string keyword = text.substr(0, space);
    std::string rest = space == std::string::npos ? "" : detail::trim(text.substr(space));

    if (keyword == "weight") {
      if (!detail::is_identifier(rest)) throw ParseError("bad weight name '" + rest + "'", line);
      file.base.declare_weight(rest);
    } else if (keyword == "assume") {
      auto c = detail::split_keyword(rest, "constant");
      if (!c) throw ParseError("assume needs 'constant <atom>'", line);
      if (!detail::is_identifier(c->second)) throw ParseError("bad constant name '" + c->second + "'", line);
      Goal g = parse_goal_text(file.base, c->first, line);
      file.base.insert(RCFact{g.subject, g.pair, ConstExpr::named(c->second), g.strength});
    } else if (keyword == "doubling") {
      auto c = detail::split_keyword(rest, "constant");
      if (!c) throw ParseError("doubling needs 'constant <atom>'", line);
      if (!detail::is_identifier(c->second)) throw ParseError("bad constant name '" + c->second + "'", line);
      const std::string& expr = c->first;
      // The doubled power is the last top-level '^'.
      int depth = 0;
      std::size_t caret = std::string::npos;
      for (std::size_t i = 0; i < expr.size(); ++i) {
        if (expr[i] == '(') ++depth;
        else if (expr[i] == ')') --depth;
        else if (expr[i] == '^' && depth == 0) caret = i;
      }
      WeightExpr subject;
      Exponent r(1);
      if (caret == std::string::npos) {
        subject = parse_declared_weight(file.base, expr, line);
      } else {
        subject = parse_declared_weight(file.base, expr.substr(0, caret), line);
        std::string power = detail::trim(expr.substr(caret + 1));
        if (power.size() >= 2 && power.front() == '(' && power.back() == ')')
          power = power.substr(1, power.size() - 2);
        try {
          r = parse_exponent(detail::trim(power));
        } catch (const ParseError& e) {
          throw ParseError(e.what(), line);
        }
      }
      try {
        file.base.insert(make_doubling(subject, r, ConstExpr::named(c->second)));
      } catch (const Error& e) {
        throw ParseError(e.what(), line);
      }
    } else if (keyword == "goal") {
      file.goals.push_back(parse_goal_text(file.base, rest, line));
    } else {
      throw ParseError("unknown statement '" + keyword + "'", line);
    }
  }
  return file;
}

inline FactFile parse_fact_text(const std::string& text) {
  std::istringstream in(text);
  return parse_fact_file(in);
}

inline FactFile load_fact_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open fact file '" + path + "'");
  return parse_fact_file(in);
}

}  // namespace rcalc
