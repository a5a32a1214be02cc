#pragma once

#include "rcalc/engine/derivation.hpp"
#include "rcalc/facts/fact_file.hpp"

#include <fstream>
#include <sstream>
#include <string>

namespace rcalc::test {

inline RCFact fact(const std::string& subject, const std::string& cls, const ConstExpr& c) {
  ClassSpec spec = parse_class_spec(cls);
  return {parse_weight(subject), spec.pair, c, spec.strength};
}

inline RCFact fact(const std::string& subject, const std::string& cls, const std::string& constant) {
  return fact(subject, cls, ConstExpr::named(constant));
}

inline Exponent ex(const std::string& text) { return parse_exponent(text); }

inline ExponentPair pair(const std::string& lo, const std::string& hi) { return {ex(lo), ex(hi)}; }

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace rcalc::test
