#pragma once

#include "rcalc/engine/search.hpp"

#include <set>
#include <string>
#include <vector>

namespace rcalc {

/// Oscillation classes of log(subject) read off derivable arrows.
struct Classification {
  std::set<std::string> classes;  // subset of {BLO, BMO, BUO, Harnack}
  std::vector<std::string> witnesses;  // one fact per class, in class order

  std::string str() const {
    std::string out;
    for (const auto& c : classes) out += (out.empty() ? "" : " ") + c;
    return out.empty() ? "none" : out;
  }
};

/// Saturates the base (without a goal) and inspects every strong arrow on a
/// power subject^alpha, alpha != 0, transported back to the subject:
/// BMO for any arrow, BLO when it reaches -inf, BUO when it reaches +inf,
/// Harnack when it reaches both. Powers are limited to those the SCALE
/// candidate generator produces.
inline Classification classify_log(const FactBase& base, const WeightExpr& subject,
                                   const SearchOptions& options = {}) {
  Saturator sat(base, std::nullopt, options);
  Classification out;
  std::map<std::string, std::string> found;
  auto scan = [&](int d) {
    for (auto id : sat.level(d)) {
      const RCFact& f = sat.graph().node(id);
      if (!f.is_strong()) continue;
      auto alpha = f.subject.exponent_over(subject);
      if (!alpha) continue;
      ExponentPair back = scale_pair(f.pair, 1 / *alpha);
      auto note = [&](const char* cls) { found.emplace(cls, f.str()); };
      note("BMO");
      if (back.lo().is_neg_inf()) note("BLO");
      if (back.hi().is_pos_inf()) note("BUO");
      if (back.lo().is_neg_inf() && back.hi().is_pos_inf()) note("Harnack");
    }
  };
  scan(0);
  for (int d = 1; d <= options.budget && !found.count("Harnack"); ++d) {
    bool grew = sat.step();
    scan(d);
    if (!grew || sat.stats().capped) break;
  }
  for (const auto& [cls, fact] : found) {
    out.classes.insert(cls);
    out.witnesses.push_back(cls + ": " + fact);
  }
  return out;
}

}  // namespace rcalc
