#pragma once

#include "rcalc/engine/rules.hpp"

#include <json.hpp>

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace rcalc {

/// Everything a step needs besides its parents to be recomputed.
struct StepParams {
  std::optional<Rational> theta;          // SCALE, INTERPOLATE
  std::optional<ExponentPair> target;     // SHRINK
  std::optional<Exponent> point;          // SPLIT midpoint, WEAK_EXTEND p
  std::optional<SelfImprove> variant;     // self-improvement moves
  std::optional<Witness> witness;
  std::optional<std::size_t> doubling;    // WEAK_PROMOTE: index into Derivation::doubling
  FreshLabels fresh;
  std::vector<std::string> atoms;         // FACTOR_ONLYIF, JONES: new weight names
  int part = 0;                           // SPLIT and factorizations: which output
};

struct Step {
  RuleTag tag;
  std::vector<std::size_t> parents;
  StepParams params;
  RCFact fact;
};

/// A proof DAG. Nodes 0..leaves-1 are assumed facts; node leaves+i is step i.
/// Parents always precede their children.
class Derivation {
 public:
  std::vector<RCFact> leaves;
  std::vector<DoublingFact> doubling;
  std::vector<Step> steps;
  std::vector<std::size_t> goals;
  std::vector<WeightIdentity> identities;

  std::size_t node_count() const { return leaves.size() + steps.size(); }
  bool is_leaf(std::size_t id) const { return id < leaves.size(); }
  const RCFact& node(std::size_t id) const {
    if (id < leaves.size()) return leaves[id];
    return steps.at(id - leaves.size()).fact;
  }
  const Step& step_of(std::size_t id) const { return steps.at(id - leaves.size()); }

  std::size_t add_leaf(RCFact f) {
    if (!steps.empty()) throw Error("leaves must be added before steps");
    leaves.push_back(std::move(f));
    return leaves.size() - 1;
  }

  std::size_t add_doubling(DoublingFact d) {
    doubling.push_back(std::move(d));
    return doubling.size() - 1;
  }

  /// Recomputes the fact a step would produce.
  RCFact compute(RuleTag tag, const std::vector<std::size_t>& parents, const StepParams& p) const;

  /// Applies a rule and appends the resulting step; returns its node id.
  std::size_t apply(RuleTag tag, std::vector<std::size_t> parents, StepParams params = {}) {
    for (auto id : parents)
      if (id >= node_count()) throw Error("step refers to unknown node " + std::to_string(id));
    RCFact f = compute(tag, parents, params);
    if ((tag == RuleTag::FACTOR_ONLYIF || tag == RuleTag::JONES) && params.part == 0)
      identities.push_back(factorization(tag, parents, params).identity);
    steps.push_back({tag, std::move(parents), std::move(params), std::move(f)});
    return node_count() - 1;
  }

  /// Replaces goal `goal_index` by its two halves at `mid`.
  std::pair<std::size_t, std::size_t> split_goal(std::size_t goal_index, const Exponent& mid) {
    std::size_t g = goals.at(goal_index);
    StepParams left, right;
    left.point = right.point = mid;
    right.part = 1;
    std::size_t a = apply(RuleTag::SPLIT, {g}, left);
    std::size_t b = apply(RuleTag::SPLIT, {g}, right);
    goals.erase(goals.begin() + static_cast<std::ptrdiff_t>(goal_index));
    goals.insert(goals.begin() + static_cast<std::ptrdiff_t>(goal_index), {a, b});
    return {a, b};
  }

  int depth_of(std::size_t id) const {
    if (is_leaf(id)) return 0;
    int d = 0;
    for (auto p : step_of(id).parents) d = std::max(d, depth_of(p));
    return d + 1;
  }

  int depth() const {
    int d = 0;
    for (auto g : goals) d = std::max(d, depth_of(g));
    return d;
  }

  /// Post-order rule tags of the sub-DAG under `id`, each node once.
  std::vector<RuleTag> tag_sequence(std::size_t id) const {
    std::vector<RuleTag> out;
    std::set<std::size_t> seen;
    std::function<void(std::size_t)> walk = [&](std::size_t n) {
      if (is_leaf(n) || !seen.insert(n).second) return;
      for (auto p : step_of(n).parents) walk(p);
      out.push_back(step_of(n).tag);
    };
    walk(id);
    return out;
  }

  /// Existential exponent symbols appearing anywhere, by label.
  std::map<std::string, SymbolPtr> symbols() const {
    std::map<std::string, SymbolPtr> out;
    auto note = [&](const Exponent& e) {
      if (e.is_symbolic()) out.emplace(e.symbol()->label, e.symbol());
    };
    for (std::size_t i = 0; i < node_count(); ++i) {
      note(node(i).pair.lo());
      note(node(i).pair.hi());
    }
    for (const auto& s : steps) {
      if (s.params.point) note(*s.params.point);
      if (s.params.target) {
        note(s.params.target->lo());
        note(s.params.target->hi());
      }
    }
    return out;
  }

  /// Existential constants appearing anywhere, by label, with their notes.
  std::map<std::string, std::string> existential_constants() const {
    std::map<std::string, std::string> out;
    for (std::size_t i = 0; i < node_count(); ++i)
      for (const auto& [atom, k] : node(i).constant.factors())
        if (atom.kind == ConstAtom::Kind::Existential) out.emplace(atom.label, atom.note);
    return out;
  }

 private:
  Factorization factorization(RuleTag tag, const std::vector<std::size_t>& parents, const StepParams& p) const {
    if (parents.size() != 1 || p.atoms.size() != 2)
      throw Error(std::string(tag_name(tag)) + " takes one parent and two new weight names");
    if (tag == RuleTag::FACTOR_ONLYIF) return apply_factor_onlyif(node(parents[0]), p.atoms[0], p.atoms[1], p.fresh);
    return apply_jones(node(parents[0]), p.atoms[0], p.atoms[1], p.fresh);
  }
};

inline RCFact Derivation::compute(RuleTag tag, const std::vector<std::size_t>& parents, const StepParams& p) const {
  auto arity = [&](std::size_t n) {
    if (parents.size() != n)
      throw Error(std::string(tag_name(tag)) + " takes " + std::to_string(n) + " parent(s)");
  };
  auto need = [&](const auto& opt, const char* what) -> const auto& {
    if (!opt) throw Error(std::string(tag_name(tag)) + " needs parameter " + what);
    return *opt;
  };
  switch (tag) {
    case RuleTag::SHRINK:
      arity(1);
      return apply_shrink(node(parents[0]), need(p.target, "target"));
    case RuleTag::SPLIT: {
      arity(1);
      auto halves = apply_split(node(parents[0]), need(p.point, "point"));
      return p.part == 0 ? halves.first : halves.second;
    }
    case RuleTag::CONCAT:
      arity(2);
      return apply_concat(node(parents[0]), node(parents[1]));
    case RuleTag::SCALE:
      arity(1);
      return apply_scale(node(parents[0]), need(p.theta, "theta"));
    case RuleTag::WEAK_PROMOTE: {
      arity(1);
      std::size_t k = need(p.doubling, "doubling");
      if (k >= doubling.size()) throw Error("WEAK_PROMOTE refers to unknown doubling fact");
      return apply_weak_promote(node(parents[0]), doubling[k]);
    }
    case RuleTag::WEAK_EXTEND:
      arity(1);
      return apply_weak_extend(node(parents[0]), need(p.point, "point"), p.fresh.constant);
    case RuleTag::SELF_IMPROVE_RH:
    case RuleTag::SELF_IMPROVE_LEFT:
    case RuleTag::SELF_IMPROVE_RHS_TO_AQ:
    case RuleTag::SELF_IMPROVE_AINF:
    case RuleTag::SELF_IMPROVE_WEAK_RH:
    case RuleTag::CROSS_ZERO: {
      arity(1);
      SelfImprove v = need(p.variant, "variant");
      if (variant_tag(v) != tag) throw Error("variant " + std::string(variant_name(v)) + " does not match rule");
      return apply_self_improve(node(parents[0]), v, p.fresh, p.witness);
    }
    case RuleTag::INTERPOLATE:
      arity(2);
      return apply_interpolate(node(parents[0]), node(parents[1]), need(p.theta, "theta"));
    case RuleTag::FACTOR_IF:
      arity(2);
      return apply_factor_if(node(parents[0]), node(parents[1]));
    case RuleTag::FACTOR_ONLYIF:
    case RuleTag::JONES: {
      auto f = factorization(tag, parents, p);
      return p.part == 0 ? f.first : f.second;
    }
  }
  throw Error("unknown rule");
}

/// Recomputes every step from its parents and parameters. Returns the first
/// mismatch as a message, or nothing when the derivation checks.
inline std::optional<std::string> replay(const Derivation& d) {
  Derivation fresh;
  fresh.leaves = d.leaves;
  fresh.doubling = d.doubling;
  for (std::size_t i = 0; i < d.steps.size(); ++i) {
    const Step& s = d.steps[i];
    try {
      fresh.apply(s.tag, s.parents, s.params);
    } catch (const Error& e) {
      return "step " + std::to_string(d.leaves.size() + i) + " (" + tag_name(s.tag) + "): " + e.what();
    }
    const RCFact& got = fresh.steps.back().fact;
    if (!got.same_as(s.fact) || got.str() != s.fact.str())
      return "step " + std::to_string(d.leaves.size() + i) + " recomputes to " + got.str() + ", recorded " +
             s.fact.str();
  }
  for (auto g : d.goals)
    if (g >= d.node_count()) return "goal refers to unknown node " + std::to_string(g);
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// JSON.

namespace detail {

using nlohmann::json;

inline json const_to_json(const ConstExpr& c) {
  json arr = json::array();
  for (const auto& [atom, k] : c.factors()) {
    json a = {{"label", atom.label}, {"power", format_fraction(k)},
              {"kind", atom.kind == ConstAtom::Kind::Named ? "named" : "existential"}};
    if (atom.kind == ConstAtom::Kind::Existential) a["note"] = atom.note;
    arr.push_back(std::move(a));
  }
  return arr;
}

inline ConstExpr const_from_json(const json& arr) {
  ConstExpr c = ConstExpr::one();
  for (const auto& a : arr) {
    ConstExpr atom = a.at("kind").get<std::string>() == "named"
                         ? ConstExpr::named(a.at("label").get<std::string>())
                         : ConstExpr::existential(a.at("label").get<std::string>(), a.value("note", ""));
    c = c * atom.pow(parse_rational(a.at("power").get<std::string>()));
  }
  return c;
}

inline Exponent exponent_from_text(const std::string& text, const std::map<std::string, SymbolPtr>& symbols) {
  try {
    return parse_exponent(text);
  } catch (const ParseError&) {
  }
  std::string coef = "1", label = text;
  if (auto star = text.rfind('*'); star != std::string::npos) {
    coef = text.substr(0, star);
    label = text.substr(star + 1);
  } else if (!text.empty() && text[0] == '-') {
    coef = "-1";
    label = text.substr(1);
  }
  auto it = symbols.find(label);
  if (it == symbols.end()) throw ParseError("unknown exponent symbol '" + label + "'");
  return Exponent::symbolic(parse_rational(coef), it->second);
}

inline json fact_to_json(const RCFact& f) {
  return {{"text", f.str()},
          {"subject", f.subject.str()},
          {"lo", f.pair.lo().str()},
          {"hi", f.pair.hi().str()},
          {"strength", strength_name(f.strength)},
          {"constant", const_to_json(f.constant)}};
}

inline RCFact fact_from_json(const json& j, const std::map<std::string, SymbolPtr>& symbols) {
  return {parse_weight(j.at("subject").get<std::string>()),
          {exponent_from_text(j.at("lo").get<std::string>(), symbols),
           exponent_from_text(j.at("hi").get<std::string>(), symbols)},
          const_from_json(j.at("constant")),
          j.at("strength").get<std::string>() == "weak" ? Strength::Weak : Strength::Strong};
}

}  // namespace detail

inline constexpr const char* kDerivationSchema = "rcalc.derivation/1";

inline nlohmann::json to_json(const Derivation& d) {
  using nlohmann::json;
  using detail::fact_to_json;
  json j;
  j["schema"] = kDerivationSchema;
  json syms = json::array();
  for (const auto& [label, s] : d.symbols())
    syms.push_back({{"label", label}, {"lo", s->lo.str()}, {"hi", s->hi.str()}, {"meaning", s->meaning}});
  j["symbols"] = syms;
  json leaves = json::array();
  for (std::size_t i = 0; i < d.leaves.size(); ++i)
    leaves.push_back({{"id", i}, {"fact", fact_to_json(d.leaves[i])}});
  j["leaves"] = leaves;
  json dbl = json::array();
  for (const auto& x : d.doubling)
    dbl.push_back({{"subject", x.subject.str()},
                   {"exponent", format_fraction(x.exponent)},
                   {"constant", detail::const_to_json(x.constant)},
                   {"text", x.str()}});
  j["doubling"] = dbl;
  json steps = json::array();
  for (std::size_t i = 0; i < d.steps.size(); ++i) {
    const Step& s = d.steps[i];
    json p = json::object();
    if (s.params.theta) p["theta"] = format_fraction(*s.params.theta);
    if (s.params.target) p["target"] = {s.params.target->lo().str(), s.params.target->hi().str()};
    if (s.params.point) p["point"] = s.params.point->str();
    if (s.params.variant) p["variant"] = variant_name(*s.params.variant);
    if (s.params.witness)
      p["witness"] = {{"value", format_fraction(s.params.witness->value)}, {"constant", s.params.witness->constant}};
    if (s.params.doubling) p["doubling"] = *s.params.doubling;
    if (!s.params.fresh.exponent.empty()) p["fresh_exponent"] = s.params.fresh.exponent;
    if (!s.params.fresh.constant.empty()) p["fresh_constant"] = s.params.fresh.constant;
    if (!s.params.fresh.constant2.empty()) p["fresh_constant2"] = s.params.fresh.constant2;
    if (!s.params.atoms.empty()) p["atoms"] = s.params.atoms;
    if (s.params.part != 0) p["part"] = s.params.part;
    steps.push_back({{"id", d.leaves.size() + i},
                     {"rule", tag_name(s.tag)},
                     {"parents", s.parents},
                     {"params", p},
                     {"fact", fact_to_json(s.fact)}});
  }
  j["steps"] = steps;
  json ids = json::array();
  for (const auto& x : d.identities) ids.push_back({{"lhs", x.lhs.str()}, {"rhs", x.rhs.str()}, {"rule", x.rule}});
  j["identities"] = ids;
  j["goals"] = d.goals;
  j["depth"] = d.depth();
  return j;
}

/// One line per node, "[id] RULE(parents; params): fact", then identities,
/// symbol and constant glossaries and the goals. Rendered from the JSON form
/// so that the two never disagree.
inline std::string render_trace(const nlohmann::json& j) {
  auto exact = [](const nlohmann::json& v) { return format_exact(parse_rational(v.get<std::string>())); };
  std::map<std::string, std::string> notes;
  auto collect = [&](const nlohmann::json& fact) {
    for (const auto& a : fact.at("constant"))
      if (a.at("kind") == "existential") notes.emplace(a.at("label").get<std::string>(), a.value("note", ""));
  };
  std::string out;
  for (const auto& l : j.at("leaves")) {
    out += "[" + std::to_string(l.at("id").get<std::size_t>()) + "] ASSUME: " + l.at("fact").at("text").get<std::string>() + "\n";
    collect(l.at("fact"));
  }
  for (const auto& s : j.at("steps")) {
    const auto& p = s.at("params");
    out += "[" + std::to_string(s.at("id").get<std::size_t>()) + "] " + s.at("rule").get<std::string>() + "(";
    bool first = true;
    for (const auto& par : s.at("parents")) {
      out += (first ? "" : ",") + std::to_string(par.get<std::size_t>());
      first = false;
    }
    if (p.contains("theta")) out += "; theta=" + exact(p["theta"]);
    if (p.contains("point")) out += "; at " + p["point"].get<std::string>();
    if (p.contains("doubling")) out += "; " + j.at("doubling").at(p["doubling"].get<std::size_t>()).at("text").get<std::string>();
    if (p.contains("witness")) out += "; witness " + exact(p["witness"]["value"]);
    out += "): " + s.at("fact").at("text").get<std::string>() + "\n";
    collect(s.at("fact"));
  }
  for (const auto& id : j.at("identities"))
    out += "identity " + id.at("lhs").get<std::string>() + " = " + id.at("rhs").get<std::string>() + "\n";
  for (const auto& sym : j.at("symbols"))
    out += "where " + sym.at("label").get<std::string>() + " in (" + sym.at("lo").get<std::string>() + ", " +
           sym.at("hi").get<std::string>() + "): " + sym.at("meaning").get<std::string>() + "\n";
  for (const auto& [label, note] : notes) out += "where " + label + ": " + note + "\n";
  out += "goal";
  for (const auto& g : j.at("goals")) out += " [" + std::to_string(g.get<std::size_t>()) + "]";
  out += "\n";
  return out;
}

inline std::string render_trace(const Derivation& d) { return render_trace(to_json(d)); }

/// Rebuilds a derivation from JSON by replaying it. Throws on any mismatch
/// between the recorded and the recomputed facts.
inline Derivation from_json(const nlohmann::json& j) {
  if (j.value("schema", "") != kDerivationSchema) throw ParseError("not a " + std::string(kDerivationSchema) + " document");
  std::map<std::string, SymbolPtr> symbols;
  for (const auto& s : j.at("symbols"))
    symbols.emplace(s.at("label").get<std::string>(),
                    make_symbol(s.at("label").get<std::string>(), parse_exponent(s.at("lo").get<std::string>()),
                                parse_exponent(s.at("hi").get<std::string>()), s.value("meaning", "")));
  Derivation d;
  for (const auto& l : j.at("leaves")) d.add_leaf(detail::fact_from_json(l.at("fact"), symbols));
  for (const auto& x : j.at("doubling"))
    d.add_doubling({parse_weight(x.at("subject").get<std::string>()), parse_rational(x.at("exponent").get<std::string>()),
                    detail::const_from_json(x.at("constant"))});
  for (const auto& s : j.at("steps")) {
    auto tag = parse_tag(s.at("rule").get<std::string>());
    if (!tag) throw ParseError("unknown rule '" + s.at("rule").get<std::string>() + "'");
    const auto& pj = s.at("params");
    StepParams p;
    if (pj.contains("theta")) p.theta = parse_rational(pj["theta"].get<std::string>());
    if (pj.contains("target"))
      p.target = ExponentPair(detail::exponent_from_text(pj["target"][0].get<std::string>(), symbols),
                              detail::exponent_from_text(pj["target"][1].get<std::string>(), symbols));
    if (pj.contains("point")) p.point = detail::exponent_from_text(pj["point"].get<std::string>(), symbols);
    if (pj.contains("variant")) {
      p.variant = parse_variant(pj["variant"].get<std::string>());
      if (!p.variant) throw ParseError("unknown variant");
    }
    if (pj.contains("witness"))
      p.witness = Witness{parse_rational(pj["witness"]["value"].get<std::string>()),
                          pj["witness"]["constant"].get<std::string>()};
    if (pj.contains("doubling")) p.doubling = pj["doubling"].get<std::size_t>();
    p.fresh.exponent = pj.value("fresh_exponent", "");
    p.fresh.constant = pj.value("fresh_constant", "");
    p.fresh.constant2 = pj.value("fresh_constant2", "");
    if (pj.contains("atoms")) p.atoms = pj["atoms"].get<std::vector<std::string>>();
    p.part = pj.value("part", 0);
    std::size_t id = d.apply(*tag, s.at("parents").get<std::vector<std::size_t>>(), p);
    std::string recorded = s.at("fact").at("text").get<std::string>();
    if (d.node(id).str() != recorded)
      throw ParseError("step " + std::to_string(id) + " recomputes to '" + d.node(id).str() + "', recorded '" +
                       recorded + "'");
  }
  d.goals = j.at("goals").get<std::vector<std::size_t>>();
  for (auto g : d.goals)
    if (g >= d.node_count()) throw ParseError("goal refers to unknown node");
  return d;
}

}  // namespace rcalc
