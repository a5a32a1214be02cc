#pragma once

#include "rcalc/diagram/diagram.hpp"
#include "rcalc/engine/classify.hpp"
#include "rcalc/engine/regression.hpp"
#include "rcalc/numlab/config.hpp"
#include "rcalc/numlab/experiment.hpp"

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace rcalc::cli {

/// Exit codes: 0 success, 1 input error, 2 search exhausted.
inline constexpr int kOk = 0;
inline constexpr int kInputError = 1;
inline constexpr int kExhausted = 2;

namespace detail {

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
  if (!out) throw Error("failed writing '" + path + "'");
}

/// Writes to `path`, or to `out` when path is "-".
inline void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path == "-")
    out << text;
  else
    write_file(path, text);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string goal_text(const Goal& g) { return g.subject.str() + " in " + class_token(g.pair, g.strength); }

/// "diagram.svg" -> "diagram-3.svg".
inline std::string numbered(const std::string& path, std::size_t k) {
  std::string stem = path, ext;
  if (auto dot = path.rfind('.'); dot != std::string::npos && path.find('/', dot) == std::string::npos) {
    stem = path.substr(0, dot);
    ext = path.substr(dot);
  }
  return stem + "-" + std::to_string(k) + ext;
}

inline void write_panels(const std::vector<diagram::Layout>& panels, const std::string& path, bool separate) {
  if (!separate) {
    write_file(path, diagram::render_stack(panels));
    return;
  }
  for (std::size_t k = 0; k < panels.size(); ++k) write_file(numbered(path, k + 1), diagram::render(panels[k]));
}

}  // namespace detail

struct DeriveArgs {
  std::string file;
  std::string goal;        // overrides the file's goals when set
  std::size_t goal_index = 0;
  int budget = 8;
  std::vector<std::string> theta_extra;
  std::vector<std::string> witnesses;  // VARIANT=value:label
  bool no_self_improve = false;
  std::string json;     // path or "-"
  bool trace = false;
  std::string diagram;  // svg path
  bool separate = false;
};

inline SearchOptions search_options(const DeriveArgs& a) {
  SearchOptions o;
  if (a.budget < 0) throw Error("budget must be non-negative");
  o.budget = a.budget;
  o.self_improve = !a.no_self_improve;
  for (const auto& t : a.theta_extra) {
    Rational q = parse_rational(t);
    if (q == 0) throw Error("theta 0 is not allowed");
    o.extra_thetas.push_back(q);
  }
  for (const auto& w : a.witnesses) {
    auto eq = w.find('='), colon = w.find(':');
    if (eq == std::string::npos || colon == std::string::npos || colon < eq)
      throw Error("witness '" + w + "' must look like VARIANT=value:label");
    auto v = parse_variant(w.substr(0, eq));
    if (!v) throw Error("unknown self-improvement variant '" + w.substr(0, eq) + "'");
    o.witnesses[*v] = Witness{parse_rational(w.substr(eq + 1, colon - eq - 1)), w.substr(colon + 1)};
  }
  return o;
}

/// Trace to stdout unless only JSON to stdout was requested.
inline int cmd_derive(const DeriveArgs& a, std::ostream& out, std::ostream& err) {
  FactFile ff = load_fact_file(a.file);
  if (a.goal.empty() && ff.goals.empty()) throw Error("no goal: give --goal or a 'goal' line in " + a.file);
  if (a.goal.empty() && a.goal_index >= ff.goals.size()) throw Error("goal index out of range");
  const Goal goal = a.goal.empty() ? ff.goals[a.goal_index] : parse_goal_text(ff.base, a.goal);
  SearchResult r = derive(ff.base, goal, search_options(a));
  if (!r.derivation) {
    err << "no derivation of " << detail::goal_text(goal) << " within budget " << a.budget << " (" << r.stats.facts
        << " facts, " << r.stats.levels << " levels" << (r.stats.capped ? ", capped" : "") << ")\n";
    return kExhausted;
  }
  nlohmann::json j = to_json(*r.derivation);
  if (!a.json.empty()) detail::emit(a.json, j.dump(2) + "\n", out);
  if (a.trace || a.json != "-") out << render_trace(j);
  if (!a.diagram.empty()) detail::write_panels(diagram::derivation_panels(*r.derivation), a.diagram, a.separate);
  return kOk;
}

struct ClassifyArgs {
  std::string file;
  std::string subject;
  int budget = 8;
  bool verbose = false;
};

inline int cmd_classify(const ClassifyArgs& a, std::ostream& out) {
  FactFile ff = load_fact_file(a.file);
  std::string subject = a.subject;
  if (subject.empty()) {
    if (ff.base.weights().size() != 1) throw Error("several weights declared: give --subject");
    subject = ff.base.weights().front();
  }
  WeightExpr w = parse_declared_weight(ff.base, subject, 0);
  SearchOptions o;
  o.budget = a.budget;
  Classification c = classify_log(ff.base, w, o);
  out << c.str() << "\n";
  if (a.verbose)
    for (const auto& line : c.witnesses) out << "  " << line << "\n";
  return kOk;
}

struct EstimateArgs {
  std::string config;
  std::size_t resolution = 0;  // 0 keeps the config value
  std::string method;          // empty keeps the config value
  std::string out = "-";
};

inline int cmd_estimate(const EstimateArgs& a, std::ostream& out) {
  numlab::EstimateConfig c = numlab::load_estimate_config(a.config);
  if (a.resolution) {
    if (a.resolution < 2) throw Error("resolution must be at least 2");
    c.mean.resolution = a.resolution;
  }
  if (!a.method.empty()) c.mean.method = numlab::parse_method(a.method);
  numlab::EstimateReport rep = numlab::run_estimate(c);
  detail::emit(a.out, rep.to_json().dump(2) + "\n", out);
  if (a.out != "-")
    out << rep.kind << " estimate over " << rep.values.size() << " balls: sup = " << rep.to_json()["sup"].dump()
        << (rep.divergent ? " (divergent)" : "") << ", a lower bound for the family supremum\n";
  return kOk;
}

struct ExperimentArgs {
  std::string name;
  std::size_t resolution = 10000;
  std::string method = "quadrature";
  std::string out;
};

inline int cmd_experiment(const ExperimentArgs& a, std::ostream& out) {
  numlab::ExperimentOptions o;
  if (a.resolution < 2) throw Error("resolution must be at least 2");
  o.resolution = a.resolution;
  o.method = numlab::parse_method(a.method);
  numlab::ExperimentReport rep = numlab::product_experiment(a.name, o);
  for (const auto& c : rep.claims) out << c << "\n";
  out << a.name << ": " << (rep.pass ? "reproduced" : "NOT reproduced") << "\n";
  if (!a.out.empty()) detail::emit(a.out, rep.to_json().dump(2) + "\n", out);
  return kOk;
}

struct RenderArgs {
  std::string input;  // fact file or derivation JSON
  std::string out;
  bool separate = false;
};

inline int cmd_render(const RenderArgs& a) {
  std::string text = detail::read_file(a.input);
  std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    Derivation d;
    try {
      d = from_json(nlohmann::json::parse(text));
    } catch (const nlohmann::json::exception& e) {
      throw Error("derivation '" + a.input + "': " + e.what());
    }
    detail::write_panels(diagram::derivation_panels(d), a.out, a.separate);
    return kOk;
  }
  FactFile ff = parse_fact_text(text);
  std::vector<RCFact> facts;
  for (const auto& e : ff.base.entries()) facts.push_back(e.fact);
  detail::write_file(a.out, diagram::render(diagram::fact_layout(facts)));
  return kOk;
}

/// Corollary regression suite plus numeric and replay spot checks.
inline int cmd_selftest(std::ostream& out) {
  bool ok = true;
  auto report = [&](bool pass, const std::string& what) {
    out << (pass ? "PASS " : "FAIL ") << what << "\n";
    ok = ok && pass;
  };
  for (const auto& c : run_regression_suite()) {
    report(c.pass, "corollary " + c.name + ": " + c.got);
    if (c.derivation) {
      bool round = render_trace(from_json(to_json(*c.derivation))) == render_trace(*c.derivation);
      report(round, "replay " + c.name);
    }
  }
  using namespace numlab;
  Weight x = Weight::power(1);
  Ball B{1, 1};
  report(std::abs(p_mean(x, B, 1.0) - 1) < 1e-9, "1-mean of x on (0,2) = 1");
  report(std::abs(p_mean(x, B, 2.0) - std::sqrt(4.0 / 3)) < 1e-9, "2-mean of x on (0,2) = sqrt(4/3)");
  report(std::abs(p_mean(x, B, 0.0) - 2 / std::exp(1.0)) < 1e-9, "0-mean of x on (0,2) = 2/e");
  Ball C{0, 0.25};
  report(std::abs(reversal_ratio(x, C, -0.5, 1) - 2) < 1e-9, "|x| A(3) ratio on a centred ball = 2");
  report(std::isinf(reversal_ratio(Weight::power(4), C, -0.25, 1)), "|x|^4 A(5) ratio diverges");
  bool holder = true;
  for (double a : {-0.5, 0.5, 2.0})
    for (double p : {-2.0, -0.5, 0.0, 0.5, 1.0, 3.0}) {
      Weight w = Weight::power(a, 0.1);
      holder = holder && p_mean(w, C, p) <= p_mean(w, C, p + 0.5) * (1 + 1e-10);
    }
  report(holder, "Hoelder monotonicity spot check");
  out << (ok ? "selftest: all passed" : "selftest: FAILURES") << "\n";
  return ok ? kOk : kInputError;
}

}  // namespace rcalc::cli
