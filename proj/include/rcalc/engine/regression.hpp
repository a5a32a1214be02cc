#pragma once

#include "rcalc/engine/search.hpp"

#include <functional>
#include <string>
#include <vector>

namespace rcalc {

/// One worked corollary: what the engine produced against what is expected.
struct RegressionCase {
  std::string name;
  std::string expected;
  std::string got;
  bool pass = false;
  std::optional<Derivation> derivation;
};

namespace detail {

/// Rendering used to compare conclusions: claim plus the constant, with
/// existential constants anonymized. Expectations without a constant
/// (statements that assert membership only) compare the claim alone.
inline std::string conclusion(const RCFact& f) { return f.claim() + " constant " + f.constant.shape(); }

inline bool agrees(const std::string& got, const std::string& expected) {
  if (expected.find(" constant ") != std::string::npos) return got == expected;
  return got.substr(0, got.find(" constant ")) == expected;
}

inline RegressionCase derive_case(std::string name, const std::string& facts, std::string expected,
                                  const SearchOptions& opts = {}) {
  RegressionCase c{std::move(name), std::move(expected), {}, false, std::nullopt};
  FactFile ff = parse_fact_text(facts);
  SearchResult r = derive(ff.base, ff.goals.at(0), opts);
  if (!r.derivation) {
    c.got = "no derivation";
    return c;
  }
  const RCFact& f = r.derivation->node(r.derivation->goals.at(0));
  c.got = conclusion(f);
  c.pass = agrees(c.got, c.expected) && !replay(*r.derivation);
  c.derivation = std::move(r.derivation);
  return c;
}

inline RegressionCase built_case(std::string name, std::string expected, const std::function<Derivation()>& build) {
  RegressionCase c{std::move(name), std::move(expected), {}, false, std::nullopt};
  try {
    Derivation d = build();
    c.got.clear();
    for (auto g : d.goals) c.got += (c.got.empty() ? "" : "; ") + conclusion(d.node(g));
    c.pass = c.got == c.expected && !replay(d);
    c.derivation = std::move(d);
  } catch (const Error& e) {
    c.got = std::string("error: ") + e.what();
  }
  return c;
}

inline RCFact assumed(const std::string& subject, const std::string& cls, const std::string& constant) {
  ClassSpec spec = parse_class_spec(cls);
  return {parse_weight(subject), spec.pair, ConstExpr::named(constant), spec.strength};
}

}  // namespace detail

/// Cor 4.4 with p = 3, s = 2, q = 5/2: derivation of w^(-2) in RC(-2/3, inf),
/// with the goal then split into A(5/2) and RH(inf).
inline Derivation cor44_derivation() {
  FactFile ff = parse_fact_text(
      "weight w\n"
      "assume w in A(1) constant C1\n"
      "assume w in RH(2) constant C2\n"
      "goal w^(-2) in RC(-2/3,inf)\n");
  SearchResult r = derive(ff.base, ff.goals.at(0));
  if (!r.derivation) throw Error("Cor 4.4 chain not found");
  Derivation d = std::move(*r.derivation);
  d.split_goal(0, Exponent(1));
  return d;
}

/// The worked corollaries with concrete indices and symbolic constants.
inline std::vector<RegressionCase> run_regression_suite() {
  using detail::assumed;
  using detail::built_case;
  using detail::derive_case;
  std::vector<RegressionCase> out;

  // p = 3, p' = 3/2: 1 - p' = -1/2 and [w^(1-p')]_{A_p'} = [w]_{A_p}^(p'-1).
  out.push_back(derive_case("4.2 forward", "weight w\nassume w in A(3) constant C\ngoal w^(-1/2) in A(1.5)\n",
                            "w^(-1/2) in A(1.5) constant C^(1/2)"));
  out.push_back(derive_case("4.2 converse", "weight w\nassume w^(-1/2) in A(1.5) constant K\ngoal w in A(3)\n",
                            "w in A(3) constant K^2"));

  // p = 3: w in A(1) gives w^(-2) in A(3) and RH(inf), both with C^2.
  out.push_back(derive_case("4.3 forward A(p)", "weight w\nassume w in A(1) constant C\ngoal w^(-2) in A(3)\n",
                            "w^(-2) in A(3) constant C^2"));
  out.push_back(derive_case("4.3 forward RH(inf)", "weight w\nassume w in A(1) constant C\ngoal w^(-2) in RH(inf)\n",
                            "w^(-2) in RH(inf) constant C^2"));
  out.push_back(derive_case("4.3 converse",
                            "weight w\nassume w^(-2) in A(3) constant C1\nassume w^(-2) in RH(inf) constant C2\n"
                            "goal w in A(1)\n",
                            "w in A(1) constant C1^(1/2)*C2^(1/2)"));

  // p = 3, s = 2, q = 5/2 > (p-1)/s + 1 = 2.
  out.push_back(derive_case("4.4",
                            "weight w\nassume w in A(1) constant C1\nassume w in RH(2) constant C2\n"
                            "goal w^(-2) in RC(-2/3,inf)\n",
                            "w^(-2) in RC(-2/3,inf) constant C1^2*C2^2"));
  out.push_back(built_case("4.4 split", "w^(-2) in A(2.5) constant C1^2*C2^2; w^(-2) in RH(inf) constant C1^2*C2^2",
                           cor44_derivation));

  // p = 3, p' = 3/2.
  out.push_back(derive_case("4.5 forward",
                            "weight w\nassume w in A(3) constant C1\nassume w in RH(inf) constant C2\n"
                            "goal w^(-1/2) in A(1)\n",
                            "w^(-1/2) in A(1) constant C1^(1/2)*C2^(1/2)"));
  out.push_back(derive_case("4.5 converse A(p)", "weight w\nassume w^(-1/2) in A(1) constant K\ngoal w in A(3)\n",
                            "w in A(3) constant K^2"));
  out.push_back(derive_case("4.5 converse RH(inf)", "weight w\nassume w^(-1/2) in A(1) constant K\ngoal w in RH(inf)\n",
                            "w in RH(inf) constant K^2"));

  // (p, s) = (2, 2): q = s(p-1) + 1 = 3.
  out.push_back(derive_case("4.6 forward",
                            "weight w\nassume w in A(2) constant C1\nassume w in RH(2) constant C2\ngoal w^2 in A(3)\n",
                            "w^2 in A(3) constant C1^2*C2^2"));
  out.push_back(derive_case("4.6 converse A(p)", "weight w\nassume w^2 in A(3) constant K\ngoal w in A(2)\n",
                            "w in A(2) constant K^(1/2)"));
  out.push_back(derive_case("4.6 converse RH(s)", "weight w\nassume w^2 in A(3) constant K\ngoal w in RH(2)\n",
                            "w in RH(2) constant K^(1/2)"));

  // RH(2) self-improves to (1/(1-q), 2); scaling by s = 2 lands right of 0.
  out.push_back(derive_case("5.3", "weight w\nassume w in RH(2) constant C\ngoal w^2 in A(inf)\n",
                            "w^2 in A(inf)"));

  // RH(2) -> (rho, 2) -> w^2 in (rho/2, 1) -> (rho/2, sigma) -> w in (rho, 2 sigma) -> (0, 2 sigma).
  out.push_back(built_case("5.4", "w in RC(0,2*t2) constant C*?1*?2^(1/2)", [] {
    Derivation d;
    std::size_t rh = d.add_leaf(assumed("w", "RH(2)", "C"));
    StepParams aq;
    aq.variant = SelfImprove::RH_TO_AQ;
    aq.fresh = {"t1", "E1", {}};
    std::size_t a = d.apply(RuleTag::SELF_IMPROVE_RHS_TO_AQ, {rh}, aq);
    StepParams up;
    up.theta = Rational(2);
    std::size_t b = d.apply(RuleTag::SCALE, {a}, up);
    StepParams right;
    right.variant = SelfImprove::RH_RIGHT;
    right.fresh = {"t2", "E2", {}};
    std::size_t c = d.apply(RuleTag::SELF_IMPROVE_RH, {b}, right);
    StepParams down;
    down.theta = Rational(1, 2);
    std::size_t e = d.apply(RuleTag::SCALE, {c}, down);
    StepParams cut;
    cut.target = ExponentPair(Exponent(0), d.node(e).pair.hi());
    d.goals = {d.apply(RuleTag::SHRINK, {e}, cut)};
    return d;
  }));

  // A(inf) -> A(r) with the witness r = 3, then epsilon = 1/(r-1) = 1/2.
  {
    SearchOptions opts;
    opts.witnesses[SelfImprove::AINF_TO_AR] = Witness{Rational(3), "Er"};
    out.push_back(derive_case("5.5 (witness r=3)", "weight w\nassume w in A(inf) constant C\ngoal w^(1/2) in A(2)\n",
                              "w^(1/2) in A(2) constant Er^(1/2)", opts));
  }

  // p1 = 2, p2 = 3, theta = 1/2: p3 = 5/2.
  out.push_back(built_case("7.2", "w1^(1/2)*w2^(1/2) in A(2.5) constant C1^(1/2)*C2^(1/2)", [] {
    Derivation d;
    std::size_t a = d.add_leaf(assumed("w1", "A(2)", "C1"));
    std::size_t b = d.add_leaf(assumed("w2", "A(3)", "C2"));
    StepParams p;
    p.theta = Rational(1, 2);
    d.goals = {d.apply(RuleTag::INTERPOLATE, {a, b}, p)};
    return d;
  }));

  // Only if: w in RC(-1,2) is v * (u^(-1))^(-1) with v in RC(-inf,2), u^(-1) in RC(-inf,1).
  out.push_back(built_case("8.3 only if", "v in RC(-inf,2) constant ?1; u^(-1) in A(1) constant ?1", [] {
    Derivation d;
    std::size_t w = d.add_leaf(assumed("w", "RC(-1,2)", "C"));
    StepParams f;
    f.atoms = {"u", "v"};
    f.fresh = {"", "E1", "E2"};
    std::size_t u = d.apply(RuleTag::FACTOR_ONLYIF, {w}, f);
    f.part = 1;
    std::size_t v = d.apply(RuleTag::FACTOR_ONLYIF, {w}, f);
    StepParams flip;
    flip.theta = Rational(-1);
    d.goals = {v, d.apply(RuleTag::SCALE, {u}, flip)};
    return d;
  }));
  // If: w1 in RC(-inf,2), w2 in RC(-inf,1) give w1 w2^(-1) in RC(-1,2).
  out.push_back(derive_case("8.3 if",
                            "weight w1\nweight w2\nassume w1 in RC(-inf,2) constant C1\n"
                            "assume w2 in RC(-inf,1) constant C2\ngoal w1*w2^(-1) in RC(-1,2)\n",
                            "w1*w2^(-1) in RC(-1,2) constant C1*C2"));

  // Weak Harnack chain with p0 = 1/2.
  out.push_back(derive_case("Harnack",
                            "weight u\n"
                            "assume u in RCweak(1/2,inf) constant C1\n"
                            "assume u in RCweak(-inf,-1/2) constant C2\n"
                            "assume u^(1/2) in A(2) constant C3\n"
                            "doubling u^(1/2) constant D1\n"
                            "doubling u^(-1/2) constant D2\n"
                            "goal u in Harnack\n",
                            "u in Harnack constant C1*C2*C3^2*D1'*D2'"));
  return out;
}

}  // namespace rcalc
