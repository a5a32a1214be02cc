#include "helpers.hpp"

#include "rcalc/engine/classify.hpp"
#include "rcalc/engine/regression.hpp"

#include <gtest/gtest.h>

namespace rcalc {
namespace {

using test::pair;

struct Derived {
  SearchResult result;
  const Derivation& d() const { return *result.derivation; }
  const RCFact& goal() const { return d().node(d().goals.at(0)); }
};

Derived run(const std::string& text, const SearchOptions& opts = {}) {
  FactFile ff = parse_fact_text(text);
  return {derive(ff.base, ff.goals.at(0), opts)};
}

std::vector<std::string> tags(const Derivation& d) {
  std::vector<std::string> out;
  for (const auto& s : d.steps) out.push_back(tag_name(s.tag));
  return out;
}

TEST(Regression, EveryCorollaryReproduces) {
  auto cases = run_regression_suite();
  EXPECT_GE(cases.size(), 20u);
  for (const auto& c : cases) EXPECT_TRUE(c.pass) << c.name << ": got " << c.got << ", expected " << c.expected;
}

TEST(Derive, ConjugateIsOneScaleStep) {
  Derived r = run("weight w\nassume w in A(3) constant C\ngoal w^(-1/2) in A(1.5)\n");
  ASSERT_TRUE(r.result.derivation);
  EXPECT_EQ(r.d().depth(), 1);
  EXPECT_EQ(tags(r.d()), std::vector<std::string>{"SCALE"});
  EXPECT_EQ(r.goal().constant.str(), "C^(1/2)");
}

TEST(Derive, A1AndRhChain) {
  Derived r = run(test::slurp(RCALC_DATA_DIR "/cor44.facts"));
  ASSERT_TRUE(r.result.derivation);
  EXPECT_EQ(tags(r.d()), (std::vector<std::string>{"CONCAT", "SCALE", "SHRINK"}));
  // (C1 C2)^(p-1) with p = 3.
  EXPECT_EQ(r.goal().constant, (ConstExpr::named("C1") * ConstExpr::named("C2")).pow(2));
}

TEST(Derive, HarnackChainFromWeakFacts) {
  Derived r = run(test::slurp(RCALC_DATA_DIR "/harnack.facts"));
  ASSERT_TRUE(r.result.derivation);
  EXPECT_LE(r.d().steps.size(), 6u);
  EXPECT_EQ(r.goal().pair, pair("-inf", "inf"));
  EXPECT_EQ(r.goal().constant.str(), "C1*C2*C3^2*D1'*D2'");
  int promotes = 0, concats = 0;
  for (const auto& s : r.d().steps) {
    promotes += s.tag == RuleTag::WEAK_PROMOTE;
    concats += s.tag == RuleTag::CONCAT;
  }
  EXPECT_EQ(promotes, 2);
  EXPECT_EQ(concats, 2);
}

TEST(Derive, ExhaustionIsAResultNotAnError) {
  Derived r = run(test::slurp(RCALC_DATA_DIR "/unreachable.facts"), SearchOptions{3});
  EXPECT_FALSE(r.result.derivation);
}

TEST(Derive, RoundTripThroughTheConjugate) {
  Derived fwd = run("weight w\nassume w in A(3) constant C\ngoal w^(-1/2) in A(1.5)\n");
  ASSERT_TRUE(fwd.result.derivation);
  FactBase base;
  base.declare_weight("w");
  base.insert(fwd.goal());
  auto back = derive(base, Goal{parse_weight("w"), parse_class("A(3)"), Strength::Strong});
  ASSERT_TRUE(back.derivation);
  const RCFact& g = back.derivation->node(back.derivation->goals.at(0));
  // ([w^(1-p')]_{A_p'})^(p-1) = (C^(1/2))^2 = C.
  EXPECT_EQ(g.constant, ConstExpr::named("C"));
}

TEST(Derive, IsDeterministic) {
  std::string text = test::slurp(RCALC_DATA_DIR "/harnack.facts");
  std::string first = to_json(run(text).d()).dump();
  for (int i = 0; i < 3; ++i) EXPECT_EQ(to_json(run(text).d()).dump(), first);
}

TEST(Derive, JsonMatchesGolden) {
  Derived r = run(test::slurp(RCALC_DATA_DIR "/cor44.facts"));
  ASSERT_TRUE(r.result.derivation);
  EXPECT_EQ(to_json(r.d()).dump(2) + "\n", test::slurp(RCALC_GOLDEN_DIR "/cor44.json"));
}

TEST(Derive, ReplayFromJsonIsExact) {
  Derived r = run(test::slurp(RCALC_DATA_DIR "/harnack.facts"));
  Derivation back = from_json(to_json(r.d()));
  EXPECT_FALSE(replay(back));
  EXPECT_TRUE(back.node(back.goals.at(0)).same_as(r.goal()));
  EXPECT_EQ(render_trace(back), render_trace(r.d()));
}

TEST(Derive, ReplayDetectsTampering) {
  Derived r = run(test::slurp(RCALC_DATA_DIR "/cor44.facts"));
  nlohmann::json j = to_json(r.d());
  j["steps"][0]["fact"]["text"] = "w in RC(-inf,3) constant C1*C2";
  EXPECT_THROW(from_json(j), ParseError);
  Derivation d = r.d();
  d.steps[1].fact.constant = ConstExpr::named("C1");
  EXPECT_TRUE(replay(d));
}

// w in A(inf) and w^r in A(1) give w in A(1).
TEST(Exercises, AinfWithA1PowerIsA1) {
  Derived big = run("weight w\nassume w in A(inf) constant C1\nassume w^2 in A(1) constant C2\ngoal w in A(1)\n");
  ASSERT_TRUE(big.result.derivation);
  EXPECT_EQ(big.goal().constant.str(), "C2^(1/2)");
  Derived small =
      run("weight w\nassume w in A(inf) constant C1\nassume w^(1/2) in A(1) constant C2\ngoal w in A(1)\n");
  ASSERT_TRUE(small.result.derivation);
  EXPECT_EQ(small.goal().constant.str(), "C1*C2^2");
}

// w^s in A(inf) gives w in RH(s) with constant [w^s]^(1/s).
TEST(Exercises, AinfPowerIsReverseHolder) {
  Derived r = run("weight w\nassume w^2 in A(inf) constant C\ngoal w in RH(2)\n");
  ASSERT_TRUE(r.result.derivation);
  EXPECT_EQ(r.goal().constant.str(), "C^(1/2)");
  Derived r3 = run("weight w\nassume w^3 in A(inf) constant C\ngoal w in RH(3)\n");
  ASSERT_TRUE(r3.result.derivation);
  EXPECT_EQ(r3.goal().constant.str(), "C^(1/3)");
}

// Arrows on one side of zero extend across it.
TEST(Exercises, ArrowsCrossZero) {
  Derived neg = run("weight w\nassume w in RC(-3,-1) constant C\ngoal w in RC(-3,0)\n");
  ASSERT_TRUE(neg.result.derivation);
  EXPECT_EQ(neg.d().steps.front().tag, RuleTag::CROSS_ZERO);
  Derived pos = run("weight w\nassume w in RC(1,3) constant C\ngoal w in RC(0,3)\n");
  ASSERT_TRUE(pos.result.derivation);
  EXPECT_FALSE(pos.goal().constant.evaluable());
  SearchOptions off;
  off.self_improve = false;
  EXPECT_FALSE(run("weight w\nassume w in RC(1,3) constant C\ngoal w in RC(0,3)\n", off).result.derivation);
}

// An arrow reaching +inf puts log w in BUO.
TEST(Exercises, BuoCharacterization) {
  FactFile ff = parse_fact_text("weight w\nassume w in RC(0.5,inf) constant C\n");
  EXPECT_EQ(classify_log(ff.base, parse_weight("w")).str(), "BMO BUO");
  FactFile neg = parse_fact_text("weight w\nassume w in RC(-2,-1) constant C\n");
  EXPECT_EQ(classify_log(neg.base, parse_weight("w")).str(), "BMO");
}

TEST(Classify, Examples) {
  auto cls = [](const std::string& c) {
    FactFile ff = parse_fact_text("weight w\nassume w in " + c + " constant C\n");
    return classify_log(ff.base, parse_weight("w")).str();
  };
  EXPECT_EQ(cls("RC(-inf,0.5)"), "BLO BMO");
  EXPECT_EQ(cls("RC(0.5,inf)"), "BMO BUO");
  EXPECT_EQ(cls("RC(-inf,inf)"), "BLO BMO BUO Harnack");
}

TEST(Classify, PowersAreTransportedBack) {
  FactFile ff = parse_fact_text("weight w\nassume w^(-1) in RC(-inf,1) constant C\n");
  // w^(-1) in RC(-inf,1) is w in RC(-1,inf).
  EXPECT_EQ(classify_log(ff.base, parse_weight("w")).str(), "BMO BUO");
}

}  // namespace
}  // namespace rcalc
