#include "helpers.hpp"

#include <gtest/gtest.h>

namespace rcalc {
namespace {

using test::fact;
using test::pair;

TEST(WeightExpr, CanonicalizesProductsAndPowers) {
  EXPECT_EQ(parse_weight("w^1").str(), "w");
  EXPECT_EQ(parse_weight("(w^2)^(1/2)").str(), "w");
  EXPECT_EQ(parse_weight("(w^(1/2))^(-4)"), parse_weight("w^(-2)"));
  EXPECT_EQ(parse_weight("b*a*b").str(), "a*b^2");
  EXPECT_EQ(parse_weight("w*(v*w)"), parse_weight("v*w^2"));
  EXPECT_TRUE(parse_weight("w*w^(-1)").is_unit());
  EXPECT_EQ(parse_weight("w*w^(-1)").str(), "1");
}

TEST(WeightExpr, RejectsMalformedInput) {
  EXPECT_THROW(parse_weight(""), ParseError);
  EXPECT_THROW(parse_weight("w^"), ParseError);
  EXPECT_THROW(parse_weight("(w"), ParseError);
  EXPECT_THROW(parse_weight("w^0"), ParseError);
  EXPECT_THROW(parse_weight("w**v"), ParseError);
}

TEST(WeightExpr, ExponentOverBase) {
  auto t = parse_weight("u^(-1/2)").exponent_over(parse_weight("u"));
  ASSERT_TRUE(t);
  EXPECT_EQ(*t, Rational(-1, 2));
  EXPECT_FALSE(parse_weight("u*v").exponent_over(parse_weight("u")));
}

TEST(ClassToken, ParseExamples) {
  EXPECT_EQ(parse_class("A(3)"), pair("-0.5", "1"));
  EXPECT_EQ(parse_class("RH(4)"), pair("1", "4"));
  EXPECT_EQ(parse_class("RC(-1,1)"), pair("-1", "1"));
  EXPECT_EQ(parse_class("A(1)"), pair("-inf", "1"));
  EXPECT_EQ(parse_class("A(inf)"), pair("0", "1"));
  EXPECT_EQ(parse_class("RH(inf)"), pair("1", "inf"));
  EXPECT_EQ(parse_class("Harnack"), pair("-inf", "inf"));
  EXPECT_EQ(parse_class_spec("RCweak(1,2)").strength, Strength::Weak);
  EXPECT_THROW(parse_class("A(0.5)"), ParseError);
  EXPECT_THROW(parse_class("RH(1)"), ParseError);
  EXPECT_THROW(parse_class("RC(2,1)"), ParseError);
  EXPECT_THROW(parse_class("B(2)"), ParseError);
}

TEST(ClassToken, NameExamples) {
  EXPECT_EQ(name_class(pair("-0.5", "1")), "A(3)");
  EXPECT_EQ(name_class(pair("-inf", "inf")), "Harnack");
  EXPECT_EQ(name_class(pair("-3", "2")), std::nullopt);
  EXPECT_EQ(name_class(pair("-1", "1")), "A(2)");
}

TEST(ClassToken, NamedRoundTrip) {
  for (std::string token : {"A(1)", "A(1.5)", "A(2)", "A(3)", "A(5)", "A(inf)", "A(7/3)", "RH(2)", "RH(inf)",
                            "RH(1.25)", "Harnack"}) {
    auto name = name_class(parse_class(token));
    ASSERT_TRUE(name) << token;
    EXPECT_EQ(*name, token);
    EXPECT_EQ(parse_class(*name), parse_class(token));
  }
}

TEST(FactBase, DeduplicatesAndMarksSubsumed) {
  FactBase base;
  auto first = base.insert(fact("w", "RC(-1,1)", "C"));
  EXPECT_TRUE(first.inserted);
  EXPECT_FALSE(base.insert(fact("w", "RC(-1,1)", "C")).inserted);
  auto nested = base.insert(fact("w", "RC(-0.5,1)", "C"));
  EXPECT_TRUE(nested.inserted);
  EXPECT_TRUE(nested.subsumed);
  EXPECT_EQ(base.entries()[nested.id].subsumed_by, first.id);
  auto canon = base.insert(fact("w^1", "RH(2)", "D"));
  EXPECT_EQ(base[canon.id].subject.str(), "w");
}

TEST(FactBase, IterationOrderIsInsertionOrder) {
  auto build = [] {
    FactBase b;
    for (std::string c : {"RH(2)", "A(3)", "RC(-2,5)", "A(2)"}) b.insert(fact("w", c, "C"));
    return b;
  };
  FactBase a = build(), b = build();
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].str(), b[i].str());
  EXPECT_EQ(a[0].claim(), "w in RH(2)");
}

TEST(FactFile, ParsesAllStatements) {
  FactFile ff = parse_fact_text(
      "# comment\n"
      "weight u\n"
      "weight v\n"
      "assume u in RCweak(1/2,inf) constant C1   # trailing\n"
      "assume u*v^(-1) in A(2) constant C2\n"
      "doubling u^(1/2) constant D1\n"
      "doubling v constant D2\n"
      "goal u in Harnack\n");
  ASSERT_EQ(ff.base.size(), 2u);
  EXPECT_EQ(ff.base[0].str(), "u in RCweak(0.5,inf) constant C1");
  EXPECT_EQ(ff.base[1].str(), "u*v^(-1) in A(2) constant C2");
  ASSERT_EQ(ff.base.doubling().size(), 2u);
  EXPECT_EQ(ff.base.doubling()[0].str(), "doubling u^(1/2) constant D1");
  EXPECT_EQ(ff.base.doubling()[1].str(), "doubling v constant D2");
  ASSERT_EQ(ff.goals.size(), 1u);
  EXPECT_EQ(ff.goals[0].pair, pair("-inf", "inf"));
}

TEST(FactFile, ErrorsCarryLineNumbers) {
  auto line_of = [](const std::string& text) {
    try {
      parse_fact_text(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  EXPECT_EQ(line_of("weight w\nassume v in A(2) constant C\n"), 2);
  EXPECT_EQ(line_of("weight w\n\nassume w in A(2)\n"), 3);
  EXPECT_EQ(line_of("weight w\nassume w in Q(2) constant C\n"), 2);
  EXPECT_EQ(line_of("frobnicate\n"), 1);
  EXPECT_EQ(line_of("weight w\ndoubling w^0 constant D\n"), 2);
  EXPECT_EQ(line_of("weight 9w\n"), 1);
}

TEST(Doubling, DoubledWeight) {
  DoublingFact d = make_doubling(parse_weight("u"), Exponent(Rational(1, 2)), ConstExpr::named("D"));
  EXPECT_EQ(d.doubled(), parse_weight("u^(1/2)"));
  EXPECT_THROW(make_doubling(parse_weight("u"), Exponent::pos_inf(), ConstExpr::named("D")), Error);
}

}  // namespace
}  // namespace rcalc
