#include "helpers.hpp"

#include "rcalc/cli/commands.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>

namespace rcalc::cli {
namespace {

namespace fs = std::filesystem;

std::string data(const std::string& name) { return std::string(RCALC_DATA_DIR) + "/" + name; }

fs::path scratch(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "rcalc_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

TEST(CliDerive, PrintsTraceAndExitsZero) {
  std::ostringstream out, err;
  DeriveArgs a;
  a.file = data("a3.facts");
  EXPECT_EQ(cmd_derive(a, out, err), kOk);
  EXPECT_NE(out.str().find("SCALE"), std::string::npos);
  EXPECT_NE(out.str().find("C^(1/2)"), std::string::npos);
  EXPECT_TRUE(err.str().empty());
}

TEST(CliDerive, JsonToStdoutReplays) {
  std::ostringstream out, err;
  DeriveArgs a;
  a.file = data("harnack.facts");
  a.json = "-";
  ASSERT_EQ(cmd_derive(a, out, err), kOk);
  Derivation d = from_json(nlohmann::json::parse(out.str()));
  EXPECT_FALSE(replay(d));
  EXPECT_EQ(d.node(d.goals.at(0)).constant.str(), "C1*C2*C3^2*D1'*D2'");
}

TEST(CliDerive, ExhaustedBudgetExitsTwo) {
  std::ostringstream out, err;
  DeriveArgs a;
  a.file = data("unreachable.facts");
  a.budget = 1;
  EXPECT_EQ(cmd_derive(a, out, err), kExhausted);
  EXPECT_NE(err.str().find("no derivation"), std::string::npos);
}

TEST(CliDerive, GoalOverrideAndBadInput) {
  std::ostringstream out, err;
  DeriveArgs a;
  a.file = data("a3.facts");
  a.goal = "w^2 in RC(-0.25,0.5)";
  EXPECT_EQ(cmd_derive(a, out, err), kOk);
  a.goal = "v in A(2)";
  EXPECT_THROW(cmd_derive(a, out, err), Error);
  a.goal.clear();
  a.file = data("missing.facts");
  EXPECT_THROW(cmd_derive(a, out, err), Error);
  a.file = data("blo.facts");
  EXPECT_THROW(cmd_derive(a, out, err), Error);
}

TEST(CliDerive, WitnessOptionParsing) {
  DeriveArgs a;
  a.witnesses = {"AINF_TO_AR=3:Er"};
  a.theta_extra = {"1/3"};
  SearchOptions o = search_options(a);
  ASSERT_EQ(o.witnesses.count(SelfImprove::AINF_TO_AR), 1u);
  EXPECT_EQ(o.witnesses.at(SelfImprove::AINF_TO_AR).value, Rational(3));
  EXPECT_EQ(o.extra_thetas.at(0), Rational(1, 3));
  a.witnesses = {"AINF_TO_AR:3"};
  EXPECT_THROW(search_options(a), Error);
  a.witnesses = {"NOPE=1:K"};
  EXPECT_THROW(search_options(a), Error);
  a.witnesses.clear();
  a.theta_extra = {"0"};
  EXPECT_THROW(search_options(a), Error);
}

TEST(CliDerive, WritesNumberedPanels) {
  std::ostringstream out, err;
  DeriveArgs a;
  a.file = data("cor44.facts");
  a.diagram = scratch("chain.svg").string();
  a.separate = true;
  ASSERT_EQ(cmd_derive(a, out, err), kOk);
  for (int k = 1; k <= 3; ++k) EXPECT_TRUE(fs::exists(scratch("chain-" + std::to_string(k) + ".svg"))) << k;
  EXPECT_FALSE(fs::exists(scratch("chain-4.svg")));
  EXPECT_EQ(detail::numbered("a/b.c/d", 2), "a/b.c/d-2");
}

TEST(CliClassify, DefaultSubject) {
  std::ostringstream out;
  ClassifyArgs a;
  a.file = data("blo.facts");
  EXPECT_EQ(cmd_classify(a, out), kOk);
  EXPECT_EQ(out.str(), "BLO BMO\n");
  std::ostringstream out2;
  a.file = data("buo.facts");
  a.verbose = true;
  cmd_classify(a, out2);
  EXPECT_EQ(out2.str().rfind("BMO BUO\n", 0), 0u);
  EXPECT_NE(out2.str().find("BUO: w in RC(0.5,inf)"), std::string::npos);
}

TEST(CliEstimate, WritesReport) {
  std::ostringstream out;
  EstimateArgs a;
  a.config = data("abs_a3.json");
  ASSERT_EQ(cmd_estimate(a, out), kOk);
  auto j = nlohmann::json::parse(out.str());
  EXPECT_EQ(j["schema"], numlab::kEstimateSchema);
  EXPECT_NEAR(j["sup"].get<double>(), 2.0, 1e-6);

  std::ostringstream div;
  a.config = data("abs4_a5.json");
  ASSERT_EQ(cmd_estimate(a, div), kOk);
  auto k = nlohmann::json::parse(div.str());
  EXPECT_EQ(k["sup"], "inf");
  EXPECT_EQ(k["divergent"], true);
}

TEST(CliEstimate, OverridesAndSummary) {
  std::ostringstream out;
  EstimateArgs a;
  a.config = data("abs_a3.json");
  a.method = "quadrature";
  a.resolution = 4000;
  a.out = scratch("report.json").string();
  ASSERT_EQ(cmd_estimate(a, out), kOk);
  EXPECT_NE(out.str().find("lower bound"), std::string::npos);
  auto j = nlohmann::json::parse(test::slurp(a.out));
  EXPECT_EQ(j["method"], "quadrature");
  EXPECT_EQ(j["resolution"], 4000);
  a.method = "simpson";
  EXPECT_THROW(cmd_estimate(a, out), Error);
}

TEST(CliExperiment, ReportsReproduction) {
  std::ostringstream out;
  ExperimentArgs a;
  a.name = "ex8.4";
  a.resolution = 4000;
  EXPECT_EQ(cmd_experiment(a, out), kOk);
  EXPECT_NE(out.str().find("ex8.4: reproduced"), std::string::npos);
}

TEST(CliRender, FactFileAndDerivationJson) {
  RenderArgs a;
  a.input = data("harnack.facts");
  a.out = scratch("facts.svg").string();
  EXPECT_EQ(cmd_render(a), kOk);
  EXPECT_NE(test::slurp(a.out).find("class=\"arrow weak\""), std::string::npos);
  a.input = std::string(RCALC_GOLDEN_DIR) + "/cor44.json";
  a.out = scratch("panels.svg").string();
  EXPECT_EQ(cmd_render(a), kOk);
  EXPECT_NE(test::slurp(a.out).find("3. SHRINK"), std::string::npos);
  std::ofstream(scratch("broken.json")) << "{ not json";
  a.input = scratch("broken.json").string();
  EXPECT_THROW(cmd_render(a), Error);
}

TEST(CliSelftest, AllPass) {
  std::ostringstream out;
  EXPECT_EQ(cmd_selftest(out), kOk);
  EXPECT_EQ(out.str().find("FAIL "), std::string::npos) << out.str();
}

}  // namespace
}  // namespace rcalc::cli
