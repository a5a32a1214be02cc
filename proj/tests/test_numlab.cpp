#include "rcalc/numlab/config.hpp"
#include "rcalc/numlab/experiment.hpp"
#include "rcalc/numlab/power_oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace rcalc::numlab {
namespace {

const double kE = std::exp(1.0);

MeanOptions quad(std::size_t n) {
  MeanOptions o;
  o.method = Method::Quadrature;
  o.resolution = n;
  return o;
}

// Centred p-mean of |x|^a over (-R, R): R^a (1 + a p)^(-1/p), and R^a e^(-a) at p = 0.
double centred_power_mean(double a, double R, double p) {
  if (p == 0) return std::pow(R, a) * std::exp(-a);
  return std::pow(R, a) * std::pow(1 + a * p, -1 / p);
}

TEST(PMean, LinearWeightOnZeroTwo) {
  Weight x = Weight::power(1);
  Ball B{1, 1};
  EXPECT_NEAR(p_mean(x, B, 1.0), 1.0, 1e-12);
  EXPECT_NEAR(p_mean(x, B, 2.0), std::sqrt(4.0 / 3), 1e-12);
  EXPECT_NEAR(p_mean(x, B, 0.0), 2 / kE, 1e-12);
  EXPECT_NEAR(p_mean(x, B, 1.0, quad(10000)), 1.0, 1e-9);
  EXPECT_NEAR(p_mean(x, B, 2.0, quad(10000)), std::sqrt(4.0 / 3), 1e-4);
  EXPECT_NEAR(p_mean(x, B, 0.0, quad(10000)), 2 / kE, 1e-4);
}

TEST(PMean, EssentialBounds) {
  Weight x = Weight::power(1);
  Ball B{1, 1};
  EXPECT_NEAR(p_mean(x, B, kInf), 2.0, 1e-12);
  EXPECT_NEAR(p_mean(x, B, -kInf), 0.0, 1e-12);
  Weight step = Weight::piecewise({0.0}, {1.0, 3.0});
  EXPECT_DOUBLE_EQ(p_mean(step, Ball{0, 0.5}, kInf), 3.0);
  EXPECT_DOUBLE_EQ(p_mean(step, Ball{0, 0.5}, -kInf), 1.0);
}

TEST(PMean, ConstantWeightIsOneForEveryP) {
  Weight one = Weight::constant(1);
  for (double p : {-kInf, -3.0, -0.5, 0.0, 0.5, 1.0, 4.0, kInf})
    for (Ball B : {Ball{0, 0.1}, Ball{-0.3, 0.2}, Ball{0.2, 0.4}}) EXPECT_NEAR(p_mean(one, B, p), 1.0, 1e-12);
}

TEST(PMean, DivergentIntegralGivesSentinel) {
  Weight x = Weight::power(1);
  EXPECT_EQ(p_mean(x, Ball{0, 0.5}, -1.0), 0.0);
  EXPECT_EQ(p_mean(x, Ball{0, 0.5}, -1.0, quad(1000)), 0.0);
  EXPECT_TRUE(std::isinf(p_mean(Weight::power(-1), Ball{0, 0.5}, 1.0)));
  // The singularity on the boundary of the ball still diverges.
  EXPECT_EQ(p_mean(x, Ball{0.5, 0.5}, -2.0), 0.0);
}

TEST(PMean, CentredPowerClosedForm) {
  for (double a : {-0.5, 0.3, 1.0, 2.5})
    for (double R : {0.01, 0.3})
      for (double p : {-1.5, -0.2, 0.0, 0.7, 2.0}) {
        if (1 + a * p <= 0) continue;
        double want = centred_power_mean(a, R, p);
        EXPECT_NEAR(p_mean(Weight::power(a), Ball{0, R}, p) / want, 1.0, 1e-9) << a << " " << R << " " << p;
        EXPECT_NEAR(p_mean(Weight::power(a), Ball{0, R}, p, quad(10000)) / want, 1.0, 1e-4) << a << " " << R << " " << p;
      }
}

TEST(PMean, Errors) {
  Weight x = Weight::power(1);
  EXPECT_THROW(p_mean(x, Ball{0, 0}, 1.0), Error);
  EXPECT_THROW(p_mean(x, Ball{0, 1}, 1.0, quad(1)), Error);
  EXPECT_THROW(p_mean(x, Ball{0, 1}, Exponent::symbolic(1, make_symbol("t", Exponent(0), Exponent(1), ""))), Error);
}

TEST(Ratio, AbsoluteValueInA3IsTwo) {
  Weight x = Weight::power(1);
  for (double R : {1e-3, 0.1, 0.5}) {
    EXPECT_NEAR(reversal_ratio(x, Ball{0, R}, -0.5, 1), 2.0, 1e-9);
    EXPECT_NEAR(reversal_ratio(x, Ball{0, R}, -0.5, 1, quad(10000)), 2.0, 1e-3);
  }
}

TEST(Ratio, ConstantAndDivergent) {
  EXPECT_NEAR(reversal_ratio(Weight::constant(3.5), Ball{0.1, 0.2}, -2, 5), 1.0, 1e-12);
  EXPECT_TRUE(std::isinf(reversal_ratio(Weight::power(4), Ball{0, 0.3}, -0.25, 1)));
  EXPECT_TRUE(std::isinf(reversal_ratio(Weight::power(4), Ball{0, 0.3}, -0.25, 1, quad(1000))));
}

TEST(Estimate, AbsoluteValueA3OnCentredFamily) {
  Domain D(-1, 1);
  EstimateReport rep = estimate_constant(Weight::power(1), centered_family(D, 0, 12, 1e-3), -0.5, 1);
  EXPECT_NEAR(rep.sup, 2.0, 1e-6);
  EXPECT_FALSE(rep.divergent);
  EXPECT_TRUE(rep.holder_ok());
  EXPECT_EQ(rep.argmax, 0u);  // every ratio ties at 2; the first ball wins
}

TEST(Estimate, AbsoluteValueA2Diverges) {
  Domain D(-1, 1);
  EstimateReport rep = estimate_constant(Weight::power(1), grid_family(D, 7, 4, 1e-2, 0.0), -1, 1);
  EXPECT_TRUE(std::isinf(rep.sup));
  EXPECT_TRUE(rep.divergent);
  // The first ball whose closure meets the singularity.
  EXPECT_LE(rep.argmax_ball().lo(), 0.0);
  EXPECT_GE(rep.argmax_ball().hi(), 0.0);
  for (std::size_t i = 0; i < rep.argmax; ++i) EXPECT_TRUE(std::isfinite(rep.values[i].value));
  EXPECT_EQ(rep.to_json()["sup"], "inf");
}

TEST(Estimate, ConstantWeightAllOnes) {
  Domain D(-1, 1);
  EstimateReport rep = estimate_constant(Weight::constant(2), grid_family(D, 5, 3, 0.1), -1, 3);
  for (const auto& v : rep.values) EXPECT_NEAR(v.value, 1.0, 1e-12);
  EXPECT_NEAR(rep.sup, 1.0, 1e-12);
}

TEST(Estimate, Errors) {
  Domain D(-1, 1);
  BallFamily fam = centered_family(D, 0, 3, 0.1);
  EXPECT_THROW(estimate_constant(Weight::power(1), fam, 1, 1), Error);
  EXPECT_THROW(estimate_constant(Weight::power(1), BallFamily{D, {}, {}}, -1, 1), Error);
  EXPECT_THROW(explicit_family(D, {Ball{0.8, 0.2}}), Error);
}

TEST(Weak, ConstantWeightValue) {
  // w = 1: ((1/|B|) int_{2B} 1)^(1/r) = 2^(1/r), so the ratio is 2^(-1/r).
  Domain D(-1, 1);
  BallFamily fam = grid_family(D, 4, 3, 0.2);
  for (double r : {0.5, 1.0, 2.0}) {
    EstimateReport rep = weak_estimate(Weight::constant(1), fam, r, r + 1);
    EXPECT_NEAR(rep.sup, std::pow(2.0, -1 / r), 1e-12);
  }
  EXPECT_THROW(weak_estimate(Weight::constant(1), fam, 0, 1), Error);
}

TEST(Weak, BoundedByStrongForPositiveR) {
  Domain D(-1, 1);
  BallFamily fam = grid_family(D, 9, 5, 1e-2, 0.0);
  for (double a : {-0.5, 0.5, 1.0, 3.0}) {
    Weight w = Weight::power(a);
    EstimateReport weak = weak_estimate(w, fam, 1, 2);
    EstimateReport strong = estimate_constant(w, fam, 1, 2);
    for (std::size_t i = 0; i < fam.size(); ++i)
      EXPECT_LE(weak.values[i].value, strong.values[i].value * (1 + 1e-12));
  }
}

TEST(Weak, AbsoluteValueStableUnderRefinement) {
  Domain D(-1, 1);
  BallFamily fam = centered_family(D, 0, 8, 1e-3);
  double a = weak_estimate(Weight::power(1), fam, 1, 2, quad(2000)).sup;
  double b = weak_estimate(Weight::power(1), fam, 1, 2, quad(4000)).sup;
  double exact = weak_estimate(Weight::power(1), fam, 1, 2).sup;
  EXPECT_TRUE(std::isfinite(exact));
  EXPECT_NEAR(a, exact, 1e-4 * exact);
  EXPECT_NEAR(b, exact, 1e-4 * exact);
}

TEST(Oracle, Examples) {
  EXPECT_TRUE(power_ap_oracle(1, 1, 3));
  EXPECT_FALSE(power_ap_oracle(4, 1, 5));
  for (int n : {1, 2, 3})
    for (double p : {1.0, 1.5, 4.0}) EXPECT_TRUE(power_ap_oracle(0, n, p));
  EXPECT_TRUE(power_ap_oracle(3, 1, 5));
  EXPECT_FALSE(power_ap_oracle(-1, 1, 2));
  EXPECT_TRUE(power_ap_oracle(-1.5, 2, 2));
  EXPECT_FALSE(power_ap_oracle(0.5, 1, 1));
  EXPECT_THROW(power_ap_oracle(0, 0, 2), Error);
}

TEST(Oracle, AgreesWithExactEstimates) {
  Domain D(-1, 1);
  BallFamily fam = grid_family(D, 9, 6, 1e-3, 0.0);
  for (double a : {-0.9, -0.5, 0.0, 0.5, 1.0, 1.5, 3.0, 4.0})
    for (double p : {1.5, 2.0, 3.0, 5.0}) {
      EstimateReport rep = estimate_constant(Weight::power(a), fam, 1 / (1 - p), 1);
      EXPECT_EQ(std::isfinite(rep.sup), power_ap_oracle(a, 1, p)) << "a=" << a << " p=" << p;
    }
}

TEST(Refinement, MidpointDivergenceIsNondecreasing) {
  Weight w = Weight::power(4);
  Ball B{0, 0.25};
  MeanOptions o;
  o.method = Method::Midpoint;
  o.heuristic_divergence = false;
  double prev = 0;
  for (std::size_t n : {1000u, 10000u, 100000u}) {
    o.resolution = n;
    double v = reversal_ratio(w, B, -0.25, 1, o);
    EXPECT_GE(v, prev);
    prev = v;
  }
}

TEST(Oscillation, AbsoluteValue) {
  Domain D(-1, 1);
  BallFamily fam = centered_family(D, 0, 6, 1e-2);
  // ln|x| - (ln R - 1) has mean absolute value 2/e on every centred ball.
  EXPECT_NEAR(log_oscillation(Weight::power(1), fam, Oscillation::BMO).sup, 2 / kE, 1e-9);
  EXPECT_TRUE(std::isinf(log_oscillation(Weight::power(1), fam, Oscillation::BLO).sup));
  // sup ln|x| = ln R and the mean is ln R - 1.
  EXPECT_NEAR(log_oscillation(Weight::power(1), fam, Oscillation::BUO).sup, 1.0, 1e-9);
}

TEST(Oscillation, ConstantIsZero) {
  Domain D(-1, 1);
  BallFamily fam = grid_family(D, 5, 3, 0.1);
  for (auto k : {Oscillation::BMO, Oscillation::BLO, Oscillation::BUO})
    EXPECT_NEAR(log_oscillation(Weight::constant(5), fam, k).sup, 0.0, 1e-12);
}

TEST(Oscillation, TruncatedAbsoluteValueIsBlo) {
  Weight w = Weight::max({Weight::power(1), Weight::constant(0.5)});
  // On (-1, 1): mean over (1/2, 1) of ln x + ln 2 is ln 2 - 1/2.
  EXPECT_NEAR(oscillation_on(w, Ball{0, 1}, Oscillation::BLO), std::log(2.0) - 0.5, 1e-9);
  EXPECT_NEAR(oscillation_on(w, Ball{0, 1}, Oscillation::BLO, quad(20000)), std::log(2.0) - 0.5, 1e-5);
  Domain D(-2, 2);
  EXPECT_TRUE(std::isfinite(log_oscillation(w, centered_family(D, 0, 10, 1e-2), Oscillation::BLO).sup));
}

TEST(Config, ParsesAndRuns) {
  auto j = nlohmann::json::parse(R"J({
    "domain": [-1, 1],
    "weight": {"type": "power", "exponent": 1, "center": 0},
    "class": "A(3)",
    "family": {"kind": "centered", "focus": 0, "n_radii": 5, "min_ratio": 0.01},
    "method": "auto"
  })J");
  EstimateConfig c = parse_estimate_config(j);
  EXPECT_EQ(c.kind, "strong");
  EXPECT_DOUBLE_EQ(c.r, -0.5);
  EXPECT_DOUBLE_EQ(c.s, 1.0);
  EstimateReport rep = run_estimate(c);
  EXPECT_NEAR(rep.sup, 2.0, 1e-9);
  auto out = rep.to_json();
  EXPECT_EQ(out["schema"], kEstimateSchema);
  EXPECT_EQ(out["lower_bound"], true);
  EXPECT_EQ(out["values"].size(), 5u);
}

TEST(Config, WeakTokenAndSentinels) {
  auto j = nlohmann::json::parse(R"J({
    "domain": [-1, 1],
    "weight": {"type": "constant", "value": 1},
    "class": "RCweak(1,inf)",
    "family": {"kind": "explicit", "balls": [[0, 0.25]]}
  })J");
  EstimateConfig c = parse_estimate_config(j);
  EXPECT_EQ(c.kind, "weak");
  EXPECT_TRUE(std::isinf(c.s));
  EXPECT_NEAR(run_estimate(c).sup, 0.5, 1e-12);
  EXPECT_EQ(sentinel_json(kInf), "inf");
  EXPECT_EQ(sentinel_json(-kInf), "-inf");
  EXPECT_EQ(sentinel_json(0.0), "zero");
  EXPECT_EQ(sentinel_from_json("zero"), 0.0);
  EXPECT_TRUE(std::isinf(sentinel_from_json("inf")));
}

TEST(Config, Rejections) {
  auto bad = [](const char* text) { return parse_estimate_config(nlohmann::json::parse(text)); };
  EXPECT_THROW(bad(R"J({"weight": {"type": "constant", "value": 1}, "class": "A(2)",
                       "family": {"kind": "centered", "n_radii": 2}})J"),
               Error);
  EXPECT_THROW(bad(R"J({"domain": [-1, 1], "weight": {"type": "constant", "value": 1}, "pair": [2, 1],
                       "family": {"kind": "centered", "n_radii": 2}})J"),
               Error);
  EXPECT_THROW(bad(R"J({"domain": [-1, 1], "weight": {"type": "constant", "value": 1}, "class": "A(2)",
                       "family": {"kind": "spiral"}})J"),
               Error);
  EXPECT_THROW(bad(R"J({"domain": [-1, 1], "weight": {"type": "constant", "value": 1}, "kind": "XYZ",
                       "family": {"kind": "centered", "n_radii": 2}})J"),
               Error);
}

TEST(Weight, JsonRoundTrip) {
  Weight w = Weight::product({Weight::power(0.5, 0.1, 2), Weight::pow(Weight::max({Weight::power(1),
                                                                                   Weight::constant(0.5)}),
                                                                      -1.5)});
  Weight back = Weight::from_json(w.to_json());
  EXPECT_EQ(back.str(), w.str());
  for (double x : {-0.7, -0.2, 0.3, 0.9}) EXPECT_DOUBLE_EQ(back(x), w(x));
}

TEST(Experiment, ProductExamplesReproduce) {
  for (std::string name : {"ex8.4", "ex8.5"}) {
    ExperimentReport rep = product_experiment(name);
    EXPECT_TRUE(rep.pass) << name;
    bool any_divergent = false;
    for (const auto& leg : rep.legs) {
      EXPECT_TRUE(leg.pass) << name << ": " << leg.label;
      any_divergent = any_divergent || leg.divergent;
      if (leg.oracle) EXPECT_EQ(*leg.oracle, leg.expect == "stable") << leg.label;
    }
    EXPECT_TRUE(any_divergent);
  }
  EXPECT_THROW(product_experiment("ex9.9"), Error);
}

}  // namespace
}  // namespace rcalc::numlab
