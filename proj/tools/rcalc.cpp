#include "rcalc/cli/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  using namespace rcalc::cli;
  CLI::App app{"rcalc: reverse-class calculus, numerics and diagrams"};
  app.require_subcommand(1);

  DeriveArgs d;
  auto* derive = app.add_subcommand("derive", "search for a derivation of a goal");
  derive->add_option("file", d.file, "fact file")->required();
  derive->add_option("--goal", d.goal, "goal '<weight> in <class>' (overrides the file)");
  derive->add_option("--goal-index", d.goal_index, "which goal of the file to derive");
  derive->add_option("--budget", d.budget, "maximum derivation depth")->capture_default_str();
  derive->add_option("--theta-extra", d.theta_extra, "additional scaling exponents");
  derive->add_option("--witness", d.witnesses, "VARIANT=value:label for a concrete self-improvement");
  derive->add_flag("--no-self-improve", d.no_self_improve, "disable the self-improvement moves");
  derive->add_option("--json", d.json, "write the derivation JSON (- for stdout)");
  derive->add_flag("--trace", d.trace, "print the trace even when JSON goes to stdout");
  derive->add_option("--diagram", d.diagram, "write the proof panels as SVG");
  derive->add_flag("--separate", d.separate, "one numbered SVG file per panel");

  ClassifyArgs c;
  auto* classify = app.add_subcommand("classify", "log-oscillation classes implied by the facts");
  classify->add_option("file", c.file, "fact file")->required();
  classify->add_option("--subject", c.subject, "weight whose logarithm is classified");
  classify->add_option("--budget", c.budget, "saturation depth")->capture_default_str();
  classify->add_flag("--verbose", c.verbose, "show a witnessing fact per class");

  EstimateArgs e;
  auto* estimate = app.add_subcommand("estimate", "empirical reversal constant over a ball family");
  estimate->add_option("config", e.config, "JSON experiment config")->required();
  estimate->add_option("--resolution", e.resolution, "quadrature nodes (overrides the config)");
  estimate->add_option("--method", e.method, "auto, quadrature or midpoint");
  estimate->add_option("--out", e.out, "report path (- for stdout)")->capture_default_str();

  ExperimentArgs x;
  auto* experiment = app.add_subcommand("experiment", "product examples ex8.4 and ex8.5");
  experiment->add_option("name", x.name, "ex8.4 or ex8.5")->required();
  experiment->add_option("--resolution", x.resolution, "quadrature nodes N (also runs 2N)")->capture_default_str();
  experiment->add_option("--method", x.method, "auto, quadrature or midpoint")->capture_default_str();
  experiment->add_option("--out", x.out, "report path (- for stdout)");

  RenderArgs r;
  auto* render = app.add_subcommand("render", "draw a fact file or derivation JSON as SVG");
  render->add_option("input", r.input, "fact file or derivation JSON")->required();
  render->add_option("--out", r.out, "SVG path")->required();
  render->add_flag("--separate", r.separate, "one numbered SVG file per panel");

  auto* selftest = app.add_subcommand("selftest", "run the corollary regression suite and spot checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    int code = app.exit(err);
    return code == 0 ? 0 : kInputError;
  }

  try {
    if (*derive) return cmd_derive(d, std::cout, std::cerr);
    if (*classify) return cmd_classify(c, std::cout);
    if (*estimate) return cmd_estimate(e, std::cout);
    if (*experiment) return cmd_experiment(x, std::cout);
    if (*render) return cmd_render(r);
    if (*selftest) return cmd_selftest(std::cout);
  } catch (const rcalc::Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
