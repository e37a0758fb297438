#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rnshelix/pipeline.hpp"

namespace {

struct Flags {
  std::optional<double> tol, eps, h;
  std::optional<int> samples;
  std::string out = "./out";
  std::string input;
};

CLI::App* add_mode(CLI::App& app, const char* name, const char* help, Flags& f) {
  CLI::App* sub = app.add_subcommand(name, help);
  sub->set_help_flag("--help", "print this help message and exit");
  sub->add_option("input", f.input, "input JSON document")->required();
  sub->add_option("--tol", f.tol, "constancy tolerance (default 1e-3)");
  sub->add_option("--eps", f.eps, "null-cone threshold (default 1e-9)");
  sub->add_option("--h", f.h, "finite-difference step (default 1e-4)");
  sub->add_option("--samples", f.samples, "arc-length grid size (default 1001)");
  sub->add_option("--out", f.out, "output directory")->capture_default_str();
  return sub;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rectifying non-null helix analysis for curves on surfaces in Minkowski 3-space"};
  app.set_version_flag("--version", std::string(rnshelix::kToolVersion));
  app.set_help_flag("--help", "print this help message and exit");
  app.require_subcommand(1);

  Flags flags;
  CLI::App* analyze = add_mode(app, "analyze", "analyze a curve on a surface", flags);
  CLI::App* synth = add_mode(app, "synthesize", "integrate a Darboux profile and analyze the result", flags);
  CLI::App* props = add_mode(app, "check-props", "evaluate the structural propositions", flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  rnshelix::RunConfig cfg;
  cfg.mode = analyze->parsed() ? rnshelix::Mode::Analyze
             : synth->parsed() ? rnshelix::Mode::Synthesize
                               : rnshelix::Mode::CheckProps;
  (void)props;
  cfg.input = flags.input;
  cfg.out_dir = flags.out;
  cfg.overrides.tol = flags.tol;
  cfg.overrides.eps = flags.eps;
  cfg.overrides.h = flags.h;
  cfg.overrides.samples = flags.samples;
  return rnshelix::run(cfg, std::cout, std::cerr);
}
