// hamkit: check kernel hypotheses, certify existence conditions and compute
// positive solutions of Hammerstein integral equations.

#include "hamkit/hamkit.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Existence certificates and fixed points for Hammerstein equations"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  hamkit::Overrides overrides;
  int grid = 0;
  double tol = 0, eps = 0;

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    if (needs_config)
      sub->add_option("--config", config_path, "problem config file")
          ->required()
          ->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "directory for report.txt, report.json and tables");
    sub->add_option("--grid", grid, "hypothesis grid points per axis (default 101)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--tol", tol, "hypothesis tolerance (default 1e-10)")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--strictness-eps", eps,
                    "margins must exceed this to count as strict (default 0)")
        ->check(CLI::NonNegativeNumber);
  };

  auto* hyp = app.add_subcommand("hypotheses", "grid checks of the kernel hypotheses");
  auto* cert = app.add_subcommand("certify", "evaluate the existence conditions");
  auto* solve = app.add_subcommand("solve", "certify, then compute and validate a fixed point");
  auto* repro = app.add_subcommand("reproduce", "run the built-in Lidstone example");
  add_common(hyp, true);
  add_common(cert, true);
  add_common(solve, true);
  add_common(repro, false);

  CLI11_PARSE(app, argc, argv);

  hamkit::Command command = hamkit::Command::reproduce;
  CLI::App* chosen = app.get_subcommands().front();
  if (chosen == hyp)
    command = hamkit::Command::hypotheses;
  else if (chosen == cert)
    command = hamkit::Command::certify;
  else if (chosen == solve)
    command = hamkit::Command::solve;
  if (chosen->count("--grid"))
    overrides.grid = grid;
  if (chosen->count("--tol"))
    overrides.tol = tol;
  if (chosen->count("--strictness-eps"))
    overrides.strictness_eps = eps;

  try {
    hamkit::ProblemConfig cfg = command == hamkit::Command::reproduce
                                    ? hamkit::example_config()
                                    : hamkit::load_config(config_path);
    hamkit::apply_overrides(cfg, overrides);
    if (out_dir.empty())
      out_dir = cfg.output_dir;
    hamkit::RunReport report = hamkit::run(command, cfg);
    std::cout << hamkit::text_report(report);
    if (!out_dir.empty())
      hamkit::write_outputs(report, out_dir);
    return hamkit::exit_status(report.json);
  } catch (const hamkit::ParseError& e) {
    std::cerr << (config_path.empty() ? "<builtin>" : config_path) << ":" << e.what()
              << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return 2;
}
