// Command-line front end: deterministic numerical experiments on the
// shallow-water model family and its slow-time averaged system.
//
//   hyperavg resonance|dispersion|solve-averaged|solve-direct|compare|convergence
//            --config <file> [--out <dir>]
//
// Exit codes: 0 success (resonance: non-resonant), 2 resonant, 1 any error.
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hyperavg/harness.hpp"

namespace {

hyperavg::harness::RunConfig load(const std::string& config_path) {
  if (config_path.empty()) return hyperavg::harness::RunConfig{};
  return hyperavg::harness::parse_config_file(config_path);
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"weakly nonlinear wave experiments: direct solvers, the averaged "
               "system, and their comparison"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;

  CLI::App* c_res = app.add_subcommand(
      "resonance", "check the bottom-vs-wave frequency resonance condition");
  CLI::App* c_dis = app.add_subcommand(
      "dispersion", "tabulate omega^2(k), stability and growth rates");
  CLI::App* c_avg = app.add_subcommand(
      "solve-averaged", "integrate the averaged system, write the final profile");
  CLI::App* c_dir = app.add_subcommand(
      "solve-direct", "integrate the selected model, write the final profile");
  CLI::App* c_cmp = app.add_subcommand(
      "compare", "direct vs asymptotic solution errors over an epsilon sweep");
  CLI::App* c_cnv = app.add_subcommand(
      "convergence", "grid-step refinement study of the averaged scheme");
  for (CLI::App* sub : {c_res, c_dis, c_avg, c_dir, c_cmp, c_cnv}) {
    sub->add_option("--config", config_path, "experiment config file (key = value)");
    sub->add_option("--out", out_dir, "directory for CSV/summary outputs (default: cwd)");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    hyperavg::harness::RunConfig cfg = load(config_path);
    if (c_res->parsed()) return hyperavg::harness::cmd_resonance(cfg, std::cout);
    if (c_dis->parsed()) return hyperavg::harness::cmd_dispersion(cfg, out_dir, std::cout);
    if (c_avg->parsed())
      return hyperavg::harness::cmd_solve_averaged(cfg, out_dir, std::cout);
    if (c_dir->parsed())
      return hyperavg::harness::cmd_solve_direct(cfg, out_dir, std::cout);
    if (c_cmp->parsed()) {
      hyperavg::harness::cmd_compare(cfg, out_dir, std::cout);
      return 0;
    }
    if (c_cnv->parsed()) {
      hyperavg::harness::cmd_convergence(cfg, std::cout);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::cerr << "error: no subcommand selected\n";
  return 1;
}
