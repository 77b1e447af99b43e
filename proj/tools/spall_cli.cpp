// Command-line front end for the spall pipeline.

#include <CLI11.hpp>
#include <iostream>

#include "spall/experiments.hpp"
#include "spall/io.hpp"
#include "spall/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Complex-time continuation of u_t = u_xx + u^2 on (-1, 1)"};
  app.require_subcommand(1);

  std::string config_file;
  int n = 0, order = 0;
  double rel_tol = 0.0;
  std::string out;
  app.add_option("--config", config_file, "flat key = value config file");
  app.add_option("--n", n, "interior grid points (>= 32)");
  app.add_option("--order", order, "manifold expansion order");
  app.add_option("--rel-tol", rel_tol, "relative step tolerance");
  app.add_option("--out", out, "output directory");

  auto* equilibrium = app.add_subcommand("equilibrium", "compute u_+");
  auto* spectrum = app.add_subcommand("spectrum", "compute u_+ and the leading eigenpairs");
  auto* manifold = app.add_subcommand("manifold", "compute the unstable-manifold expansion");
  auto* evolve = app.add_subcommand("evolve", "evolve a manifold seed along a time path");
  std::string path_file, tau_text = "0.02";
  evolve->add_option("--path", path_file, "JSON array of [re, im] waypoints")->required();
  evolve->add_option("--tau", tau_text, "seed amplitude re,im");
  auto* experiment = app.add_subcommand("experiment", "run named experiments");
  std::vector<std::string> names;
  experiment->add_option("names", names, "experiment names")->required();
  auto* all = app.add_subcommand("all", "run every experiment");

  CLI11_PARSE(app, argc, argv);

  try {
    spall::RunConfig cfg;
    if (!config_file.empty()) cfg = spall::load_config_file(config_file, cfg);
    if (n) cfg.grid_n = n;
    if (order) cfg.expansion_order = order;
    if (rel_tol > 0.0) cfg.options.rel_tol = rel_tol;
    if (!out.empty()) cfg.output_dir = out;

    if (equilibrium->parsed()) cfg.last_stage = "equilibrium";
    if (manifold->parsed()) cfg.last_stage = "manifold";
    if (spectrum->parsed() || equilibrium->parsed() || manifold->parsed())
      cfg.experiment_list.clear();
    if (experiment->parsed()) cfg.experiment_list = names;
    if (all->parsed()) cfg.experiment_list = spall::experiment_names();
    if (evolve->parsed()) {
      cfg.tau = spall::parse_complex(tau_text);
      cfg.experiment_list.clear();
      return spall::run_evolve(cfg, path_file);
    }
    return spall::run(cfg);
  } catch (const spall::UsageError& err) {
    std::cerr << "usage error: " << err.what() << '\n';
    return 64;
  }
}
