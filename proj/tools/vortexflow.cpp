#include <CLI11.hpp>
#include <iostream>
#include <map>

#include "vortexflow/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"vortexflow: action functional, gradient flow and index computations for weighted circle actions"};
  app.require_subcommand(1);
  vortexflow::RunOptions opts;
  std::string out_dir;
  std::uint64_t seed = 0;
  const std::map<std::string, std::string> about{
      {"flow", "integrate a gradient flow line from a perturbed critical loop"},
      {"crit", "list sectors and compute their critical loops"},
      {"hessian", "Hessian spectrum at the configured critical loop"},
      {"scan", "sample the gradient inequality near every critical loop"},
      {"index", "virtual dimensions for the configured queries"},
      {"webs", "enumerate webs of stable weighted trees and check the order"},
      {"energy-check", "energy identity on random and flow-generated cylinders"},
      {"period", "measure the action period from gauge transformations"},
  };
  for (const std::string& name : vortexflow::subcommands()) {
    CLI::App* sub = app.add_subcommand(name, about.at(name));
    sub->add_option("--config", opts.config_path, "experiment configuration (INI)")->required();
    sub->add_option("--out", out_dir, "output directory (overrides output.dir)");
    sub->add_option("--seed", seed, "random seed (overrides scan.rng_seed)");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error field=argv message=\"" << e.what() << "\"\n";
    return 2;
  }
  CLI::App* sub = app.get_subcommands().front();
  opts.subcommand = sub->get_name();
  if (sub->count("--out")) opts.out_dir = out_dir;
  if (sub->count("--seed")) opts.seed = seed;
  return vortexflow::run(opts, std::cout, std::cerr);
}
