// admm-lab: run, certify and reproduce ADMM experiments from the command line.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "admmlab/cli.hpp"

namespace cli = admmlab::cli;

int main(int argc, char** argv) {
  CLI::App app{"ADMM and linearized ADMM experiment harness"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::optional<double> rho;
  std::optional<int> iters;
  std::string algo;
  auto* solve = app.add_subcommand("solve", "Run a solver from a JSON config and write its trajectory CSV");
  solve->add_option("--config", config_path, "JSON config file")->required();
  solve->add_option("--rho", rho, "Override solver.rho");
  solve->add_option("--iters", iters, "Override solver.iters");
  solve->add_option("--algo", algo, "Override solver.algo")->check(CLI::IsMember({"admm", "linadmm"}));
  solve->add_option("--out", out_path, "Trajectory CSV path")->required();

  int which = 1;
  std::string out_dir;
  double init_scale = 1.0;
  auto* figures = app.add_subcommand("figures", "Reproduce the convergence-rate figures");
  figures->add_option("--which", which, "Figure number")->required()->check(CLI::IsMember({1, 2}));
  figures->add_option("--out", out_dir, "Output directory")->required();
  figures->add_option("--init-scale", init_scale, "Multiply the (w, v) starting point");

  std::optional<double> slack;
  std::string theta = "auto";
  auto* certify = app.add_subcommand("certify", "Check the linear-rate certificates along a run");
  certify->add_option("--config", config_path, "JSON config file")->required();
  certify->add_option("--s", slack, "Slack parameter in [0, 1)");
  certify->add_option("--theta", theta, "auto, or a fixed theta value");

  double gamma = 1.0;
  double lambda = 1.0;
  std::string grid;
  auto* lower = app.add_subcommand("lowerbound", "Print the worst-case rate table");
  lower->add_option("--gamma", gamma, "Smoothness parameter gamma")->required();
  lower->add_option("--lambda", lambda, "Strong convexity lambda")->required();
  lower->add_option("--rho-grid", grid, "lo:hi:n log-spaced rho values");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kExitOk : cli::kExitValidation;
  }

  try {
    if (*solve) {
      cli::Overrides o;
      o.rho = rho;
      o.iters = iters;
      if (!algo.empty()) o.algo = cli::parse_algorithm(algo, "--algo");
      return cli::cmd_solve(config_path, o, out_path, std::cout);
    }
    if (*figures) return cli::cmd_figures(which, out_dir, init_scale, std::cout);
    if (*certify) {
      cli::CertifyOptions opts;
      opts.s = slack;
      if (theta != "auto") {
        try {
          std::size_t used = 0;
          opts.theta = std::stod(theta, &used);
          if (used != theta.size()) throw std::invalid_argument(theta);
        } catch (const std::logic_error&) {
          throw admmlab::ValidationError("--theta: expected auto or a number, got \"" + theta + "\"");
        }
      }
      return cli::cmd_certify(config_path, opts, std::cout, std::cerr);
    }
    std::optional<cli::RhoGrid> rho_grid;
    if (!grid.empty()) rho_grid = cli::parse_rho_grid(grid);
    return cli::cmd_lowerbound(gamma, lambda, rho_grid, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::exit_code_for(e);
  }
}
