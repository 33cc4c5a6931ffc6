// nsk: command-line front end (simulate, classify, sweep, mms).

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nsk/cli.hpp"

namespace {

nsk::regime::Theorem parse_theorem(const std::string& s) {
  if (s == "T1.1" || s == "1.1") return nsk::regime::Theorem::T1_1;
  if (s == "T1.2" || s == "1.2") return nsk::regime::Theorem::T1_2;
  throw CLI::ValidationError("--theorem", "expected T1.1, T1.2 or both");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spherically symmetric Navier-Stokes-Korteweg solver and regime tools"};
  app.require_subcommand(1);

  std::string sim_config;
  auto* simulate = app.add_subcommand("simulate", "run a configured simulation");
  simulate->add_option("config", sim_config, "INI configuration file")->required();

  nsk::cli::ClassifyArgs cls;
  std::string theorem = "both";
  auto* classify = app.add_subcommand("classify", "classify (alpha, beta, gamma) against the theorem cases");
  classify->add_option("--alpha", cls.alpha)->required();
  classify->add_option("--beta", cls.beta)->required();
  classify->add_option("--gamma", cls.gamma)->required();
  classify->add_option("--theorem", theorem, "T1.1, T1.2 or both")->capture_default_str();
  classify->add_option("--eq-tol", cls.eq_tol, "tolerance for equalities")->capture_default_str();

  std::string sweep_config;
  auto* sweep = app.add_subcommand("sweep", "region raster or batch runs from a config with a [sweep] section");
  sweep->add_option("config", sweep_config, "INI configuration file")->required();

  nsk::cli::MmsArgs mms;
  bool coarse = false;
  auto* mms_cmd = app.add_subcommand("mms", "manufactured-solution convergence ladders");
  mms_cmd->add_option("--spatial-n", mms.spatial_n, "node counts for the spatial ladder");
  mms_cmd->add_option("--full-n", mms.full_n, "node counts for the space-time ladder");
  mms_cmd->add_option("--t-end", mms.t_end)->capture_default_str();
  mms_cmd->add_option("--report", mms.report, "JSON report path")->capture_default_str();
  mms_cmd->add_flag("--equilibrium", mms.equilibrium, "use the (1, 0) case with zero source");
  mms_cmd->add_flag("--coarse", coarse, "coarse-only ladders (n <= 16)");
  mms_cmd->add_flag("--spatial-only", mms.skip_full, "skip the space-time ladder");

  try {
    app.parse(argc, argv);
    if (classify->parsed()) {
      if (theorem != "both") cls.theorems = {parse_theorem(theorem)};
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : nsk::cli::kUsage;
  }

  if (simulate->parsed()) return nsk::cli::cmd_simulate(sim_config, std::cout, std::cerr);
  if (classify->parsed()) return nsk::cli::cmd_classify(cls, std::cout, std::cerr);
  if (sweep->parsed()) return nsk::cli::cmd_sweep(sweep_config, std::cout, std::cerr);
  if (coarse) {
    mms.spatial_n = {5, 9, 13};
    mms.full_n = {5, 9, 13};
  }
  return nsk::cli::cmd_mms(mms, std::cout, std::cerr);
}
