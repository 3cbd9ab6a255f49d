#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "affdim/box_dim.hpp"
#include "affdim/cli.hpp"
#include "affdim/config.hpp"

namespace {

struct Raw {
  std::string config_path;
  int jmax = 0;
  int kmax = 0;
  std::uint64_t budget = 0;
  double tol = -1.0;
  std::uint64_t seed = 0;
  std::string window;
  std::string target = "FC";
  int render_j = 0;
};

void add_common(CLI::App* cmd, Raw& raw, affdim::CliFlags& flags) {
  cmd->add_option("config", raw.config_path, "Run configuration (.cfg)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--jmax", raw.jmax, "Finest dyadic scale j (delta = 2^-j)");
  cmd->add_option("--kmax", raw.kmax, "Largest word length for s_k");
  cmd->add_option("--budget", raw.budget, "Cap on enumerated words and leaves");
  cmd->add_option("--tol", raw.tol, "Slack for the sandwich check");
  cmd->add_option("--out", flags.out_dir, "Output directory");
  cmd->add_option("--seed", raw.seed, "Seed recorded with the run");
  cmd->add_option("--angles", flags.angles, "Number of projection angles");
  cmd->add_option("--window", raw.window, "Slope window jlo:jhi");
  cmd->add_option("--threads", flags.threads, "OpenMP worker count (0 = runtime default)");
  cmd->add_flag("--serial", flags.serial, "Use the serial reference kernels");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Affinity and box-counting dimensions of inhomogeneous self-affine sets"};
  app.require_subcommand(1);

  Raw raw;
  affdim::CliFlags flags;

  auto* affinity = app.add_subcommand("affinity", "Root sequence s_k and the affinity-dimension upper bound");
  auto* attract = app.add_subcommand("attract", "Generate attractor points (CSV) and raster (PGM)");
  auto* boxdim = app.add_subcommand("boxdim", "Box-count curve and slope estimates");
  auto* verify = app.add_subcommand("verify", "Numerical checks: --sandwich (default), --cosc, --kappa, --projection");
  auto* render = app.add_subcommand("render", "Raster image at delta = 2^-j");
  for (auto* cmd : {affinity, attract, boxdim, verify, render}) add_common(cmd, raw, flags);
  for (auto* cmd : {attract, boxdim, render}) {
    cmd->add_option("--target", raw.target, "Set to generate: C, F0 or FC")->check(CLI::IsMember({"C", "F0", "FC"}));
  }
  verify->add_flag("--sandwich", flags.sandwich, "Dimension sandwich check");
  verify->add_flag("--cosc", flags.cosc, "Condensation open set condition on the [cosc] rectangle");
  verify->add_flag("--kappa", flags.kappa, "Kappa condition over the [kappa] scales");
  verify->add_flag("--projection", flags.projection, "Minimum projection length of C");
  render->add_option("--j", raw.render_j, "Render scale j (defaults to --jmax)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return affdim::kExitError;
  }

  try {
    if (raw.jmax) flags.j_max = raw.jmax;
    if (raw.kmax) flags.k_max = raw.kmax;
    if (raw.budget) flags.budget = raw.budget;
    if (raw.tol >= 0.0) flags.tol = raw.tol;
    if (raw.seed) flags.seed = raw.seed;
    if (!raw.window.empty()) flags.window = affdim::parse_window(raw.window);
    if (raw.render_j) flags.render_j = raw.render_j;
    flags.target = affdim::parse_target(raw.target);

    const auto* chosen = app.get_subcommands().front();
    const affdim::RunConfig cfg = affdim::load_config(raw.config_path);
    return affdim::run_subcommand(chosen->get_name(), cfg, flags, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return affdim::kExitError;
  }
}
