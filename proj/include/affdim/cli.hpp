#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include "affdim/box_dim.hpp"
#include "affdim/config.hpp"

namespace affdim {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitVerifyFail = 2;

/// Command-line overrides; unset fields keep the config's values.
struct CliFlags {
  std::optional<int> j_max;
  std::optional<int> k_max;
  std::optional<std::uint64_t> budget;  // caps both leaves and words
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::optional<ScaleWindow> window;
  std::optional<int> render_j;
  std::string out_dir = ".";
  int angles = 720;
  int threads = 0;
  bool serial = false;
  Target target = Target::FC;
  bool sandwich = false;
  bool cosc = false;
  bool kappa = false;
  bool projection = false;
};

/// Runs one of affinity, attract, boxdim, verify, render. Artifacts go to flags.out_dir
/// (created if missing); a summary goes to `out`, diagnostics to `err`.
/// Returns 0 on success, 2 when a verification check fails and 1 on error.
int run_subcommand(const std::string& name, RunConfig config, const CliFlags& flags, std::ostream& out,
                   std::ostream& err);

}  // namespace affdim
