// Acceptance run: one [PASS]/[FAIL] line per criterion with the measured values and wall time.
// Usage: acceptance [output-dir]. Exit status is nonzero if any blocking criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "affdim/affinity.hpp"
#include "affdim/box_dim.hpp"
#include "affdim/cli.hpp"
#include "affdim/config.hpp"
#include "affdim/error.hpp"
#include "affdim/verify.hpp"

using namespace affdim;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances and limits.
constexpr double kSimilarityTol = 1e-6;
constexpr double kMonotoneSlack = 1e-6;
constexpr double kCircleLo = 0.95, kCircleHi = 1.05;
constexpr double kSingletonHi = 0.1;
constexpr double kFcVsAffinity = 0.1;
constexpr double kFcFloor = 1.05;
constexpr double kRandomSandwichTol = 0.15;
constexpr int kRandomSystems = 50;
constexpr int kRandomRequired = 48;
constexpr std::uint64_t kRandomSeed = 20240917;
constexpr double kKappaFloor = 0.01;
constexpr double kKappaOctaveRatio = 4.0;
constexpr double kPointKappaDrop = 0.1;
constexpr int kProjectionAngles = 720;
constexpr double kProjectionTol = 0.02;

fs::path g_out;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

std::string config(const char* name) { return std::string(AFFDIM_CONFIG_DIR) + "/" + name; }

std::map<std::string, std::string> read_report(const fs::path& p) {
  std::map<std::string, std::string> out;
  std::ifstream f(p);
  std::string line;
  while (std::getline(f, line)) {
    const auto eq = line.find(" = ");
    if (eq != std::string::npos) out[line.substr(0, eq)] = line.substr(eq + 3);
  }
  return out;
}

struct CliRun {
  int code = -1;
  fs::path dir;
  std::map<std::string, std::string> report;
  std::string out;
  std::string err;
};

CliRun run(const std::string& cmd, const RunConfig& cfg, CliFlags flags, const std::string& dir) {
  CliRun r;
  r.dir = g_out / dir;
  flags.out_dir = r.dir.string();
  std::ostringstream out, err;
  r.code = run_subcommand(cmd, cfg, flags, out, err);
  r.out = out.str();
  r.err = err.str();
  if (fs::exists(r.dir / "report.txt")) r.report = read_report(r.dir / "report.txt");
  return r;
}

double num(const CliRun& r, const std::string& key) {
  const auto it = r.report.find(key);
  if (it == r.report.end()) throw Error("report in " + r.dir.string() + " lacks key '" + key + "'");
  return std::stod(it->second);
}

std::string text(const CliRun& r, const std::string& key) {
  const auto it = r.report.find(key);
  return it == r.report.end() ? std::string("-") : it->second;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

double g_affinity_upper = std::nan("");

Outcome ac1() {
  const RunConfig cfg = load_config(config("similarity3.cfg"));
  const CliRun r = run("affinity", cfg, {}, "ac1");
  if (r.code != kExitOk) return {false, "exit " + std::to_string(r.code) + ": " + r.err};
  const double target = std::log(3.0) / std::log(2.0);
  double worst = 0.0;
  for (int k = 1; k <= 8; ++k) worst = std::max(worst, std::abs(num(r, "s_k." + std::to_string(k)) - target));
  return {worst <= kSimilarityTol, "max_k<=8 |s_k - log3/log2| = " + fmt("%.2e", worst)};
}

Outcome ac2() {
  const RunConfig cfg = load_config(config("paper_example.cfg"));
  const CliRun r = run("affinity", cfg, {}, "ac2");
  if (r.code != kExitOk) return {false, "exit " + std::to_string(r.code) + ": " + r.err};
  const double a1 = (1.0 + std::sqrt(5.0)) / 4.0;
  const double a2 = (std::sqrt(5.0) - 1.0) / 4.0;
  const double s1 = 1.0 + std::log(1.0 / (2.0 * a1)) / std::log(a2);
  const int kmax = static_cast<int>(num(r, "k_max"));
  bool monotone = true;
  for (int k = 2; k <= kmax; ++k) {
    monotone = monotone && num(r, "s_k." + std::to_string(k)) <= num(r, "s_k." + std::to_string(k - 1)) + kMonotoneSlack;
  }
  const double upper = num(r, "upper_bound");
  g_affinity_upper = upper;
  const bool in_range = upper > 1.0 && upper <= s1 + 1e-12 && kmax == 12;
  return {in_range && monotone, "min s_k (k<=" + std::to_string(kmax) + ") = " + fmt("%.7f", upper) + " in (1, " +
                                    fmt("%.7f", s1) + "], non-increasing: " + (monotone ? "yes" : "no")};
}

Outcome ac3() {
  RunConfig cfg = load_config(config("paper_example.cfg"));
  cfg.j_min = 4;
  cfg.j_max = 11;
  double dim[3] = {};
  const Target targets[3] = {Target::C, Target::F0, Target::FC};
  for (int i = 0; i < 3; ++i) {
    CliFlags f;
    f.target = targets[i];
    const CliRun r = run("boxdim", cfg, f, std::string("ac3_") + target_name(targets[i]));
    if (r.code != kExitOk) return {false, std::string(target_name(targets[i])) + ": " + r.err};
    dim[i] = num(r, "dim.ols_slope");
  }
  if (std::isnan(g_affinity_upper)) g_affinity_upper = affinity_estimate(cfg.ifs(), 12).upper;
  const bool ok = dim[0] >= kCircleLo && dim[0] <= kCircleHi && dim[1] >= 0.0 && dim[1] <= kSingletonHi &&
                  std::abs(dim[2] - g_affinity_upper) <= kFcVsAffinity && dim[2] > kFcFloor;
  return {ok, "dim_C = " + fmt("%.4f", dim[0]) + ", dim_F0 = " + fmt("%.4f", dim[1]) + ", dim_FC = " +
                  fmt("%.4f", dim[2]) + " (affinity bound " + fmt("%.4f", g_affinity_upper) + ")"};
}

// Random planar 2-map systems: matrix entries 0.6·U(−1,1) with α_1 ≤ 0.6 and α_2 ≥ 0.05,
// translations and segment endpoints U(−1,1).
std::vector<RunConfig> random_systems() {
  std::mt19937_64 rng(kRandomSeed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<RunConfig> out;
  while (static_cast<int>(out.size()) < kRandomSystems) {
    RunConfig cfg;
    cfg.seed = kRandomSeed;
    cfg.sandwich_tol = kRandomSandwichTol;
    for (int m = 0; m < 2; ++m) {
      Matrix a(2);
      while (true) {
        for (int r = 0; r < 2; ++r)
          for (int c = 0; c < 2; ++c) a(r, c) = 0.6 * u(rng);
        if (std::abs(a.determinant()) < 1e-9) continue;
        const auto s = singular_values(a);
        if (s.largest() <= 0.6 && s.smallest() >= 0.05) break;
      }
      const Vector t{u(rng), u(rng)};
      cfg.maps.emplace_back(a, t);
    }
    const Vector p{u(rng), u(rng)};
    const Vector q{u(rng), u(rng)};
    cfg.condensation = {Segment{p, q}};
    out.push_back(std::move(cfg));
  }
  return out;
}

Outcome ac4() {
  int passed = 0, failed = 0, errors = 0;
  std::string notes;
  const auto systems = random_systems();
  for (std::size_t i = 0; i < systems.size(); ++i) {
    CliFlags f;
    f.sandwich = true;
    const CliRun r = run("verify", systems[i], f, "ac4/system_" + std::to_string(i));
    if (r.code == kExitOk) {
      ++passed;
    } else if (r.code == kExitVerifyFail) {
      ++failed;
      notes += " #" + std::to_string(i) + "(FC " + fmt("%.3f", num(r, "sandwich.dim_FC.ols_slope")) + ", FC pairs " +
               fmt("%.3f", num(r, "sandwich.dim_FC.lower_proxy")) + ".." +
               fmt("%.3f", num(r, "sandwich.dim_FC.upper_proxy")) + ")";
    } else {
      ++errors;
      notes += " #" + std::to_string(i) + " error: " + r.err;
    }
  }
  return {passed >= kRandomRequired && errors == 0,
          std::to_string(passed) + "/" + std::to_string(kRandomSystems) + " pass at tol " + fmt("%.2f", kRandomSandwichTol) +
              ", " + std::to_string(errors) + " errors" + (notes.empty() ? "" : ";" + notes)};
}

Outcome ac5() {
  CliFlags f;
  f.cosc = true;
  const CliRun good = run("verify", load_config(config("paper_example.cfg")), f, "ac5_example");
  const CliRun bad = run("verify", load_config(config("paper_example_shifted.cfg")), f, "ac5_shifted");
  const bool ok = good.code == kExitOk && text(good, "cosc.holds") == "true" && bad.code == kExitVerifyFail &&
                  text(bad, "cosc.holds") == "false";
  return {ok, "worked example: holds = " + text(good, "cosc.holds") + " (eta " + text(good, "cosc.eta") +
                  "); shifted circle: holds = " + text(bad, "cosc.holds") + ", clause " + text(bad, "cosc.clause") +
                  " at " + text(bad, "cosc.witness")};
}

Outcome ac6() {
  const RunConfig cfg = load_config(config("paper_example.cfg"));
  std::vector<double> deltas;
  for (int j = 4; j <= 10; ++j) deltas.push_back(std::ldexp(1.0, -j));
  const KappaReport k = kappa_condition(cfg.system(), deltas);
  double worst_octave = 1.0;
  std::string minima;
  for (std::size_t i = 0; i < k.per_delta.size(); ++i) {
    minima += (i ? "," : "") + fmt("%.3f", k.per_delta[i].min_ratio);
    if (i > 0) {
      const double a = k.per_delta[i - 1].min_ratio, b = k.per_delta[i].min_ratio;
      worst_octave = std::max(worst_octave, std::max(a, b) / std::min(a, b));
    }
  }
  RunConfig point = cfg;
  point.condensation = {PointCloud{{Vector{0.75, 0.75}}}};
  const KappaReport kp = kappa_condition(point.system(), {deltas.front(), deltas.back()});
  const double drop = kp.per_delta[1].min_ratio / kp.per_delta[0].min_ratio;
  const bool ok = k.kappa_floor > kKappaFloor && worst_octave < kKappaOctaveRatio && drop < kPointKappaDrop;
  return {ok, "floor = " + fmt("%.4f", k.kappa_floor) + " (minima " + minima + "), worst octave ratio " +
                  fmt("%.3f", worst_octave) + "; point C: " + fmt("%.4f", kp.per_delta[0].min_ratio) + " -> " +
                  fmt("%.5f", kp.per_delta[1].min_ratio) + " (x" + fmt("%.4f", drop) + ")"};
}

Outcome ac7() {
  const CondensationSet circle(2, {Circle{Vector{0.75, 0.75}, 0.2}});
  const CondensationSet segment(2, {Segment{Vector{0.0, 0.0}, Vector{1.0, 0.0}}});
  const CondensationSet l_shape(2, {Segment{Vector{0.0, 0.0}, Vector{1.0, 0.0}}, Segment{Vector{0.0, 0.0}, Vector{0.0, 1.0}}});
  const double c = projection_measure_min(circle, kProjectionAngles);
  const double s = projection_measure_min(segment, kProjectionAngles);
  const double l = projection_measure_min(l_shape, kProjectionAngles);
  const bool ok = std::abs(c - 0.40) <= kProjectionTol && s < kProjectionTol &&
                  std::abs(l - std::numbers::sqrt2 / 2.0) <= kProjectionTol;
  return {ok, "circle " + fmt("%.5f", c) + ", segment " + fmt("%.5f", s) + ", L-shape " + fmt("%.5f", l)};
}

// Property suites: each returns an empty string on success or a description of the first failure.
std::string submultiplicativity() {
  std::mt19937_64 rng(81);
  std::uniform_real_distribution<double> u(-1.0, 1.0), su(0.0, 3.5);
  for (int i = 0; i < 10000; ++i) {
    const int n = 2 + i % 2;
    Matrix a(n), b(n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) {
        a(r, c) = u(rng);
        b(r, c) = u(rng);
      }
    if (std::abs(a.determinant()) < 1e-6 || std::abs(b.determinant()) < 1e-6) continue;
    const double s = su(rng);
    if (phi_s(a * b, s) > phi_s(a, s) * phi_s(b, s) * (1.0 + 1e-10)) return "pair " + std::to_string(i);
  }
  return {};
}

std::string stoppings() {
  std::mt19937_64 rng(82);
  std::uniform_real_distribution<double> u(-1.0, 1.0), logd(std::log(1e-3), std::log(0.5));
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 2 + trial % 2;
    std::vector<AffineMap> maps;
    for (int m = 0; m < 2; ++m) {
      Matrix a(n);
      while (true) {
        for (int r = 0; r < n; ++r)
          for (int c = 0; c < n; ++c) a(r, c) = 0.7 * u(rng);
        if (std::abs(a.determinant()) < 1e-6) continue;
        const auto s = singular_values(a);
        if (s.largest() <= 0.7 && s.smallest() >= 0.2) break;
      }
      Vector t(n);
      for (int r = 0; r < n; ++r) t[r] = u(rng);
      maps.emplace_back(a, t);
    }
    const Ifs ifs(maps);
    const double delta = std::exp(logd(rng));
    const int m = 1 + trial % n;
    const auto st = stopping_set(ifs, m, delta);
    const double b = ifs.min_alpha_n() * (1.0 - 1e-12);
    for (const auto& w : st.words) {
      const double a = alpha_of_word(ifs, w, m);
      if (!(a < delta && a >= b * delta && alpha_of_word(ifs, w.parent(), m) >= delta)) {
        return "sandwich, trial " + std::to_string(trial) + " word " + w.to_string();
      }
    }
    for (std::size_t i = 0; i + 1 < st.words.size(); ++i) {
      if (st.words[i].is_prefix_of(st.words[i + 1])) return "prefix-free, trial " + std::to_string(trial);
    }
    std::uniform_int_distribution<Word::Letter> letter(0, 1);
    for (int s = 0; s < 10; ++s) {
      std::vector<Word::Letter> seq(64);
      for (auto& l : seq) l = letter(rng);
      const Word infinite(seq);
      const auto hits = std::count_if(st.words.begin(), st.words.end(), [&](const Word& w) { return w.is_prefix_of(infinite); });
      if (hits != 1) return "partition, trial " + std::to_string(trial);
    }
  }
  return {};
}

std::string count_invariants() {
  const System s = normalize(load_config(config("paper_example.cfg")).system()).system;
  for (Target t : {Target::C, Target::F0, Target::FC}) {
    const CountCurve c = target_curve(s, t, 4, 10);
    try {
      check_count_curve(c);
    } catch (const InvariantViolation& e) {
      return e.what();
    }
    CountCurve broken = c;
    broken.samples[3].count = broken.samples[2].count * 5;
    try {
      check_count_curve(broken);
      return "tampered curve accepted";
    } catch (const InvariantViolation&) {
    }
  }
  return {};
}

std::string raster_determinism() {
  const RunConfig cfg = load_config(config("paper_example.cfg"));
  std::string reference;
  for (int threads : {1, 2, 8}) {
    CliFlags f;
    f.threads = threads;
    f.render_j = 10;
    const CliRun r = run("render", cfg, f, "ac8_render_t" + std::to_string(threads));
    if (r.code != kExitOk) return r.err;
    const std::string pgm = slurp(r.dir / "render.pgm");
    if (reference.empty()) reference = pgm;
    if (pgm != reference) return "PGM differs with " + std::to_string(threads) + " workers";
  }
  return {};
}

Outcome ac8() {
  std::string detail;
  bool ok = true;
  const std::pair<const char*, std::function<std::string()>> suites[] = {
      {"submultiplicativity", submultiplicativity},
      {"stoppings", stoppings},
      {"count invariants", count_invariants},
      {"raster determinism 1/2/8", raster_determinism},
  };
  for (const auto& [name, fn] : suites) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::string failure = fn();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    ok = ok && failure.empty();
    detail += std::string(detail.empty() ? "" : "; ") + name + " " + (failure.empty() ? "ok" : "FAILED: " + failure) +
              " (" + fmt("%.1f", secs) + " s)";
  }
  return {ok, detail};
}

Outcome ac9() {
  CliFlags f;
  f.render_j = 10;
  const CliRun r = run("render", load_config(config("paper_example.cfg")), f, "ac9");
  if (r.code != kExitOk) return {false, r.err};
  return {true, "non-blocking; " + text(r, "cells") + " cells at 2^-10 written to " + (r.dir / "render.pgm").string() +
                    " for visual comparison"};
}

}  // namespace

int main(int argc, char** argv) {
  g_out = argc > 1 ? fs::path(argv[1]) : fs::path("acceptance_out");
  fs::create_directories(g_out);

  struct Criterion {
    const char* id;
    const char* name;
    double limit_s;  // 0: no time limit
    bool blocking;
    Outcome (*fn)();
  };
  const Criterion criteria[] = {
      {"AC1", "similarity oracle", 10.0, true, ac1},
      {"AC2", "worked example affinity bound", 120.0, true, ac2},
      {"AC3", "worked example dimensions", 300.0, true, ac3},
      {"AC4", "randomized sandwich", 0.0, true, ac4},
      {"AC5", "condensation open set condition", 5.0, true, ac5},
      {"AC6", "kappa condition", 0.0, true, ac6},
      {"AC7", "projection measure", 0.0, true, ac7},
      {"AC8", "property suites", 120.0, true, ac8},
      {"AC9", "render at 2^-10", 0.0, false, ac9},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit_s > 0.0 && secs >= c.limit_s) {
      o.pass = false;
      o.detail += "; exceeded " + fmt("%.0f", c.limit_s) + " s";
    }
    if (!o.pass && c.blocking) ++failures;
    std::printf("[%s] %s %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d blocking criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
