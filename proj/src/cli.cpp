#include "affdim/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "affdim/affinity.hpp"
#include "affdim/error.hpp"
#include "affdim/io.hpp"
#include "affdim/verify.hpp"

namespace affdim {

namespace {

namespace fs = std::filesystem;

struct Context {
  RunConfig cfg;
  Exec exec;
  fs::path dir;
  std::ostream& out;

  std::string path(const std::string& name) const { return (dir / name).string(); }
  GenOptions gen() const { return {cfg.word_budget, exec}; }
  PressureOptions pressure() const { return {cfg.leaf_budget, exec}; }
};

std::string fixed6(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

void apply_flags(RunConfig& cfg, const CliFlags& f) {
  if (f.j_max) {
    cfg.j_max = *f.j_max;
    if (cfg.j_max < cfg.j_min + 3) cfg.j_min = std::max(1, cfg.j_max - 7);
  }
  if (f.k_max) cfg.k_max = *f.k_max;
  if (f.budget) {
    cfg.leaf_budget = *f.budget;
    cfg.word_budget = *f.budget;
  }
  if (f.tol) cfg.sandwich_tol = *f.tol;
  if (f.seed) cfg.seed = *f.seed;
  if (f.window) cfg.window = f.window;
  if (cfg.j_max < cfg.j_min + 3 || cfg.j_min < 1) throw DomainError("--jmax must be at least 4");
  if (cfg.k_max < 1) throw DomainError("--kmax must be at least 1");
  if (f.angles < 4) throw DomainError("--angles must be at least 4");
  if (cfg.window && (cfg.window->lo < cfg.j_min || cfg.window->hi > cfg.j_max)) {
    throw DomainError("--window must lie inside [" + std::to_string(cfg.j_min) + ", " + std::to_string(cfg.j_max) + "]");
  }
}

void add_common(Report& r, const std::string& command, const RunConfig& cfg) {
  r.add("command", command);
  r.add("maps", static_cast<std::int64_t>(cfg.maps.size()));
  r.add("dim", cfg.dim);
  r.add("seed", cfg.seed);
}

int cmd_affinity(Context& ctx) {
  const auto est = affinity_estimate(ctx.cfg.ifs(), ctx.cfg.k_max, ctx.pressure());
  Report r;
  add_common(r, "affinity", ctx.cfg);
  r.add("k_max", est.k_max);
  std::string csv = "k,s_k\n";
  for (const auto& [k, s] : est.sequence) {
    r.add("s_k." + std::to_string(k), s);
    csv += std::to_string(k) + "," + format_g17(s) + "\n";
  }
  r.add("upper_bound", est.upper);
  r.add("extrapolated", est.extrapolated);
  r.add("convergence", est.convergence);
  write_file(ctx.path("report.txt"), r.text());
  write_file(ctx.path("affinity.csv"), csv);
  ctx.out << "affinity dimension UPPER-BOUND (min s_k, k <= " << est.k_max << ") = " << fixed6(est.upper) << "\n";
  ctx.out << "affinity dimension ESTIMATE (Aitken extrapolation) = " << fixed6(est.extrapolated) << "\n";
  return kExitOk;
}

int cmd_attract(Context& ctx, Target target) {
  const NormalizedSystem ns = normalize(ctx.cfg.system());
  const double delta = std::ldexp(1.0, -ctx.cfg.j_max);
  const PointRaster raster = target_raster(ns.system, target, delta, ctx.gen());
  std::vector<Vector> original;
  original.reserve(raster.points.size());
  for (const auto& p : raster.points) original.push_back(ns.to_normalized.invert(p));
  write_file(ctx.path("points.csv"), points_csv(original));
  if (ctx.cfg.dim == 2) write_file(ctx.path("attractor.pgm"), raster_pgm(raster.grid));

  Report r;
  add_common(r, "attract", ctx.cfg);
  r.add("target", target_name(target));
  r.add("j", ctx.cfg.j_max);
  r.add("delta", delta);
  r.add("cells", static_cast<std::uint64_t>(raster.grid.count()));
  write_file(ctx.path("report.txt"), r.text());
  ctx.out << target_name(target) << ": " << raster.grid.count() << " occupied cells at delta = 2^-" << ctx.cfg.j_max << "\n";
  return kExitOk;
}

int cmd_boxdim(Context& ctx, Target target) {
  const NormalizedSystem ns = normalize(ctx.cfg.system());
  const CountCurve curve = target_curve(ns.system, target, ctx.cfg.j_min, ctx.cfg.j_max, ctx.gen());
  const DimEstimate est = estimate_dims(curve, ctx.cfg.window);
  write_file(ctx.path("counts.csv"), count_curve_csv(curve));
  Report r;
  add_common(r, "boxdim", ctx.cfg);
  r.add("target", target_name(target));
  r.add("j_range", std::to_string(ctx.cfg.j_min) + ":" + std::to_string(ctx.cfg.j_max));
  r.add_estimate("dim", est);
  write_file(ctx.path("report.txt"), r.text());
  ctx.out << "box-counting slope of " << target_name(target) << " over j = " << est.window.lo << ".." << est.window.hi
          << ": " << fixed6(est.ols_slope) << " (pair slopes " << fixed6(est.lower_proxy) << " .. "
          << fixed6(est.upper_proxy) << ")\n";
  return kExitOk;
}

bool verify_sandwich_step(Context& ctx, Report& r) {
  SandwichOptions opts;
  opts.j_min = ctx.cfg.j_min;
  opts.j_max = ctx.cfg.j_max;
  opts.window = ctx.cfg.window;
  opts.tol = ctx.cfg.sandwich_tol;
  opts.k_max = ctx.cfg.k_max;
  opts.pressure = ctx.pressure();
  opts.gen = ctx.gen();
  const BoundReport b = verify_sandwich(ctx.cfg.system(), opts);
  write_file(ctx.path("counts_C.csv"), count_curve_csv(b.curve_C));
  write_file(ctx.path("counts_F0.csv"), count_curve_csv(b.curve_F0));
  write_file(ctx.path("counts_FC.csv"), count_curve_csv(b.curve_FC));
  r.add_estimate("sandwich.dim_F0", b.dim_F0);
  r.add_estimate("sandwich.dim_C", b.dim_C);
  r.add_estimate("sandwich.dim_FC", b.dim_FC);
  r.add("sandwich.s_upper", b.s_upper);
  r.add("sandwich.slack", b.slack);
  r.add_bool("sandwich.lower_bound_ok", b.lower_bound_ok);
  r.add_bool("sandwich.upper_bound_ok", b.upper_bound_ok);
  ctx.out << "sandwich: dim_F0 = " << fixed6(b.dim_F0.ols_slope) << ", dim_C = " << fixed6(b.dim_C.ols_slope)
          << ", dim_FC = " << fixed6(b.dim_FC.ols_slope) << ", s UPPER-BOUND = " << fixed6(b.s_upper) << " -> "
          << (b.passed() ? "PASS" : "FAIL") << "\n";
  return b.passed();
}

bool verify_cosc_step(Context& ctx, Report& r) {
  if (!ctx.cfg.cosc_rect) throw DomainError("--cosc needs a [cosc] rect in the config");
  const CoscResult c = cosc_check_rect(ctx.cfg.ifs(), ctx.cfg.condensation_set(), *ctx.cfg.cosc_rect);
  r.add_bool("cosc.holds", c.holds);
  r.add("cosc.clause", std::string(clause_name(c.clause)));
  if (c.holds) r.add("cosc.eta", c.eta);
  if (c.point) r.add("cosc.witness", to_string(*c.point));
  r.add("cosc.message", c.message);
  ctx.out << "cosc: " << (c.holds ? "PASS" : "FAIL") << " (" << c.message << ")\n";
  return c.holds;
}

bool verify_kappa_step(Context& ctx, Report& r) {
  std::vector<double> deltas;
  for (int j = ctx.cfg.kappa_j_min; j <= ctx.cfg.kappa_j_max; ++j) deltas.push_back(std::ldexp(1.0, -j));
  const KappaReport k = kappa_condition(ctx.cfg.system(), deltas, {ctx.cfg.word_budget, ctx.exec});
  std::string csv = "delta,min_ratio,words,argmin\n";
  for (const auto& s : k.per_delta) {
    csv += format_g17(s.delta) + "," + format_g17(s.min_ratio) + "," + std::to_string(s.words) + ",\"" +
           s.argmin.to_string() + "\"\n";
    r.add("kappa.min_ratio." + format_g17(s.delta), s.min_ratio);
  }
  write_file(ctx.path("kappa.csv"), csv);
  const bool ok = k.kappa_floor >= ctx.cfg.kappa_min;
  r.add("kappa.floor", k.kappa_floor);
  r.add("kappa.threshold", ctx.cfg.kappa_min);
  r.add_bool("kappa.ok", ok);
  ctx.out << "kappa: floor = " << fixed6(k.kappa_floor) << " over " << deltas.size() << " scales -> "
          << (ok ? "PASS" : "FAIL") << "\n";
  return ok;
}

bool verify_projection_step(Context& ctx, Report& r, int angles) {
  const ProjectionReport p = projection_measure(ctx.cfg.condensation_set(), angles, kProjectionDelta, ctx.exec);
  std::string csv = "angle,measure\n";
  for (const auto& s : p.per_angle) csv += format_g17(s.angle) + "," + format_g17(s.measure) + "\n";
  write_file(ctx.path("projection.csv"), csv);
  const bool ok = p.min_measure >= ctx.cfg.projection_min;
  r.add("projection.angles", angles);
  r.add("projection.min_measure", p.min_measure);
  r.add("projection.argmin_angle", p.argmin_angle);
  r.add("projection.threshold", ctx.cfg.projection_min);
  r.add_bool("projection.ok", ok);
  ctx.out << "projection: min length = " << fixed6(p.min_measure) << " -> " << (ok ? "PASS" : "FAIL") << "\n";
  return ok;
}

int cmd_verify(Context& ctx, const CliFlags& f) {
  const bool any = f.sandwich || f.cosc || f.kappa || f.projection;
  Report r;
  add_common(r, "verify", ctx.cfg);
  bool ok = true;
  if (f.sandwich || !any) ok = verify_sandwich_step(ctx, r) && ok;
  if (f.cosc) ok = verify_cosc_step(ctx, r) && ok;
  if (f.kappa) ok = verify_kappa_step(ctx, r) && ok;
  if (f.projection) ok = verify_projection_step(ctx, r, f.angles) && ok;
  r.add("result", std::string(ok ? "PASS" : "FAIL"));
  write_file(ctx.path("report.txt"), r.text());
  return ok ? kExitOk : kExitVerifyFail;
}

int cmd_render(Context& ctx, const CliFlags& f) {
  if (ctx.cfg.dim != 2) throw Unsupported("render supports planar systems only");
  const int j = f.render_j.value_or(ctx.cfg.j_max);
  if (j < 1 || j > 14) throw DomainError("render scale j must lie in [1, 14]");
  const NormalizedSystem ns = normalize(ctx.cfg.system());
  const PointRaster raster = target_raster(ns.system, f.target, std::ldexp(1.0, -j), ctx.gen());
  write_file(ctx.path("render.pgm"), raster_pgm(raster.grid));
  Report r;
  add_common(r, "render", ctx.cfg);
  r.add("target", target_name(f.target));
  r.add("j", j);
  r.add("cells", static_cast<std::uint64_t>(raster.grid.count()));
  write_file(ctx.path("report.txt"), r.text());
  ctx.out << "rendered " << target_name(f.target) << " at delta = 2^-" << j << " (" << raster.grid.count()
          << " cells) to " << ctx.path("render.pgm") << "\n";
  return kExitOk;
}

}  // namespace

int run_subcommand(const std::string& name, RunConfig config, const CliFlags& flags, std::ostream& out,
                   std::ostream& err) {
  try {
    if (name != "affinity" && name != "attract" && name != "boxdim" && name != "verify" && name != "render") {
      throw DomainError("unknown subcommand '" + name + "'");
    }
    apply_flags(config, flags);
    fs::create_directories(flags.out_dir);
    Context ctx{std::move(config), flags.serial ? Exec::serial() : Exec::with_threads(flags.threads), flags.out_dir, out};
    if (name == "affinity") return cmd_affinity(ctx);
    if (name == "attract") return cmd_attract(ctx, flags.target);
    if (name == "boxdim") return cmd_boxdim(ctx, flags.target);
    if (name == "verify") return cmd_verify(ctx, flags);
    return cmd_render(ctx, flags);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace affdim
