// Command-line front end: validates coefficient triples, tabulates gauges,
// runs simulations, certifies the Harnack quantity, spot-checks the
// integrated estimate and measures traveling fronts.
//
// Exit codes: 0 all checks passed, 1 invalid input or configuration,
// 2 an inequality check failed beyond tolerance, 3 numerical failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "nwlab/nwlab.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace nwlab;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_invalid = 1;
constexpr int exit_violated = 2;
constexpr int exit_numerical = 3;

int exit_code_for(errc c) {
  switch (c) {
    case errc::positivity_lost:
    case errc::non_finite_state:
    case errc::not_converged:
    case errc::level_not_crossed:
    case errc::front_left_window:
      return exit_numerical;
    default:
      return exit_invalid;
  }
}

struct check_line {
  std::string name;
  bool pass = false;
  double worst = 0.0;
  double tolerance = 0.0;
};

void print_check(const check_line& c) {
  std::printf("%s %s: worst=%s tolerance=%s\n", c.pass ? "PASS" : "FAIL",
              c.name.c_str(), format_g17(c.worst).c_str(),
              format_g17(c.tolerance).c_str());
}

void write_summary(const fs::path& dir, const std::string& command,
                   const std::vector<check_line>& checks) {
  json doc;
  doc["command"] = command;
  doc["checks"] = json::array();
  for (const check_line& c : checks) {
    json j;
    j["name"] = c.name;
    j["status"] = c.pass ? "pass" : "fail";
    j["worst"] = c.worst;
    j["tolerance"] = c.tolerance;
    doc["checks"].push_back(j);
  }
  std::ofstream out(dir / "summary.json");
  out << doc.dump(2) << "\n";
}

fs::path ensure_dir(const std::string& dir) {
  fs::path p(dir);
  fs::create_directories(p);
  return p;
}

struct triple_flags {
  double alpha = 1.0, beta = 0.0, gamma = -1.0;
  double a = 1.0, b = 1.0;
  int n = 1;

  void attach(CLI::App* cmd) {
    cmd->add_option("--alpha", alpha, "lap(log f) coefficient");
    cmd->add_option("--beta", beta, "|grad log f|^2 coefficient");
    cmd->add_option("--gamma", gamma, "f^2 coefficient");
    cmd->add_option("--a", a, "linear reaction coefficient");
    cmd->add_option("--b", b, "cubic reaction coefficient");
    cmd->add_option("--n", n, "spatial dimension");
  }

  harnack_params validated() const {
    return validate(alpha, beta, gamma, pde_params{a, b, n});
  }
};

int cmd_validate(const triple_flags& tf) {
  harnack_params hp = tf.validated();
  gauge_constants gc = derive_constants(hp);
  std::printf("valid: alpha=%s beta=%s gamma=%s branch=%s\n",
              format_g17(hp.alpha).c_str(), format_g17(hp.beta).c_str(),
              format_g17(hp.gamma).c_str(),
              hp.branch == gauge_branch::phi ? "phi" : "psi");
  std::printf("constants: omega=%s mu=%s nu=%s gamma_threshold=%s\n",
              format_g17(gc.omega).c_str(), format_g17(gc.mu).c_str(),
              format_g17(gc.nu).c_str(),
              format_g17(gamma_threshold(hp.alpha, hp.beta, hp.pde)).c_str());
  if (hp.branch == gauge_branch::psi)
    std::printf("switch_time=%s\n", format_g17(switch_time(hp)).c_str());
  std::printf("limit_at_infinity=%s\n",
              format_g17(make_gauge(hp).limit_at_infinity()).c_str());
  return exit_ok;
}

int cmd_gauge(const triple_flags& tf, double t0, double t1, int steps,
              const std::string& out_path) {
  harnack_params hp = tf.validated();
  if (!(t0 > 0.0)) fail(errc::non_positive_time, "--t0 must be positive");
  if (!(t1 > t0)) fail(errc::bad_time_order, "--t1 must exceed --t0");
  if (steps < 2) fail(errc::constraint_violation, "--steps must be >= 2");
  time_gauge g = make_gauge(hp);
  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) fail(errc::constraint_violation, "cannot open " + out_path);
    os = &file;
  }
  *os << "t,value,derivative,ode_residual\n";
  for (int i = 0; i < steps; ++i) {
    double t = t0 + (t1 - t0) * i / (steps - 1);
    *os << format_g17(t) << "," << format_g17(g.value(t)) << ","
        << format_g17(g.derivative(t)) << "," << format_g17(g.ode_residual(t))
        << "\n";
  }
  return exit_ok;
}

void write_snapshot_file(const field& f, const fs::path& path) {
  std::ofstream out(path);
  write_snapshot(f, out);
}

int cmd_simulate(const std::string& config_path) {
  run_config rc = load_config(config_path);
  trajectory traj = evolve(rc.solver);
  fs::path dir = ensure_dir(rc.output_dir);
  char name[32];
  for (size_t k = 0; k < traj.snapshots.size(); ++k) {
    std::snprintf(name, sizeof name, "snapshot_%06zu.csv", k);
    write_snapshot_file(traj.snapshots[k], dir / name);
  }
  json manifest;
  manifest["dt_used"] = traj.dt_used;
  manifest["snapshots"] = traj.snapshots.size();
  manifest["points"] = rc.solver.grid.points;
  manifest["dim"] = rc.solver.grid.dim;
  manifest["extent"] = rc.solver.grid.extent;
  manifest["t_end"] = rc.solver.t_end;
  manifest["snapshot_interval"] = rc.solver.snapshot_interval;
  std::ofstream mout(dir / "manifest.json");
  mout << manifest.dump(2) << "\n";
  std::printf("wrote %zu snapshots to %s (dt=%s)\n", traj.snapshots.size(),
              dir.string().c_str(), format_g17(traj.dt_used).c_str());
  return exit_ok;
}

int cmd_certify(const std::string& config_path) {
  run_config rc = load_config(config_path);
  harnack_params hp = config_params(rc);
  trajectory traj = evolve(rc.solver);
  certify_report rep = certify(traj, hp, rc.t_min, rc.tolerance);
  fs::path dir = ensure_dir(rc.output_dir);

  std::ofstream csv(dir / "certify.csv");
  csv << "t,min_h,argmin,gauge\n";
  for (const certify_record& r : rep.records)
    csv << format_g17(r.t) << "," << format_g17(r.min_value) << "," << r.argmin
        << "," << format_g17(r.gauge_value) << "\n";
  if (!rep.violations.empty()) {
    std::ofstream vio(dir / "violations.csv");
    vio << "t,node,h\n";
    for (const certify_violation& v : rep.violations)
      vio << format_g17(v.t) << "," << v.node << "," << format_g17(v.value)
          << "\n";
  }
  check_line line{"harnack_nonnegative", rep.pass(), rep.worst, rc.tolerance};
  print_check(line);
  write_summary(dir, "certify", {line});
  return line.pass ? exit_ok : exit_violated;
}

int cmd_classical(const std::string& config_path, int queries, uint64_t seed,
                  double min_gap) {
  run_config rc = load_config(config_path);
  if (queries < 1) fail(errc::constraint_violation, "--queries must be >= 1");
  trajectory traj = evolve(rc.solver);
  auto qs = random_queries(traj, queries, seed, min_gap);
  auto results = classical_check(traj, qs, rc.tolerance);
  fs::path dir = ensure_dir(rc.output_dir);

  std::ofstream csv(dir / "classical.csv");
  csv << "x1,t1,x2,t2,log_ratio,log_bound,slack,status\n";
  double worst = std::numeric_limits<double>::infinity();
  bool all_pass = true;
  for (const classical_result& r : results) {
    worst = std::min(worst, r.slack);
    all_pass = all_pass && r.pass;
    csv << format_g17(r.query.x1[0]) << "," << format_g17(r.query.t1) << ","
        << format_g17(r.query.x2[0]) << "," << format_g17(r.query.t2) << ","
        << format_g17(r.log_ratio) << "," << format_g17(r.log_bound) << ","
        << format_g17(r.slack) << "," << (r.pass ? "pass" : "fail") << "\n";
  }
  check_line line{"classical_lower_bound", all_pass, worst, rc.tolerance};
  print_check(line);
  write_summary(dir, "classical", {line});
  return all_pass ? exit_ok : exit_violated;
}

int cmd_wave_profile(double a, double b, double eta, double half_width,
                     double tol, const std::string& out_path) {
  pde_params p{a, b, 1};
  auto prof = shoot_profile(p, eta, half_width, tol);
  if (!prof) {
    std::printf("no_connection: eta=%s admits no monotone positive front "
                "(threshold eta^2 >= 4a/3, monotone for eta^2 >= 4a)\n",
                format_g17(eta).c_str());
    return exit_ok;
  }
  if (!out_path.empty()) {
    std::ofstream csv(out_path);
    csv << "xi,v,dv,residual\n";
    auto res = profile_residual(*prof, p);
    for (size_t i = 1; i + 1 < prof->v.size(); ++i) {
      double dv = (prof->v[i + 1] - prof->v[i - 1]) / (2.0 * prof->spacing);
      csv << format_g17(prof->xi[i]) << "," << format_g17(prof->v[i]) << ","
          << format_g17(dv) << "," << format_g17(res[i]) << "\n";
    }
  }
  speed_bound_check sb = check_speed_bound(eta, p);
  gradient_bound_check gb = check_gradient_bound(*prof);
  check_line l1{"wavespeed_bound", sb.pass, sb.margin, 0.0};
  check_line l2{"gradient_bound", gb.pass, gb.max_ratio, 1e-3};
  print_check(l1);
  print_check(l2);
  std::printf("profile: %zu samples, v in [%s, %s]\n", prof->v.size(),
              format_g17(prof->v.front()).c_str(),
              format_g17(prof->v.back()).c_str());
  return (sb.pass && gb.pass) ? exit_ok : exit_violated;
}

int cmd_wave_speed(const std::string& config_path, double level,
                   double center_frac) {
  run_config rc = load_config(config_path);
  if (rc.solver.grid.dim != 1)
    fail(errc::constraint_violation, "wave-speed runs on 1d grids");
  if (!(center_frac > 0.0) || !(center_frac < 1.0))
    fail(errc::constraint_violation, "--center-frac must lie in (0, 1)");

  // start from the closed-form front centered at center_frac * extent
  field f0 = make_field(rc.solver.grid);
  double x0 = center_frac * rc.solver.grid.extent;
  for (int i = 0; i < rc.solver.grid.points; ++i)
    f0.samples[i] = exact_front_value(rc.pde, rc.solver.grid.coord(i) - x0);

  solver_config sc = rc.solver;
  sc.init = init_constant{1.0};  // placeholder; we integrate f0 directly
  check_solver_config(sc);
  double f_max = std::max(max_abs(f0), equilibrium(rc.pde));
  double dt_bound = stable_dt(sc.grid, sc.pde, f_max, sc.cfl_safety);
  int per_snap = static_cast<int>(std::ceil(sc.snapshot_interval / dt_bound));
  double dt = sc.snapshot_interval / per_snap;
  int snaps = static_cast<int>(std::floor(sc.t_end / sc.snapshot_interval + 1e-9));
  trajectory traj{sc, dt, {}};
  traj.snapshots.push_back(f0);
  field f = f0;
  for (int s = 1; s <= snaps; ++s) {
    for (int k = 0; k < per_snap; ++k) rk4_step(f, sc.pde, dt);
    f.time = s * sc.snapshot_interval;
    traj.snapshots.push_back(f);
  }

  double eq = equilibrium(rc.pde);
  if (level <= 0.0) level = 0.5 * eq;
  double speed = measure_front_speed(traj, level);
  double eta_exact = 3.0 * std::sqrt(rc.pde.a / 2.0);
  double rel = std::abs(std::abs(speed) - eta_exact) / eta_exact;
  speed_bound_check sb = check_speed_bound(speed, rc.pde);
  gradient_bound_check gb = check_gradient_bound(exact_front(rc.pde));

  fs::path dir = ensure_dir(rc.output_dir);
  std::ofstream csv(dir / "wave_speed.csv");
  csv << "measured_speed,eta_exact,rel_deviation,speed_margin,gradient_ratio\n";
  csv << format_g17(speed) << "," << format_g17(eta_exact) << ","
      << format_g17(rel) << "," << format_g17(sb.margin) << ","
      << format_g17(gb.max_ratio) << "\n";

  check_line l1{"wavespeed_bound", sb.pass, sb.margin, 0.0};
  check_line l2{"gradient_bound", gb.pass, gb.max_ratio, 1e-3};
  print_check(l1);
  print_check(l2);
  std::printf("measured_speed=%s eta_exact=%s rel_deviation=%s\n",
              format_g17(speed).c_str(), format_g17(eta_exact).c_str(),
              format_g17(rel).c_str());
  write_summary(dir, "wave-speed", {l1, l2});
  return (sb.pass && gb.pass) ? exit_ok : exit_violated;
}

int cmd_steady(const std::string& config_path, double residual_tol,
               double t_max) {
  run_config rc = load_config(config_path);
  if (t_max <= 0.0) t_max = rc.solver.t_end;
  field f = relax_steady(rc.solver, residual_tol, t_max);
  double eq = equilibrium(rc.pde);
  double dev = 0.0;
  for (double s : f.samples) dev = std::max(dev, std::abs(s - eq));
  fs::path dir = ensure_dir(rc.output_dir);
  write_snapshot_file(f, dir / "steady.csv");
  // Once max |f_t| <= residual_tol, the linearization about the constant
  // state (spectral gap 2a on the torus) bounds the remaining distance to
  // sqrt(a/b) by residual_tol / (2a); allow 2x headroom for nonlinearity.
  double gap_tol = residual_tol / rc.pde.a;
  check_line line{"relaxed_to_equilibrium", dev <= gap_tol, dev, gap_tol};
  std::printf("converged at t=%s, max |f - sqrt(a/b)| = %s\n",
              format_g17(f.time).c_str(), format_g17(dev).c_str());
  print_check(line);
  write_summary(dir, "steady", {line});
  return line.pass ? exit_ok : exit_violated;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for f_t = lap f + a f - b f^3"};
  app.require_subcommand(1);

  triple_flags tf;
  auto* validate_cmd = app.add_subcommand(
      "validate", "check a coefficient triple and report its gauge branch");
  tf.attach(validate_cmd);

  triple_flags gf;
  double g_t0 = 0.05, g_t1 = 10.0;
  int g_steps = 500;
  std::string g_out;
  auto* gauge_cmd =
      app.add_subcommand("gauge", "tabulate the gauge as CSV (t, value, "
                                  "derivative, ode_residual)");
  gf.attach(gauge_cmd);
  gauge_cmd->add_option("--t0", g_t0, "first sample time (> 0)");
  gauge_cmd->add_option("--t1", g_t1, "last sample time");
  gauge_cmd->add_option("--steps", g_steps, "number of samples");
  gauge_cmd->add_option("--out", g_out, "output file (default stdout)");

  std::string sim_cfg;
  auto* sim_cmd = app.add_subcommand("simulate", "run and write snapshots");
  sim_cmd->add_option("--config", sim_cfg, "JSON run configuration")->required();

  std::string cert_cfg;
  auto* cert_cmd = app.add_subcommand(
      "certify", "evolve and certify the Harnack quantity stays >= -tolerance");
  cert_cmd->add_option("--config", cert_cfg, "JSON run configuration")->required();

  std::string cls_cfg;
  int cls_queries = 100;
  uint64_t cls_seed = 12345;
  double cls_gap = 0.1;
  auto* cls_cmd = app.add_subcommand(
      "classical", "spot-check the integrated Harnack lower bound");
  cls_cmd->add_option("--config", cls_cfg, "JSON run configuration")->required();
  cls_cmd->add_option("--queries", cls_queries, "number of random queries");
  cls_cmd->add_option("--seed", cls_seed, "query generator seed");
  cls_cmd->add_option("--min-gap", cls_gap, "minimum t2 - t1");

  double wp_a = 1.0, wp_b = 1.0, wp_eta = 2.5, wp_hw = 0.0, wp_tol = 1e-9;
  std::string wp_out;
  auto* wp_cmd = app.add_subcommand(
      "wave-profile", "shoot a traveling front profile for a given eta");
  wp_cmd->add_option("--a", wp_a, "linear reaction coefficient");
  wp_cmd->add_option("--b", wp_b, "cubic reaction coefficient");
  wp_cmd->add_option("--eta", wp_eta, "wavespeed parameter")->required();
  wp_cmd->add_option("--half-width", wp_hw, "xi budget (0 = auto)");
  wp_cmd->add_option("--tol", wp_tol, "tail termination threshold");
  wp_cmd->add_option("--out", wp_out, "profile CSV path");

  std::string ws_cfg;
  double ws_level = 0.0, ws_frac = 0.75;
  auto* ws_cmd = app.add_subcommand(
      "wave-speed", "evolve the closed-form front and measure its speed");
  ws_cmd->add_option("--config", ws_cfg, "JSON run configuration")->required();
  ws_cmd->add_option("--level", ws_level,
                     "tracked contour (default sqrt(a/b)/2)");
  ws_cmd->add_option("--center-frac", ws_frac,
                     "initial front position as a fraction of extent");

  std::string st_cfg;
  double st_tol = 1e-7, st_tmax = 0.0;
  auto* st_cmd = app.add_subcommand(
      "steady", "relax to a steady state and report the equilibrium gap");
  st_cmd->add_option("--config", st_cfg, "JSON run configuration")->required();
  st_cmd->add_option("--residual-tol", st_tol, "max |rhs| at convergence");
  st_cmd->add_option("--t-max", st_tmax, "time budget (0 = config t_end)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_invalid;
  }

  try {
    if (validate_cmd->parsed()) return cmd_validate(tf);
    if (gauge_cmd->parsed()) return cmd_gauge(gf, g_t0, g_t1, g_steps, g_out);
    if (sim_cmd->parsed()) return cmd_simulate(sim_cfg);
    if (cert_cmd->parsed()) return cmd_certify(cert_cfg);
    if (cls_cmd->parsed())
      return cmd_classical(cls_cfg, cls_queries, cls_seed, cls_gap);
    if (wp_cmd->parsed())
      return cmd_wave_profile(wp_a, wp_b, wp_eta, wp_hw, wp_tol, wp_out);
    if (ws_cmd->parsed()) return cmd_wave_speed(ws_cfg, ws_level, ws_frac);
    if (st_cmd->parsed()) return cmd_steady(st_cfg, st_tol, st_tmax);
  } catch (const error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_numerical;
  }
  return exit_invalid;
}
