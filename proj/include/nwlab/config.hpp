#pragma once

#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "nwlab/error.hpp"
#include "nwlab/params.hpp"
#include "nwlab/solver.hpp"

namespace nwlab {

/// Fully resolved run description: equation, certified coefficient triple,
/// grid, time window, initial data and output location. Built from a JSON
/// document by load_config; unknown keys anywhere are rejected.
struct run_config {
  pde_params pde;
  double alpha = 1.0;
  double beta = 0.0;
  double gamma = -2.0;   // preset profile for dim 1 (gamma = -2 n b alpha)
  double tolerance = 5e-3;
  double t_min = 0.05;
  solver_config solver;
  std::string output_dir = "out";
};

namespace detail {

using json = nlohmann::json;

inline void expect_keys(const json& obj, const std::set<std::string>& allowed,
                        const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      fail(errc::unknown_key, "unknown key \"" + it.key() + "\" in " + where);
}

inline double get_number(const json& obj, const std::string& key,
                         const std::string& where) {
  if (!obj.contains(key))
    fail(errc::constraint_violation, where + " is missing \"" + key + "\"");
  if (!obj[key].is_number())
    fail(errc::constraint_violation,
         "\"" + key + "\" in " + where + " must be a number");
  return obj[key].get<double>();
}

inline double get_number_or(const json& obj, const std::string& key,
                            const std::string& where, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number())
    fail(errc::constraint_violation,
         "\"" + key + "\" in " + where + " must be a number");
  return obj[key].get<double>();
}

inline int get_int(const json& obj, const std::string& key,
                   const std::string& where) {
  if (!obj.contains(key))
    fail(errc::constraint_violation, where + " is missing \"" + key + "\"");
  if (!obj[key].is_number_integer())
    fail(errc::constraint_violation,
         "\"" + key + "\" in " + where + " must be an integer");
  return obj[key].get<int>();
}

inline initial_condition parse_init(const json& sec) {
  if (!sec.contains("kind") || !sec["kind"].is_string())
    fail(errc::constraint_violation, "init section needs a \"kind\" string");
  std::string kind = sec["kind"].get<std::string>();
  if (kind == "constant") {
    expect_keys(sec, {"kind", "value", "seed"}, "init(constant)");
    return init_constant{get_number(sec, "value", "init(constant)")};
  }
  if (kind == "equilibrium") {
    expect_keys(sec, {"kind", "seed"}, "init(equilibrium)");
    return init_equilibrium{};
  }
  if (kind == "sine_perturbed") {
    expect_keys(sec, {"kind", "amplitude", "mode", "seed"},
                "init(sine_perturbed)");
    return init_sine{get_number(sec, "amplitude", "init(sine_perturbed)"),
                     get_int(sec, "mode", "init(sine_perturbed)")};
  }
  if (kind == "gaussian_bump") {
    expect_keys(sec, {"kind", "center", "width", "floor", "seed"},
                "init(gaussian_bump)");
    return init_bump{get_number(sec, "center", "init(gaussian_bump)"),
                     get_number(sec, "width", "init(gaussian_bump)"),
                     get_number(sec, "floor", "init(gaussian_bump)")};
  }
  if (kind == "random_positive") {
    expect_keys(sec, {"kind", "lo", "hi", "seed"}, "init(random_positive)");
    uint64_t seed = 0;
    if (sec.contains("seed")) {
      if (!sec["seed"].is_number_integer())
        fail(errc::constraint_violation, "\"seed\" must be an integer");
      seed = sec["seed"].get<uint64_t>();
    }
    return init_random{get_number(sec, "lo", "init(random_positive)"),
                       get_number(sec, "hi", "init(random_positive)"), seed};
  }
  fail(errc::constraint_violation, "unknown init kind \"" + kind + "\"");
}

}  // namespace detail

/// Builds a run_config from a parsed JSON document. Sections pde, grid and
/// time are required; harnack, init and output are optional with defaults
/// (preset coefficient profile, equilibrium start, directory "out").
inline run_config parse_config(const nlohmann::json& doc) {
  using detail::expect_keys;
  using detail::get_int;
  using detail::get_number;
  using detail::get_number_or;

  if (!doc.is_object())
    fail(errc::constraint_violation, "config root must be a JSON object");
  expect_keys(doc, {"pde", "harnack", "grid", "time", "init", "output"},
              "config root");
  for (const char* req : {"pde", "grid", "time"})
    if (!doc.contains(req))
      fail(errc::constraint_violation,
           std::string("config is missing the \"") + req + "\" section");

  run_config rc;

  const auto& pde = doc["pde"];
  expect_keys(pde, {"a", "b", "dim"}, "pde section");
  rc.pde.a = get_number(pde, "a", "pde section");
  rc.pde.b = get_number(pde, "b", "pde section");
  rc.pde.n = get_int(pde, "dim", "pde section");

  const auto& gr = doc["grid"];
  expect_keys(gr, {"extent", "points", "bc"}, "grid section");
  double extent = get_number(gr, "extent", "grid section");
  int points = get_int(gr, "points", "grid section");
  if (gr.contains("bc")) {
    if (!gr["bc"].is_string() || gr["bc"].get<std::string>() != "periodic")
      fail(errc::constraint_violation, "only bc=\"periodic\" is supported");
  }

  const auto& tm = doc["time"];
  expect_keys(tm, {"t_end", "cfl_safety", "snapshot_interval"}, "time section");
  double t_end = get_number(tm, "t_end", "time section");
  double cfl = get_number_or(tm, "cfl_safety", "time section", 0.4);
  double snap = get_number_or(tm, "snapshot_interval", "time section",
                              t_end / 100.0);

  rc.solver.pde = rc.pde;
  rc.solver.grid = make_grid(rc.pde.n, points, extent);
  rc.solver.t_end = t_end;
  rc.solver.snapshot_interval = snap;
  rc.solver.cfl_safety = cfl;
  check_solver_config(rc.solver);

  if (doc.contains("harnack")) {
    const auto& h = doc["harnack"];
    expect_keys(h, {"alpha", "beta", "gamma", "tolerance", "t_min"},
                "harnack section");
    bool any = h.contains("alpha") || h.contains("beta") || h.contains("gamma");
    bool all = h.contains("alpha") && h.contains("beta") && h.contains("gamma");
    if (any && !all)
      fail(errc::constraint_violation,
           "harnack section must give alpha, beta, gamma together");
    if (all) {
      rc.alpha = get_number(h, "alpha", "harnack section");
      rc.beta = get_number(h, "beta", "harnack section");
      rc.gamma = get_number(h, "gamma", "harnack section");
    } else {
      harnack_params preset = preset_profile(rc.pde);
      rc.alpha = preset.alpha;
      rc.beta = preset.beta;
      rc.gamma = preset.gamma;
    }
    rc.tolerance = get_number_or(h, "tolerance", "harnack section", 5e-3);
    rc.t_min = get_number_or(h, "t_min", "harnack section", 0.05);
    if (!(rc.tolerance >= 0.0))
      fail(errc::constraint_violation, "tolerance must be nonnegative");
    if (!(rc.t_min > 0.0))
      fail(errc::constraint_violation, "t_min must be positive");
  } else {
    harnack_params preset = preset_profile(rc.pde);
    rc.alpha = preset.alpha;
    rc.beta = preset.beta;
    rc.gamma = preset.gamma;
  }

  // Coefficient admissibility is a cross-field constraint at load time; the
  // wrapped message still names the violated condition.
  try {
    validate(rc.alpha, rc.beta, rc.gamma, rc.pde);
  } catch (const error& e) {
    fail(errc::constraint_violation, e.what());
  }

  if (doc.contains("init")) {
    rc.solver.init = detail::parse_init(doc["init"]);
    // construct once so range violations surface at load time
    make_initial(rc.solver.grid, rc.pde, rc.solver.init);
  }

  if (doc.contains("output")) {
    const auto& out = doc["output"];
    expect_keys(out, {"directory"}, "output section");
    if (out.contains("directory")) {
      if (!out["directory"].is_string())
        fail(errc::constraint_violation, "output directory must be a string");
      rc.output_dir = out["directory"].get<std::string>();
    }
  }
  return rc;
}

/// Reads and parses a JSON config file. Malformed JSON or an unreadable file
/// reports error{parse_error}.
inline run_config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::parse_error, "cannot open config file " + path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    fail(errc::parse_error, e.what());
  }
  return parse_config(doc);
}

/// Validated coefficient triple carried by a config.
inline harnack_params config_params(const run_config& rc) {
  return validate(rc.alpha, rc.beta, rc.gamma, rc.pde);
}

}  // namespace nwlab
