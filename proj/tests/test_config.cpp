#include <catch2/catch_amalgamated.hpp>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <variant>

#include "nwlab/config.hpp"
#include "nwlab/field.hpp"

using namespace nwlab;
using nlohmann::json;

namespace {

json base_doc() {
  return json{{"pde", {{"a", 1.0}, {"b", 1.0}, {"dim", 1}}},
              {"grid", {{"extent", 20.0}, {"points", 64}}},
              {"time", {{"t_end", 1.0}}}};
}

errc code_of(const json& doc) {
  try {
    parse_config(doc);
  } catch (const error& e) {
    return e.code();
  }
  return errc::unknown_key;  // sentinel: parsed fine
}

std::string message_of(const json& doc) {
  try {
    parse_config(doc);
  } catch (const error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("a minimal document resolves every default") {
  run_config rc = parse_config(base_doc());
  CHECK(rc.pde.a == 1.0);
  CHECK(rc.pde.b == 1.0);
  CHECK(rc.pde.n == 1);
  CHECK(rc.solver.grid.points == 64);
  CHECK(rc.solver.grid.extent == 20.0);
  CHECK(rc.solver.t_end == 1.0);
  CHECK(rc.solver.cfl_safety == 0.4);
  CHECK(rc.solver.snapshot_interval == Catch::Approx(0.01));  // t_end / 100
  CHECK(std::holds_alternative<init_equilibrium>(rc.solver.init));
  CHECK(rc.tolerance == 5e-3);
  CHECK(rc.t_min == 0.05);
  CHECK(rc.output_dir == "out");
  // preset coefficient profile: alpha 1, beta 0, gamma -2 n b alpha
  CHECK(rc.alpha == 1.0);
  CHECK(rc.beta == 0.0);
  CHECK(rc.gamma == -2.0);
  harnack_params hp = config_params(rc);
  CHECK(hp.branch == gauge_branch::phi);
}

TEST_CASE("explicit values override the defaults") {
  json doc = base_doc();
  doc["time"]["cfl_safety"] = 0.2;
  doc["time"]["snapshot_interval"] = 0.25;
  doc["harnack"] = {{"alpha", 1.0}, {"beta", 0.9}, {"gamma", -2.0},
                    {"tolerance", 1e-4}, {"t_min", 0.2}};
  doc["init"] = {{"kind", "sine_perturbed"}, {"amplitude", 0.1}, {"mode", 2}};
  doc["output"] = {{"directory", "results"}};
  run_config rc = parse_config(doc);
  CHECK(rc.solver.cfl_safety == 0.2);
  CHECK(rc.solver.snapshot_interval == 0.25);
  CHECK(rc.alpha == 1.0);
  CHECK(rc.beta == 0.9);
  CHECK(rc.gamma == -2.0);
  CHECK(rc.tolerance == 1e-4);
  CHECK(rc.t_min == 0.2);
  CHECK(rc.output_dir == "results");
  REQUIRE(std::holds_alternative<init_sine>(rc.solver.init));
  CHECK(std::get<init_sine>(rc.solver.init).mode == 2);
  CHECK(config_params(rc).branch == gauge_branch::psi);
}

TEST_CASE("every init kind parses to its recipe") {
  json doc = base_doc();

  doc["init"] = {{"kind", "constant"}, {"value", 0.5}};
  CHECK(std::holds_alternative<init_constant>(parse_config(doc).solver.init));

  doc["init"] = {{"kind", "equilibrium"}};
  CHECK(std::holds_alternative<init_equilibrium>(parse_config(doc).solver.init));

  doc["init"] = {{"kind", "gaussian_bump"},
                 {"center", 10.0},
                 {"width", 1.5},
                 {"floor", 0.2}};
  run_config rb = parse_config(doc);
  REQUIRE(std::holds_alternative<init_bump>(rb.solver.init));
  CHECK(std::get<init_bump>(rb.solver.init).width == 1.5);

  doc["init"] = {{"kind", "random_positive"},
                 {"lo", 0.2},
                 {"hi", 1.5},
                 {"seed", 77}};
  run_config rr = parse_config(doc);
  REQUIRE(std::holds_alternative<init_random>(rr.solver.init));
  CHECK(std::get<init_random>(rr.solver.init).seed == 77);

  doc["init"] = {{"kind", "vortex"}};
  CHECK(code_of(doc) == errc::constraint_violation);
}

TEST_CASE("unknown keys are rejected wherever they appear") {
  json doc = base_doc();
  doc["harnack"] = {{"alpha", 1.0}, {"beta", 0.0}, {"gamm", -2.0}};
  CHECK(code_of(doc) == errc::unknown_key);
  CHECK(message_of(doc).find("gamm") != std::string::npos);

  doc = base_doc();
  doc["grdi"] = {{"extent", 20.0}};
  CHECK(code_of(doc) == errc::unknown_key);

  doc = base_doc();
  doc["init"] = {{"kind", "constant"}, {"amplitude", 0.1}};
  CHECK(code_of(doc) == errc::unknown_key);

  doc = base_doc();
  doc["time"]["dt"] = 0.001;
  CHECK(code_of(doc) == errc::unknown_key);
}

TEST_CASE("admissibility violations surface at load time with their reason") {
  json doc = base_doc();
  doc["harnack"] = {{"alpha", 1.0}, {"beta", 2.0}, {"gamma", -2.0}};
  CHECK(code_of(doc) == errc::constraint_violation);
  CHECK(message_of(doc).find("ordering") != std::string::npos);

  doc["harnack"] = {{"alpha", 1.0}, {"beta", 0.0}, {"gamma", -0.1}};
  CHECK(code_of(doc) == errc::constraint_violation);
  CHECK(message_of(doc).find("magnitude") != std::string::npos);

  // partial triple
  doc["harnack"] = {{"alpha", 2.0}};
  CHECK(code_of(doc) == errc::constraint_violation);
  CHECK(message_of(doc).find("together") != std::string::npos);

  // out-of-range initial data fails during construction at load
  doc = base_doc();
  doc["init"] = {{"kind", "sine_perturbed"}, {"amplitude", 2.0}, {"mode", 1}};
  CHECK(code_of(doc) == errc::constraint_violation);
}

TEST_CASE("section and type errors carry constraint codes") {
  json doc = base_doc();
  doc.erase("time");
  CHECK(code_of(doc) == errc::constraint_violation);

  doc = base_doc();
  doc["pde"]["a"] = "one";
  CHECK(code_of(doc) == errc::constraint_violation);

  doc = base_doc();
  doc["pde"]["dim"] = 1.5;
  CHECK(code_of(doc) == errc::constraint_violation);

  doc = base_doc();
  doc["pde"]["dim"] = 3;  // grids are 1d or 2d only
  CHECK(code_of(doc) == errc::constraint_violation);

  doc = base_doc();
  doc["grid"]["points"] = 4;
  CHECK(code_of(doc) == errc::constraint_violation);

  doc = base_doc();
  doc["time"]["snapshot_interval"] = 5.0;  // > t_end
  CHECK(code_of(doc) == errc::constraint_violation);

  doc = base_doc();
  doc["harnack"] = {{"tolerance", -1.0}};
  CHECK(code_of(doc) == errc::constraint_violation);

  doc = base_doc();
  doc["harnack"] = {{"t_min", 0.0}};
  CHECK(code_of(doc) == errc::constraint_violation);

  doc = base_doc();
  doc["output"] = {{"directory", 7}};
  CHECK(code_of(doc) == errc::constraint_violation);

  CHECK(code_of(json::array({1, 2, 3})) == errc::constraint_violation);
}

TEST_CASE("only periodic boundaries are accepted") {
  json doc = base_doc();
  doc["grid"]["bc"] = "periodic";
  CHECK_NOTHROW(parse_config(doc));
  doc["grid"]["bc"] = "dirichlet";
  CHECK(code_of(doc) == errc::constraint_violation);
}

TEST_CASE("2d configs pair the equation dimension with the grid") {
  json doc = base_doc();
  doc["pde"]["dim"] = 2;
  doc["grid"]["points"] = 32;
  run_config rc = parse_config(doc);
  CHECK(rc.solver.grid.dim == 2);
  // preset gamma scales with dimension: -2 n b alpha
  CHECK(rc.gamma == -4.0);
  CHECK_NOTHROW(config_params(rc));
}

TEST_CASE("files load, malformed documents and missing paths do not") {
  const char* path = "config_roundtrip_tmp.json";
  {
    std::ofstream out(path);
    json doc = base_doc();
    doc["init"] = {{"kind", "random_positive"},
                   {"lo", 0.5},
                   {"hi", 1.5},
                   {"seed", 9}};
    out << doc.dump(2);
  }
  run_config rc = load_config(path);
  CHECK(std::holds_alternative<init_random>(rc.solver.init));

  {
    std::ofstream out(path);
    out << "{ \"pde\": { broken";
  }
  try {
    load_config(path);
    FAIL("expected a throw");
  } catch (const error& e) {
    CHECK(e.code() == errc::parse_error);
  }
  std::remove(path);

  try {
    load_config("definitely_not_here.json");
    FAIL("expected a throw");
  } catch (const error& e) {
    CHECK(e.code() == errc::parse_error);
  }
}

TEST_CASE("a loaded config reproduces runs byte for byte") {
  json doc = base_doc();
  doc["time"]["t_end"] = 0.5;
  doc["time"]["snapshot_interval"] = 0.25;
  doc["init"] = {{"kind", "random_positive"},
                 {"lo", 0.5},
                 {"hi", 1.5},
                 {"seed", 2718}};
  run_config rc = parse_config(doc);

  auto render = [&]() {
    trajectory traj = evolve(rc.solver);
    std::ostringstream os;
    for (const field& f : traj.snapshots) write_snapshot(f, os);
    return os.str();
  };
  std::string first = render(), second = render();
  CHECK(first == second);
  CHECK(first.find("# t=0 dim=1 N=64 L=20") == 0);
}
