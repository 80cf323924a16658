#pragma once

#include <cmath>
#include <cstdint>
#include <sstream>
#include <variant>
#include <vector>

#include "nwlab/error.hpp"
#include "nwlab/field.hpp"
#include "nwlab/params.hpp"

namespace nwlab {

/// Deterministic 64-bit generator (splitmix64). Chosen over std::mt19937
/// so seeded initial data is bit-stable across standard library versions.
struct splitmix64 {
  uint64_t state = 0;

  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform draw in [lo, hi) with 53 random mantissa bits.
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(next() >> 11) * 0x1.0p-53);
  }
};

struct init_constant { double value = 1.0; };
struct init_equilibrium {};
struct init_sine { double amplitude = 0.1; int mode = 1; };
struct init_bump { double center = 0.0; double width = 1.0; double floor = 0.1; };
struct init_random { double lo = 0.1; double hi = 1.0; uint64_t seed = 0; };

using initial_condition = std::variant<init_constant, init_equilibrium,
                                       init_sine, init_bump, init_random>;

struct solver_config {
  pde_params pde;
  ::nwlab::grid grid;
  double t_end = 1.0;
  double snapshot_interval = 0.1;
  double cfl_safety = 0.4;
  initial_condition init = init_equilibrium{};
};

/// Snapshots of one run, snapshots.front() being the initial state at t = 0.
/// Snapshot times are exact multiples of snapshot_interval: the step is
/// shrunk from the stability bound so an integer number of steps lands on
/// each snapshot.
struct trajectory {
  solver_config config;
  double dt_used = 0.0;
  std::vector<field> snapshots;
};

/// Shortest periodic displacement from x to y on [0, extent).
inline double torus_delta(double x, double y, double extent) {
  double d = std::fmod(y - x, extent);
  if (d > 0.5 * extent) d -= extent;
  if (d < -0.5 * extent) d += extent;
  return d;
}

/// Builds the initial positive field for a given recipe.
inline field make_initial(const grid& g, const pde_params& p,
                          const initial_condition& ic) {
  check_pde(p);
  field f = make_field(g);
  double eq = equilibrium(p);
  if (const auto* c = std::get_if<init_constant>(&ic)) {
    if (!std::isfinite(c->value) || !(c->value > 0.0))
      fail(errc::constraint_violation, "constant initial value must be positive");
    for (double& s : f.samples) s = c->value;
  } else if (std::get_if<init_equilibrium>(&ic)) {
    for (double& s : f.samples) s = eq;
  } else if (const auto* sp = std::get_if<init_sine>(&ic)) {
    if (!std::isfinite(sp->amplitude) || std::abs(sp->amplitude) >= eq)
      fail(errc::constraint_violation,
           "sine amplitude must satisfy |amplitude| < sqrt(a/b)");
    if (sp->mode < 1)
      fail(errc::constraint_violation, "sine mode must be at least 1");
    double w = 2.0 * M_PI * sp->mode / g.extent;
    if (g.dim == 1) {
      for (int i = 0; i < g.points; ++i)
        f.samples[i] = eq + sp->amplitude * std::sin(w * g.coord(i));
    } else {
      for (int i = 0; i < g.points; ++i)
        for (int j = 0; j < g.points; ++j)
          f.samples[g.at(i, j)] = eq + sp->amplitude * std::sin(w * g.coord(i)) *
                                           std::sin(w * g.coord(j));
    }
  } else if (const auto* bp = std::get_if<init_bump>(&ic)) {
    if (!(bp->floor > 0.0) || !(bp->width > 0.0))
      fail(errc::constraint_violation, "bump needs positive width and floor");
    double inv = 1.0 / (2.0 * bp->width * bp->width);
    if (g.dim == 1) {
      for (int i = 0; i < g.points; ++i) {
        double d = torus_delta(bp->center, g.coord(i), g.extent);
        f.samples[i] = bp->floor + eq * std::exp(-d * d * inv);
      }
    } else {
      for (int i = 0; i < g.points; ++i)
        for (int j = 0; j < g.points; ++j) {
          double dx = torus_delta(bp->center, g.coord(i), g.extent);
          double dy = torus_delta(bp->center, g.coord(j), g.extent);
          f.samples[g.at(i, j)] =
              bp->floor + eq * std::exp(-(dx * dx + dy * dy) * inv);
        }
    }
  } else if (const auto* rp = std::get_if<init_random>(&ic)) {
    if (!(rp->lo > 0.0) || !(rp->hi > rp->lo))
      fail(errc::constraint_violation, "random range needs 0 < lo < hi");
    splitmix64 rng{rp->seed};
    for (double& s : f.samples) s = rng.uniform(rp->lo, rp->hi);
  }
  return f;
}

/// Explicit step bound: the diffusion limit h^2 / (2 dim) and the reaction
/// stiffness limit 1 / (a + 3 b f_max^2), scaled by the safety factor.
inline double stable_dt(const grid& g, const pde_params& p, double f_max,
                        double cfl_safety) {
  if (!(cfl_safety > 0.0) || cfl_safety > 1.0)
    fail(errc::constraint_violation, "cfl_safety must lie in (0, 1]");
  double h = g.spacing();
  double diffusion = h * h / (2.0 * g.dim);
  double reaction = 1.0 / (p.a + 3.0 * p.b * f_max * f_max);
  return cfl_safety * std::min(diffusion, reaction);
}

/// Right-hand side lap f + a f - b f^3.
inline field pde_rhs(const field& f, const pde_params& p) {
  field out = laplacian(f);
  for (size_t k = 0; k < out.samples.size(); ++k) {
    double v = f.samples[k];
    out.samples[k] += p.a * v - p.b * v * v * v;
  }
  return out;
}

namespace detail {

inline void check_state(const std::vector<double>& s, double t) {
  for (size_t k = 0; k < s.size(); ++k) {
    if (!std::isfinite(s[k])) {
      std::ostringstream os;
      os << "non-finite sample at node " << k << ", t=" << t;
      fail(errc::non_finite_state, os.str());
    }
    if (s[k] <= 0.0) {
      std::ostringstream os;
      os << "sample at node " << k << " reached " << s[k] << " at t=" << t;
      fail(errc::positivity_lost, os.str());
    }
  }
}

}  // namespace detail

/// One classical RK4 step in place. Every stage state and the result must
/// stay positive and finite; otherwise the integration aborts.
inline void rk4_step(field& f, const pde_params& p, double dt) {
  const size_t n = f.samples.size();
  field k1 = pde_rhs(f, p);
  field stage = f;
  for (size_t i = 0; i < n; ++i)
    stage.samples[i] = f.samples[i] + 0.5 * dt * k1.samples[i];
  detail::check_state(stage.samples, f.time);
  field k2 = pde_rhs(stage, p);
  for (size_t i = 0; i < n; ++i)
    stage.samples[i] = f.samples[i] + 0.5 * dt * k2.samples[i];
  detail::check_state(stage.samples, f.time);
  field k3 = pde_rhs(stage, p);
  for (size_t i = 0; i < n; ++i)
    stage.samples[i] = f.samples[i] + dt * k3.samples[i];
  detail::check_state(stage.samples, f.time);
  field k4 = pde_rhs(stage, p);
  for (size_t i = 0; i < n; ++i)
    f.samples[i] += dt / 6.0 *
                    (k1.samples[i] + 2.0 * k2.samples[i] +
                     2.0 * k3.samples[i] + k4.samples[i]);
  f.time += dt;
  detail::check_state(f.samples, f.time);
}

inline void check_solver_config(const solver_config& c) {
  check_pde(c.pde);
  if (c.pde.n != c.grid.dim)
    fail(errc::constraint_violation, "pde dimension must match grid dimension");
  if (!std::isfinite(c.t_end) || !(c.t_end > 0.0))
    fail(errc::constraint_violation, "t_end must be positive");
  if (!std::isfinite(c.snapshot_interval) || !(c.snapshot_interval > 0.0) ||
      c.snapshot_interval > c.t_end)
    fail(errc::constraint_violation,
         "snapshot_interval must lie in (0, t_end]");
}

/// Runs the method-of-lines integration and records snapshots at every
/// multiple of snapshot_interval up to t_end.
inline trajectory evolve(const solver_config& c) {
  check_solver_config(c);
  field f = make_initial(c.grid, c.pde, c.init);
  double f_max = std::max(max_abs(f), equilibrium(c.pde));
  double dt_bound = stable_dt(c.grid, c.pde, f_max, c.cfl_safety);
  int per_snap = static_cast<int>(std::ceil(c.snapshot_interval / dt_bound));
  double dt = c.snapshot_interval / per_snap;
  int snaps = static_cast<int>(std::floor(c.t_end / c.snapshot_interval + 1e-9));

  trajectory out{c, dt, {}};
  out.snapshots.reserve(static_cast<size_t>(snaps) + 1);
  out.snapshots.push_back(f);
  for (int s = 1; s <= snaps; ++s) {
    for (int k = 0; k < per_snap; ++k) rk4_step(f, c.pde, dt);
    f.time = s * c.snapshot_interval;  // suppress additive drift
    out.snapshots.push_back(f);
  }
  return out;
}

/// Integrates until max |rhs| <= residual_tol and returns the relaxed state,
/// or throws error{not_converged} once t exceeds t_max. snapshot_interval
/// and t_end of the config are ignored here.
inline field relax_steady(const solver_config& c, double residual_tol,
                          double t_max) {
  check_pde(c.pde);
  if (c.pde.n != c.grid.dim)
    fail(errc::constraint_violation, "pde dimension must match grid dimension");
  if (!(residual_tol > 0.0))
    fail(errc::constraint_violation, "residual tolerance must be positive");
  if (!(t_max > 0.0))
    fail(errc::constraint_violation, "t_max must be positive");
  field f = make_initial(c.grid, c.pde, c.init);
  double f_max = std::max(max_abs(f), equilibrium(c.pde));
  double dt = stable_dt(c.grid, c.pde, f_max, c.cfl_safety);
  while (true) {
    field r = pde_rhs(f, c.pde);
    if (max_abs(r) <= residual_tol) return f;
    if (f.time + dt > t_max) {
      std::ostringstream os;
      os << "residual still above " << residual_tol << " at t_max=" << t_max;
      fail(errc::not_converged, os.str());
    }
    rk4_step(f, c.pde, dt);
  }
}

}  // namespace nwlab
