#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "nwlab/error.hpp"
#include "nwlab/field.hpp"
#include "nwlab/gauge.hpp"
#include "nwlab/params.hpp"
#include "nwlab/solver.hpp"

namespace nwlab {

/// H = alpha lap(log f) + beta |grad log f|^2 + gamma f^2 + gauge(t),
/// assembled with the discrete operators. The main theorem-level claim this
/// library certifies numerically is H >= 0 for positive solutions and
/// admissible coefficients.
inline field harnack_field(const field& f, double t, const harnack_params& hp,
                           const time_gauge& g) {
  field l = log_field(f);
  field lap_l = laplacian(l);
  field gsq = gradient_sq(l);
  double gv = g.value(t);
  field out = f;
  out.time = t;
  for (size_t k = 0; k < out.samples.size(); ++k) {
    double f2 = f.samples[k] * f.samples[k];
    out.samples[k] = hp.alpha * lap_l.samples[k] + hp.beta * gsq.samples[k] +
                     hp.gamma * f2 + gv;
  }
  return out;
}

/// Same quantity expressed directly in f, with f_t taken from the equation:
///   alpha f_t/f - alpha a + (beta - alpha) |grad f|^2/f^2
///   + (gamma + alpha b) f^2 + gauge(t).
/// Algebraically identical to harnack_field in the continuum; discretely the
/// two differ by O(h^2) stencil commutators.
inline field harnack_field_fform(const field& f, double t,
                                 const harnack_params& hp,
                                 const time_gauge& g) {
  field ft = pde_rhs(f, hp.pde);
  field gsq_f = gradient_sq(f);
  double gv = g.value(t);
  field out = f;
  out.time = t;
  for (size_t k = 0; k < out.samples.size(); ++k) {
    double fv = f.samples[k];
    if (!(fv > 0.0)) {
      std::ostringstream os;
      os << "sample at node " << k << " is not positive";
      fail(errc::non_positive_sample, os.str());
    }
    out.samples[k] = hp.alpha * ft.samples[k] / fv - hp.alpha * hp.pde.a +
                     (hp.beta - hp.alpha) * gsq_f.samples[k] / (fv * fv) +
                     (hp.gamma + hp.alpha * hp.pde.b) * fv * fv + gv;
  }
  return out;
}

struct certify_record {
  double t = 0.0;
  double min_value = 0.0;
  int argmin = 0;
  double gauge_value = 0.0;
};

struct certify_violation {
  double t = 0.0;
  int node = 0;
  double value = 0.0;
};

struct certify_report {
  std::vector<certify_record> records;
  std::vector<certify_violation> violations;
  double tolerance = 0.0;
  double worst = 0.0;  // most negative min over the certified window

  bool pass() const { return violations.empty(); }
};

/// Evaluates min H over every snapshot with t >= t_min and flags nodes where
/// H < -tolerance. Violations are ordered by (t, node).
inline certify_report certify(const trajectory& traj, const harnack_params& hp,
                              double t_min, double tolerance) {
  if (!(t_min > 0.0))
    fail(errc::non_positive_time, "certification window needs t_min > 0");
  if (!(tolerance >= 0.0))
    fail(errc::constraint_violation, "tolerance must be nonnegative");
  time_gauge g = make_gauge(hp);
  certify_report rep;
  rep.tolerance = tolerance;
  rep.worst = std::numeric_limits<double>::infinity();
  for (const field& f : traj.snapshots) {
    if (f.time < t_min) continue;
    field H = harnack_field(f, f.time, hp, g);
    certify_record rec;
    rec.t = f.time;
    rec.argmin = argmin(H);
    rec.min_value = H.samples[rec.argmin];
    rec.gauge_value = g.value(f.time);
    rep.records.push_back(rec);
    rep.worst = std::min(rep.worst, rec.min_value);
    for (size_t k = 0; k < H.samples.size(); ++k)
      if (H.samples[k] < -tolerance)
        rep.violations.push_back({f.time, static_cast<int>(k), H.samples[k]});
  }
  if (rep.records.empty())
    fail(errc::constraint_violation, "no snapshots at or beyond t_min");
  return rep;
}

namespace detail {

inline void require_interior_snapshot(const trajectory& traj, int k) {
  if (k < 1 || k + 1 >= static_cast<int>(traj.snapshots.size()))
    fail(errc::index_out_of_range,
         "snapshot index must have neighbours on both sides");
}

}  // namespace detail

/// Residuals of the three evolution identities satisfied by l = log f:
/// with box(g) = g_t - lap g,
///   box(lap l)      = lap |grad l|^2 - 2 b lap l e^{2l} - 4 b |grad l|^2 e^{2l}
///   box(|grad l|^2) = 2 grad l . grad lap l + 2 grad l . grad |grad l|^2
///                     - 4 b |grad l|^2 e^{2l} - lap |grad l|^2
///   box(e^{2l})     = 2 grad l . grad e^{2l} + 2 a e^{2l} - 2 b e^{4l}
///                     - 6 |grad l|^2 e^{2l}
/// Time derivatives use the central difference across snapshots k-1, k+1.
struct evolution_residuals_t {
  field lap_log;      // defect of the lap(log f) identity
  field grad_sq_log;  // defect of the |grad log f|^2 identity
  field field_sq;     // defect of the f^2 identity
};

inline evolution_residuals_t evolution_residuals(const trajectory& traj, int k) {
  detail::require_interior_snapshot(traj, k);
  const pde_params& p = traj.config.pde;
  const field& fm = traj.snapshots[k - 1];
  const field& fk = traj.snapshots[k];
  const field& fp = traj.snapshots[k + 1];
  double dtau = fp.time - fm.time;

  field lm = log_field(fm), lk = log_field(fk), lp = log_field(fp);
  field Am = laplacian(lm), Ak = laplacian(lk), Ap = laplacian(lp);
  field Gm = gradient_sq(lm), Gk = gradient_sq(lk), Gp = gradient_sq(lp);
  field lap_Ak = laplacian(Ak), lap_Gk = laplacian(Gk);
  field gA = grad_dot(lk, Ak), gG = grad_dot(lk, Gk);

  evolution_residuals_t out{fk, fk, fk};
  field Ek = fk;  // e^{2l} = f^2
  for (size_t i = 0; i < Ek.samples.size(); ++i)
    Ek.samples[i] = fk.samples[i] * fk.samples[i];
  field lap_Ek = laplacian(Ek);
  field gE = grad_dot(lk, Ek);

  for (size_t i = 0; i < fk.samples.size(); ++i) {
    double E = Ek.samples[i];
    double G = Gk.samples[i];
    double A = Ak.samples[i];
    double boxA = (Ap.samples[i] - Am.samples[i]) / dtau - lap_Ak.samples[i];
    out.lap_log.samples[i] =
        boxA - (lap_Gk.samples[i] - 2.0 * p.b * A * E - 4.0 * p.b * G * E);

    double boxG = (Gp.samples[i] - Gm.samples[i]) / dtau - lap_Gk.samples[i];
    out.grad_sq_log.samples[i] =
        boxG - (2.0 * gA.samples[i] + 2.0 * gG.samples[i] -
                4.0 * p.b * G * E - lap_Gk.samples[i]);

    double Em = fm.samples[i] * fm.samples[i];
    double Ep = fp.samples[i] * fp.samples[i];
    double boxE = (Ep - Em) / dtau - lap_Ek.samples[i];
    out.field_sq.samples[i] =
        boxE - (2.0 * gE.samples[i] + 2.0 * p.a * E - 2.0 * p.b * E * E -
                6.0 * G * E);
  }
  return out;
}

/// Defects of the two certificate-level statements about H. `identity` is
/// the residual of the exact evolution equation
///   box H = 2 grad l . grad H + 2 (alpha - beta) |hess l|^2 + gauge'(t)
///           - 2 b e^{2l} [ (H - gauge) + (2 alpha + beta + 3 gamma / b)
///             |grad l|^2 - gamma a / b ],
/// which -> 0 under refinement. `slack` is box H minus the completed-square
/// lower bound used to propagate nonnegativity; in the continuum it equals
/// 2 (alpha - beta) (|hess l|^2 - (lap l)^2 / n) >= 0, so it must stay above
/// -tolerance on certified runs.
struct certificate_residuals_t {
  field identity;
  field slack;
};

inline certificate_residuals_t certificate_residuals(const trajectory& traj,
                                                     int k,
                                                     const harnack_params& hp,
                                                     const time_gauge& g) {
  detail::require_interior_snapshot(traj, k);
  const pde_params& p = hp.pde;
  const field& fm = traj.snapshots[k - 1];
  const field& fk = traj.snapshots[k];
  const field& fp = traj.snapshots[k + 1];
  if (!(fm.time > 0.0))
    fail(errc::non_positive_time,
         "certificate residuals need all three snapshot times positive");
  double dtau = fp.time - fm.time;

  field Hm = harnack_field(fm, fm.time, hp, g);
  field Hk = harnack_field(fk, fk.time, hp, g);
  field Hp = harnack_field(fp, fp.time, hp, g);
  field lk = log_field(fk);
  field Gk = gradient_sq(lk);
  field lap_Hk = laplacian(Hk);
  field gH = grad_dot(lk, Hk);
  field hess = hessian_sq(lk);
  field lap_lk = laplacian(lk);

  double gv = g.value(fk.time);
  double gd = g.derivative(fk.time);
  double c = (hp.alpha - hp.beta) / (p.n * hp.alpha * hp.alpha);

  certificate_residuals_t out{fk, fk};
  for (size_t i = 0; i < fk.samples.size(); ++i) {
    double E = fk.samples[i] * fk.samples[i];
    double G = Gk.samples[i];
    double H = Hk.samples[i];
    double boxH = (Hp.samples[i] - Hm.samples[i]) / dtau - lap_Hk.samples[i];

    double exact = 2.0 * gH.samples[i] +
                   2.0 * (hp.alpha - hp.beta) * hess.samples[i] + gd -
                   2.0 * p.b * E *
                       ((H - gv) +
                        (2.0 * hp.alpha + hp.beta + 3.0 * hp.gamma / p.b) * G -
                        hp.gamma * p.a / p.b);
    out.identity.samples[i] = boxH - exact;

    double lower =
        2.0 * gH.samples[i] +
        H * (2.0 * c * (H - 2.0 * hp.beta * G - 2.0 * hp.gamma * E - 2.0 * gv) -
             2.0 * p.b * E) +
        gd +
        2.0 * G * E *
            (2.0 * c * hp.beta * hp.gamma - 2.0 * hp.alpha * p.b -
             hp.beta * p.b - 3.0 * hp.gamma) +
        4.0 * c * hp.beta * G * gv +
        E * (4.0 * c * hp.gamma * gv + 2.0 * p.b * gv + 2.0 * p.a * hp.gamma) +
        2.0 * c * (hp.beta * hp.beta * G * G + hp.gamma * hp.gamma * E * E +
                   gv * gv);
    out.slack.samples[i] = boxH - lower;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Integrated (classical) Harnack estimate
// ---------------------------------------------------------------------------

/// Comparison of the solution at two space-time points on the torus.
struct classical_query {
  std::array<double, 2> x1{0.0, 0.0};
  std::array<double, 2> x2{0.0, 0.0};
  double t1 = 0.0;
  double t2 = 0.0;
};

namespace detail {

/// log(e^y - 1) without overflow for large y.
inline double log_expm1(double y) {
  if (y > 36.0) return y + std::log1p(-std::exp(-y));
  return std::log(std::expm1(y));
}

inline double torus_distance_sq(const classical_query& q, const grid& g) {
  double d2 = 0.0;
  for (int ax = 0; ax < g.dim; ++ax) {
    double d = torus_delta(q.x1[ax], q.x2[ax], g.extent);
    d2 += d * d;
  }
  return d2;
}

inline void check_query_times(const classical_query& q) {
  if (!std::isfinite(q.t1) || !std::isfinite(q.t2))
    fail(errc::non_finite_input, "query times must be finite");
  if (!(q.t1 > 0.0))
    fail(errc::non_positive_time, "query needs t1 > 0");
  if (!(q.t2 > q.t1)) fail(errc::bad_time_order, "query needs t2 > t1");
}

}  // namespace detail

/// Logarithm of the integrated Harnack factor: f(x2,t2)/f(x1,t1) is bounded
/// below by exp of
///   -d^2/(4 dt) + a (1 + n/3) dt + (2n/3) [log(e^{2a t1}-1) - log(e^{2a t2}-1)]
/// where d is the minimal-image torus distance, dt = t2 - t1 and n the grid
/// dimension.
inline double classical_log_bound(const classical_query& q,
                                  const pde_params& p, const grid& g) {
  detail::check_query_times(q);
  double d2 = detail::torus_distance_sq(q, g);
  double dt = q.t2 - q.t1;
  double n = static_cast<double>(g.dim);
  return -d2 / (4.0 * dt) + p.a * (1.0 + n / 3.0) * dt +
         (2.0 * n / 3.0) * (detail::log_expm1(2.0 * p.a * q.t1) -
                            detail::log_expm1(2.0 * p.a * q.t2));
}

inline double classical_bound(const classical_query& q, const pde_params& p,
                              const grid& g) {
  return std::exp(classical_log_bound(q, p, g));
}

/// The same bound assembled numerically: composite Simpson quadrature of
///   -v^2/4 + a - a n (1 + m/3)/(1 - m),  m = exp(-2 a t),
/// along the straight constant-speed path (v = d / dt). Converges to
/// classical_log_bound at fourth order in the step count.
inline double path_log_bound_numeric(const classical_query& q,
                                     const pde_params& p, const grid& g,
                                     int steps) {
  detail::check_query_times(q);
  if (steps < 2)
    fail(errc::constraint_violation, "quadrature needs at least 2 steps");
  if (steps % 2 != 0) ++steps;
  double d2 = detail::torus_distance_sq(q, g);
  double dt = q.t2 - q.t1;
  double v2 = d2 / (dt * dt);
  double n = static_cast<double>(g.dim);
  auto integrand = [&](double t) {
    double m = std::exp(-2.0 * p.a * t);
    return -0.25 * v2 + p.a - p.a * n * (1.0 + m / 3.0) / (1.0 - m);
  };
  double h = dt / steps;
  double acc = integrand(q.t1) + integrand(q.t2);
  for (int i = 1; i < steps; ++i)
    acc += (i % 2 == 1 ? 4.0 : 2.0) * integrand(q.t1 + i * h);
  return acc * h / 3.0;
}

inline double path_bound_numeric(const classical_query& q, const pde_params& p,
                                 const grid& g, int steps) {
  return std::exp(path_log_bound_numeric(q, p, g, steps));
}

struct classical_result {
  classical_query query;
  double log_ratio = 0.0;
  double log_bound = 0.0;
  double slack = 0.0;  // log_ratio - log_bound, must be >= -tolerance
  bool pass = true;
};

namespace detail {

inline int locate_snapshot(const trajectory& traj, double t) {
  for (size_t k = 0; k < traj.snapshots.size(); ++k)
    if (std::abs(traj.snapshots[k].time - t) <= 1e-9 * std::max(1.0, std::abs(t)))
      return static_cast<int>(k);
  std::ostringstream os;
  os << "no snapshot at t=" << t;
  fail(errc::query_off_grid, os.str());
}

inline int locate_node(const grid& g, const std::array<double, 2>& x) {
  double h = g.spacing();
  int idx[2] = {0, 0};
  for (int ax = 0; ax < g.dim; ++ax) {
    double r = x[ax] / h;
    int i = g.wrap(static_cast<int>(std::lround(r)));
    if (std::abs(x[ax] - std::lround(r) * h) > 1e-6 * h) {
      std::ostringstream os;
      os << "coordinate " << x[ax] << " is not a grid node";
      fail(errc::query_off_grid, os.str());
    }
    idx[ax] = i;
  }
  return g.dim == 1 ? idx[0] : g.at(idx[0], idx[1]);
}

}  // namespace detail

/// Checks each query against the integrated bound using snapshot data.
/// Query times must match snapshot times and points must be grid nodes.
inline std::vector<classical_result> classical_check(
    const trajectory& traj, const std::vector<classical_query>& queries,
    double tolerance) {
  std::vector<classical_result> out;
  out.reserve(queries.size());
  for (const classical_query& q : queries) {
    detail::check_query_times(q);
    int k1 = detail::locate_snapshot(traj, q.t1);
    int k2 = detail::locate_snapshot(traj, q.t2);
    int n1 = detail::locate_node(traj.config.grid, q.x1);
    int n2 = detail::locate_node(traj.config.grid, q.x2);
    double f1 = traj.snapshots[k1].samples[n1];
    double f2 = traj.snapshots[k2].samples[n2];
    if (!(f1 > 0.0) || !(f2 > 0.0))
      fail(errc::non_positive_sample, "query hit a non-positive sample");
    classical_result r;
    r.query = q;
    r.log_ratio = std::log(f2) - std::log(f1);
    r.log_bound = classical_log_bound(q, traj.config.pde, traj.config.grid);
    r.slack = r.log_ratio - r.log_bound;
    r.pass = r.slack >= -tolerance;
    out.push_back(r);
  }
  return out;
}

/// Seeded query generator: picks snapshot pairs with t2 - t1 >= min_gap and
/// t1 > 0, and uniformly random grid nodes. Deterministic in the seed.
inline std::vector<classical_query> random_queries(const trajectory& traj,
                                                   int count, uint64_t seed,
                                                   double min_gap) {
  const auto& snaps = traj.snapshots;
  std::vector<int> positive;
  for (size_t k = 0; k < snaps.size(); ++k)
    if (snaps[k].time > 0.0) positive.push_back(static_cast<int>(k));
  if (positive.size() < 2)
    fail(errc::constraint_violation, "need at least two positive-time snapshots");
  splitmix64 rng{seed};
  const grid& g = traj.config.grid;
  std::vector<classical_query> out;
  out.reserve(static_cast<size_t>(count));
  int guard = 0;
  while (static_cast<int>(out.size()) < count) {
    if (++guard > 1000 * count)
      fail(errc::constraint_violation,
           "cannot satisfy min_gap with available snapshots");
    int a = positive[static_cast<int>(rng.next() % positive.size())];
    int b = positive[static_cast<int>(rng.next() % positive.size())];
    if (a == b) continue;
    if (snaps[a].time > snaps[b].time) std::swap(a, b);
    if (snaps[b].time - snaps[a].time < min_gap) continue;
    classical_query q;
    q.t1 = snaps[a].time;
    q.t2 = snaps[b].time;
    for (int ax = 0; ax < g.dim; ++ax) {
      q.x1[ax] = g.coord(static_cast<int>(rng.next() % g.points));
      q.x2[ax] = g.coord(static_cast<int>(rng.next() % g.points));
    }
    out.push_back(q);
  }
  return out;
}

}  // namespace nwlab
