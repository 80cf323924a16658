#pragma once

#include <cmath>
#include <optional>
#include <sstream>
#include <vector>

#include "nwlab/error.hpp"
#include "nwlab/params.hpp"
#include "nwlab/solver.hpp"

namespace nwlab {

/// Traveling-wave profile v(xi) >= 0 sampled on a uniform xi grid, for the
/// ansatz f(x, t) = v(x + eta t). The profile solves
///   v'' - eta v' + a v - b v^3 = 0,
/// connecting 0 (as xi -> -infinity) to sqrt(a/b) (as xi -> +infinity).
struct wave_profile {
  double eta = 0.0;
  double spacing = 0.0;
  std::vector<double> xi;
  std::vector<double> v;
};

/// Closed-form front
///   v(xi) = sqrt(a/b) e^{2 k xi} / (1 + e^{2 k xi}),  k = sqrt(a/8),
/// which solves the profile equation exactly for eta = 3 sqrt(a/2).
/// The logistic form (rather than tanh) keeps far-tail samples positive.
/// half_width <= 0 selects the default 24 / sqrt(a).
inline wave_profile exact_front(const pde_params& p, double half_width = 0.0,
                                int points = 2049) {
  check_pde(p);
  if (points < 9)
    fail(errc::constraint_violation, "profile needs at least 9 samples");
  if (half_width <= 0.0) half_width = 24.0 / std::sqrt(p.a);
  wave_profile w;
  w.eta = 3.0 * std::sqrt(p.a / 2.0);
  w.spacing = 2.0 * half_width / (points - 1);
  w.xi.resize(points);
  w.v.resize(points);
  double amp = equilibrium(p);
  double k = std::sqrt(p.a / 8.0);
  for (int i = 0; i < points; ++i) {
    double xi = -half_width + i * w.spacing;
    w.xi[i] = xi;
    double e = std::exp(2.0 * k * xi);
    w.v[i] = std::isinf(e) ? amp : amp * e / (1.0 + e);
  }
  return w;
}

/// Value of the closed-form front at an arbitrary offset.
inline double exact_front_value(const pde_params& p, double xi) {
  double k = std::sqrt(p.a / 8.0);
  double e = std::exp(2.0 * k * xi);
  double amp = equilibrium(p);
  return std::isinf(e) ? amp : amp * e / (1.0 + e);
}

/// Interior residual of the profile equation under central differences.
/// Endpoints are reported as zero (no periphery assumption is made).
inline std::vector<double> profile_residual(const wave_profile& w,
                                            const pde_params& p) {
  size_t n = w.v.size();
  std::vector<double> r(n, 0.0);
  double h = w.spacing;
  for (size_t i = 1; i + 1 < n; ++i) {
    double vpp = (w.v[i + 1] - 2.0 * w.v[i] + w.v[i - 1]) / (h * h);
    double vp = (w.v[i + 1] - w.v[i - 1]) / (2.0 * h);
    r[i] = vpp - w.eta * vp + p.a * w.v[i] - p.b * w.v[i] * w.v[i] * w.v[i];
  }
  return r;
}

/// Shooting construction of a monotone front for a prescribed eta. The
/// profile ODE as a first-order system is integrated backward in xi from a
/// point displaced by eps along the decaying eigenvector at the equilibrium
/// saddle (eigenvalue (eta - sqrt(eta^2 + 8a))/2). Success means v descended
/// below `tol` while staying inside the tube (0, sqrt(a/b) + tol); leaving
/// the tube reports no connection (empty optional) - for eta^2 < 4a the
/// descent spirals below zero, which is how the wavespeed bound shows up
/// numerically. The search budget spans 2 * half_width in xi
/// (half_width <= 0 selects 40 / sqrt(a)).
inline std::optional<wave_profile> shoot_profile(const pde_params& p,
                                                 double eta,
                                                 double half_width = 0.0,
                                                 double tol = 1e-9) {
  check_pde(p);
  if (!std::isfinite(eta) || eta == 0.0)
    fail(errc::constraint_violation, "eta must be finite and nonzero");
  double amp = equilibrium(p);
  if (!(tol > 0.0) || tol > 0.1 * amp)
    fail(errc::constraint_violation, "tol must lie in (0, sqrt(a/b)/10]");
  if (half_width <= 0.0) half_width = 40.0 / std::sqrt(p.a);

  double lam = 0.5 * (eta - std::sqrt(eta * eta + 8.0 * p.a));
  double eps = 1e-8 * amp;
  double v = amp - eps;
  double u = -eps * lam;  // v' = lam * (v - amp) along the eigenvector
  double h = half_width / 20000.0;
  int budget = static_cast<int>(2.0 * half_width / h);

  std::vector<double> samples;
  samples.reserve(static_cast<size_t>(budget) + 1);
  samples.push_back(v);
  auto fv = [](double, double uu) { return uu; };
  auto fu = [&](double vv, double uu) {
    return eta * uu - p.a * vv + p.b * vv * vv * vv;
  };
  bool connected = false;
  for (int step = 0; step < budget; ++step) {
    double hh = -h;  // backward in xi
    double kv1 = fv(v, u), ku1 = fu(v, u);
    double kv2 = fv(v + 0.5 * hh * kv1, u + 0.5 * hh * ku1);
    double ku2 = fu(v + 0.5 * hh * kv1, u + 0.5 * hh * ku1);
    double kv3 = fv(v + 0.5 * hh * kv2, u + 0.5 * hh * ku2);
    double ku3 = fu(v + 0.5 * hh * kv2, u + 0.5 * hh * ku2);
    double kv4 = fv(v + hh * kv3, u + hh * ku3);
    double ku4 = fu(v + hh * kv3, u + hh * ku3);
    v += hh / 6.0 * (kv1 + 2.0 * kv2 + 2.0 * kv3 + kv4);
    u += hh / 6.0 * (ku1 + 2.0 * ku2 + 2.0 * ku3 + ku4);
    if (!std::isfinite(v) || !std::isfinite(u))
      fail(errc::non_finite_state, "shooting state diverged");
    if (v <= 0.0 || v > amp + tol) return std::nullopt;  // left the tube
    samples.push_back(v);
    if (v < tol) {
      connected = true;
      break;
    }
  }
  if (!connected) return std::nullopt;

  wave_profile w;
  w.eta = eta;
  w.spacing = h;
  w.v.assign(samples.rbegin(), samples.rend());
  // normalize translation: xi = 0 at the upward crossing of amp / 2
  double level = 0.5 * amp;
  double shift = 0.0;
  for (size_t i = 0; i + 1 < w.v.size(); ++i)
    if (w.v[i] <= level && level < w.v[i + 1]) {
      shift = (static_cast<double>(i) +
               (level - w.v[i]) / (w.v[i + 1] - w.v[i])) *
              h;
      break;
    }
  w.xi.resize(w.v.size());
  for (size_t i = 0; i < w.v.size(); ++i)
    w.xi[i] = static_cast<double>(i) * h - shift;
  return w;
}

namespace detail {

/// Interpolated positions of the upward level crossing in each snapshot,
/// unwrapped into a continuous track along the torus.
inline std::vector<std::pair<double, double>> track_level(
    const trajectory& traj, double level) {
  const grid& g = traj.config.grid;
  if (g.dim != 1)
    fail(errc::constraint_violation, "front tracking is one-dimensional");
  double L = g.extent;
  double h = g.spacing();
  std::vector<std::pair<double, double>> track;
  bool have_prev = false;
  double prev = 0.0;
  for (const field& f : traj.snapshots) {
    std::vector<double> cands;
    for (int i = 0; i < g.points; ++i) {
      double a = f.samples[i];
      double b = f.samples[g.at(i + 1)];
      if (a <= level && level < b)
        cands.push_back(g.coord(i) + h * (level - a) / (b - a));
    }
    if (cands.empty()) {
      std::ostringstream os;
      os << "level " << level << " not crossed upward at t=" << f.time;
      fail(errc::level_not_crossed, os.str());
    }
    double x;
    if (!have_prev) {
      x = cands.front();
      have_prev = true;
    } else {
      double best = cands.front(), bestd = L;
      double pw = prev - L * std::floor(prev / L);
      for (double c : cands) {
        double d = std::abs(torus_delta(pw, c, L));
        if (d < bestd) {
          bestd = d;
          best = c;
        }
      }
      x = prev + torus_delta(pw, best, L);
    }
    prev = x;
    track.emplace_back(f.time, x);
  }
  return track;
}

}  // namespace detail

/// Least-squares front speed from the level-crossing track over the last
/// half of the snapshots. During the fit window the crossing must stay at
/// least extent/20 away from the periodic seam, otherwise the measurement
/// aborts (the mirror front living across the seam would contaminate it).
inline double measure_front_speed(const trajectory& traj, double level) {
  double amp = equilibrium(traj.config.pde);
  if (!(level > 0.0) || !(level < amp))
    fail(errc::constraint_violation, "level must lie strictly in (0, sqrt(a/b))");
  auto track = detail::track_level(traj, level);
  size_t k0 = track.size() / 2;
  if (track.size() - k0 < 2)
    fail(errc::constraint_violation, "need at least two snapshots in the fit window");
  double L = traj.config.grid.extent;
  double margin = L / 20.0;
  double st = 0, sx = 0, stt = 0, stx = 0;
  size_t m = track.size() - k0;
  for (size_t k = k0; k < track.size(); ++k) {
    double xw = track[k].second - L * std::floor(track[k].second / L);
    double seam = std::min(xw, L - xw);
    if (seam < margin) {
      std::ostringstream os;
      os << "crossing at t=" << track[k].first
         << " is within " << margin << " of the periodic seam";
      fail(errc::front_left_window, os.str());
    }
    st += track[k].first;
    sx += track[k].second;
    stt += track[k].first * track[k].first;
    stx += track[k].first * track[k].second;
  }
  double denom = m * stt - st * st;
  if (denom == 0.0)
    fail(errc::constraint_violation, "degenerate time window for the speed fit");
  return (m * stx - st * sx) / denom;
}

/// Wavespeed admissibility: monotone positive fronts require
/// eta^2 >= 4 a / 3. margin = eta^2 - 4a/3.
struct speed_bound_check {
  double eta_sq = 0.0;
  double threshold = 0.0;
  double margin = 0.0;
  bool pass = false;
};

inline speed_bound_check check_speed_bound(double eta, const pde_params& p,
                                           double tolerance = 1e-12) {
  check_pde(p);
  if (!std::isfinite(eta)) fail(errc::non_finite_input, "eta must be finite");
  speed_bound_check out;
  out.eta_sq = eta * eta;
  out.threshold = 4.0 * p.a / 3.0;
  out.margin = out.eta_sq - out.threshold;
  out.pass = out.margin >= -tolerance;
  return out;
}

/// Pointwise gradient bound along a profile: |v'| <= v |eta|. The reported
/// ratio is max |v'| / (v |eta|) over interior samples; the closed-form
/// front attains exactly 1/3 in its leading tail.
struct gradient_bound_check {
  double max_ratio = 0.0;
  int argmax = 0;
  bool pass = false;
};

inline gradient_bound_check check_gradient_bound(const wave_profile& w,
                                                 double tolerance = 1e-3) {
  if (w.v.size() < 3)
    fail(errc::constraint_violation, "profile too short for a gradient check");
  if (w.eta == 0.0)
    fail(errc::constraint_violation, "profile carries no wavespeed");
  gradient_bound_check out;
  for (size_t i = 1; i + 1 < w.v.size(); ++i) {
    if (!(w.v[i] > 0.0))
      fail(errc::non_positive_sample, "profile sample must be positive");
    double vp = (w.v[i + 1] - w.v[i - 1]) / (2.0 * w.spacing);
    double ratio = std::abs(vp) / (w.v[i] * std::abs(w.eta));
    if (ratio > out.max_ratio) {
      out.max_ratio = ratio;
      out.argmax = static_cast<int>(i);
    }
  }
  out.pass = out.max_ratio <= 1.0 + tolerance;
  return out;
}

}  // namespace nwlab
