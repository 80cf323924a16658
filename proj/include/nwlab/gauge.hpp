#pragma once

#include <cmath>
#include <optional>

#include "nwlab/error.hpp"
#include "nwlab/params.hpp"

namespace nwlab {

// The gauge is the spatially constant, time-dependent offset that makes the
// Harnack quantity nonnegative from every positive initial state. Both
// families blow up like n alpha^2 / (2 (alpha - beta) t) as t -> 0+ and
// decay to -a gamma / b as t -> infinity.
//
// All closed forms below are written against m = exp(-2 a t) (or
// exp(-2 a (t - T))) and expm1 so they stay finite and cancellation-free
// over the whole desk-scale range t in [1e-6 / a, 100 / a].

/// Value of the smooth gauge
///   phi(t) = a alpha (c1 - c2 m) / expm1(-2 a t),
///   c1 = gamma / (alpha b),  c2 = alpha gamma n / q,
/// with q the (negative) branch selector and m = exp(-2 a t).
inline double phi_value(const harnack_params& hp, double t) {
  double q = branch_selector(hp.alpha, hp.beta, hp.gamma, hp.pde);
  double c1 = hp.gamma / (hp.alpha * hp.pde.b);
  double c2 = hp.alpha * hp.gamma * hp.pde.n / q;
  double m = std::exp(-2.0 * hp.pde.a * t);
  return hp.pde.a * hp.alpha * (c1 - c2 * m) / std::expm1(-2.0 * hp.pde.a * t);
}

/// Equivalent factored form of phi built from the derived constants,
///   phi(t) = mu (1/(nu - omega) - m/(nu + omega)) / expm1(-2 a t).
/// nu + omega vanishes only on the branch boundary q = 0, which the phi
/// branch excludes.
inline double phi_value_factored(const harnack_params& hp, double t) {
  gauge_constants c = derive_constants(hp);
  double m = std::exp(-2.0 * hp.pde.a * t);
  return c.mu * (1.0 / (c.nu - c.omega) - m / (c.nu + c.omega)) /
         std::expm1(-2.0 * hp.pde.a * t);
}

inline double phi_derivative(const harnack_params& hp, double t) {
  double a = hp.pde.a;
  double q = branch_selector(hp.alpha, hp.beta, hp.gamma, hp.pde);
  double c1 = hp.gamma / (hp.alpha * hp.pde.b);
  double c2 = hp.alpha * hp.gamma * hp.pde.n / q;
  double m = std::exp(-2.0 * a * t);
  double den = std::expm1(-2.0 * a * t);
  double num = a * hp.alpha * (c1 - c2 * m);
  double num_d = 2.0 * a * a * hp.alpha * c2 * m;
  double den_d = -2.0 * a * m;
  return (num_d * den - num * den_d) / (den * den);
}

inline double phi_second_derivative(const harnack_params& hp, double t) {
  double a = hp.pde.a;
  double q = branch_selector(hp.alpha, hp.beta, hp.gamma, hp.pde);
  double c1 = hp.gamma / (hp.alpha * hp.pde.b);
  double c2 = hp.alpha * hp.gamma * hp.pde.n / q;
  double m = std::exp(-2.0 * a * t);
  double den = std::expm1(-2.0 * a * t);
  double num = a * hp.alpha * (c1 - c2 * m);
  double num_d = 2.0 * a * a * hp.alpha * c2 * m;
  double num_dd = -4.0 * a * a * a * hp.alpha * c2 * m;
  double den_d = -2.0 * a * m;
  double den_dd = 4.0 * a * a * m;
  return (num_dd * den * den - num * den_dd * den - 2.0 * num_d * den_d * den +
          2.0 * num * den_d * den_d) /
         (den * den * den);
}

/// Early piece of the matched gauge: psi(t) = n alpha^2 / (2 (alpha - beta) t)
/// on (0, T]. Solves 2 ((alpha - beta)/(n alpha^2)) psi^2 + psi' = 0 exactly.
inline double psi_head_value(const harnack_params& hp, double t) {
  return hp.pde.n * hp.alpha * hp.alpha / (2.0 * (hp.alpha - hp.beta) * t);
}

inline double psi_head_derivative(const harnack_params& hp, double t) {
  return -hp.pde.n * hp.alpha * hp.alpha /
         (2.0 * (hp.alpha - hp.beta) * t * t);
}

inline double psi_head_second_derivative(const harnack_params& hp, double t) {
  return hp.pde.n * hp.alpha * hp.alpha / ((hp.alpha - hp.beta) * t * t * t);
}

/// Late piece of the matched gauge on [T, infinity), with m = exp(-2a(t-T)):
///   psi(t) = -a n alpha^2 gamma (1 + m) / (n alpha^2 b (1 + m) + 4 gamma (alpha - beta) m).
/// The denominator equals n alpha^2 b + q m >= n alpha^2 b > 0 on the psi
/// branch (selector q >= 0), so this piece is singularity-free.
inline double psi_tail_value(const harnack_params& hp, double T, double t) {
  double na2 = hp.pde.n * hp.alpha * hp.alpha;
  double m = std::exp(-2.0 * hp.pde.a * (t - T));
  double den = na2 * hp.pde.b * (1.0 + m) + 4.0 * hp.gamma * (hp.alpha - hp.beta) * m;
  return -hp.pde.a * na2 * hp.gamma * (1.0 + m) / den;
}

inline double psi_tail_derivative(const harnack_params& hp, double T, double t) {
  double a = hp.pde.a;
  double na2 = hp.pde.n * hp.alpha * hp.alpha;
  double m = std::exp(-2.0 * a * (t - T));
  double den = na2 * hp.pde.b * (1.0 + m) + 4.0 * hp.gamma * (hp.alpha - hp.beta) * m;
  return -8.0 * a * a * na2 * hp.gamma * hp.gamma * (hp.alpha - hp.beta) * m /
         (den * den);
}

inline double psi_tail_second_derivative(const harnack_params& hp, double T,
                                         double t) {
  double a = hp.pde.a;
  double na2 = hp.pde.n * hp.alpha * hp.alpha;
  double m = std::exp(-2.0 * a * (t - T));
  double q4 = 4.0 * hp.gamma * (hp.alpha - hp.beta);
  double den = na2 * hp.pde.b * (1.0 + m) + q4 * m;
  return -16.0 * a * a * a * na2 * hp.gamma * hp.gamma * (hp.alpha - hp.beta) *
         m * (na2 * hp.pde.b * (m - 1.0) + q4 * m) / (den * den * den);
}

/// Time gauge attached to a validated coefficient triple. Construct with
/// make_gauge. switch_at is engaged exactly on the psi branch.
struct time_gauge {
  harnack_params params;
  gauge_constants constants;
  std::optional<double> switch_at;

  double value(double t) const {
    require_time(t);
    if (params.branch == gauge_branch::phi) return phi_value(params, t);
    return t <= *switch_at ? psi_head_value(params, t)
                           : psi_tail_value(params, *switch_at, t);
  }

  double derivative(double t) const {
    require_time(t);
    if (params.branch == gauge_branch::phi) return phi_derivative(params, t);
    return t <= *switch_at ? psi_head_derivative(params, t)
                           : psi_tail_derivative(params, *switch_at, t);
  }

  double second_derivative(double t) const {
    require_time(t);
    if (params.branch == gauge_branch::phi)
      return phi_second_derivative(params, t);
    return t <= *switch_at ? psi_head_second_derivative(params, t)
                           : psi_tail_second_derivative(params, *switch_at, t);
  }

  /// Common limit of both families as t -> infinity: -a gamma / b.
  double limit_at_infinity() const {
    return -params.pde.a * params.gamma / params.pde.b;
  }

  /// Defect in the governing gauge equation at time t. The phi family and
  /// the late psi piece satisfy
  ///   (omega g)^2 - (mu + nu g)^2 + g' = 0;
  /// the early psi piece satisfies
  ///   2 ((alpha - beta)/(n alpha^2)) g^2 + g' = 0.
  /// Exact solutions return roundoff-size values.
  double ode_residual(double t) const {
    require_time(t);
    double g = value(t);
    double gd = derivative(t);
    if (params.branch == gauge_branch::psi && t <= *switch_at) {
      double c = (params.alpha - params.beta) /
                 (params.pde.n * params.alpha * params.alpha);
      return 2.0 * c * g * g + gd;
    }
    double w = constants.omega * g;
    double s = constants.mu + constants.nu * g;
    return w * w - s * s + gd;
  }

 private:
  static void require_time(double t) {
    if (!std::isfinite(t)) fail(errc::non_finite_input, "time must be finite");
    if (!(t > 0.0)) fail(errc::non_positive_time, "gauge requires t > 0");
  }
};

inline time_gauge make_gauge(const harnack_params& hp) {
  time_gauge g{hp, derive_constants(hp), std::nullopt};
  if (hp.branch == gauge_branch::psi) g.switch_at = switch_time(hp);
  return g;
}

}  // namespace nwlab
