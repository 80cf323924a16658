#pragma once

#include <cmath>
#include <sstream>
#include <string>

#include "nwlab/error.hpp"

namespace nwlab {

/// Coefficients of the reaction-diffusion equation
///
///   f_t = lap f + a f - b f^3,   a > 0, b > 0,
///
/// posed on an n-dimensional periodic domain. Positive solutions relax
/// toward the stable equilibrium sqrt(a/b).
struct pde_params {
  double a = 1.0;
  double b = 1.0;
  int n = 1;
};

inline double equilibrium(const pde_params& p) { return std::sqrt(p.a / p.b); }

inline void check_pde(const pde_params& p) {
  if (!std::isfinite(p.a) || !std::isfinite(p.b))
    fail(errc::non_finite_input, "pde coefficients must be finite");
  if (!(p.a > 0.0) || !(p.b > 0.0))
    fail(errc::constraint_violation, "pde coefficients a, b must be positive");
  if (p.n < 1)
    fail(errc::constraint_violation, "dimension n must be at least 1");
}

/// The two admissible gauge families. Which one applies is decided by the
/// sign of the selector q = 4 gamma (alpha - beta) + n alpha^2 b:
/// q < 0 admits a single smooth-in-time gauge (phi); q >= 0 requires the
/// two-piece matched gauge (psi) that switches at a finite positive time.
enum class gauge_branch { phi, psi };

/// Validated coefficient triple (alpha, beta, gamma) for the Harnack
/// quantity
///
///   H = alpha lap(log f) + beta |grad log f|^2 + gamma f^2 + gauge(t).
///
/// Admissibility requires the ordering condition alpha > beta >= 0 and the
/// magnitude condition gamma < 0 with
///
///   gamma <= -n b alpha^2 (2 alpha + beta) / (3 n alpha^2 - 2 (alpha - beta) beta).
///
/// The denominator is always positive under the ordering condition, so the
/// threshold is a well-defined negative number.
struct harnack_params {
  pde_params pde;
  double alpha = 1.0;
  double beta = 0.0;
  double gamma = -1.0;
  gauge_branch branch = gauge_branch::phi;
};

/// Upper admissible bound for gamma given alpha, beta (always negative).
inline double gamma_threshold(double alpha, double beta, const pde_params& p) {
  double n = static_cast<double>(p.n);
  return -n * p.b * alpha * alpha * (2.0 * alpha + beta) /
         (3.0 * n * alpha * alpha - 2.0 * (alpha - beta) * beta);
}

/// Gauge family selector q = 4 gamma (alpha - beta) + n alpha^2 b.
inline double branch_selector(double alpha, double beta, double gamma,
                              const pde_params& p) {
  return 4.0 * gamma * (alpha - beta) +
         static_cast<double>(p.n) * alpha * alpha * p.b;
}

/// Checks a raw coefficient triple and tags it with its gauge branch.
/// Throws error{ordering_violated}, error{magnitude_violated} or
/// error{non_finite_input} with a diagnostic naming the failed condition.
inline harnack_params validate(double alpha, double beta, double gamma,
                               const pde_params& p) {
  check_pde(p);
  if (!std::isfinite(alpha) || !std::isfinite(beta) || !std::isfinite(gamma))
    fail(errc::non_finite_input, "alpha, beta, gamma must be finite");
  if (!(alpha > beta) || !(beta >= 0.0)) {
    std::ostringstream os;
    os << "ordering condition requires alpha > beta >= 0, got alpha=" << alpha
       << " beta=" << beta;
    fail(errc::ordering_violated, os.str());
  }
  double bound = gamma_threshold(alpha, beta, p);
  if (!(gamma < 0.0) || !(gamma <= bound)) {
    std::ostringstream os;
    os << "magnitude condition requires gamma < 0 and gamma <= " << bound
       << ", got gamma=" << gamma;
    fail(errc::magnitude_violated, os.str());
  }
  harnack_params out{p, alpha, beta, gamma, gauge_branch::phi};
  out.branch = branch_selector(alpha, beta, gamma, p) < 0.0
                   ? gauge_branch::phi
                   : gauge_branch::psi;
  return out;
}

/// Ready-made admissible profile: alpha = 1, beta = 0, gamma = -2 n b alpha.
/// Its selector is -7 n alpha^2 b < 0, so it always lands on the phi branch.
inline harnack_params preset_profile(const pde_params& p) {
  double alpha = 1.0;
  return validate(alpha, 0.0, -2.0 * p.n * p.b * alpha, p);
}

/// Constants entering the gauge construction:
///   omega = (1/alpha) sqrt(2 (alpha - beta) / n)
///   mu    = a alpha sqrt(n / (2 (alpha - beta)))
///   nu    = omega + (alpha b / gamma) sqrt(n / (2 (alpha - beta)))
/// They satisfy 2 mu omega = 2 a identically.
struct gauge_constants {
  double omega = 0.0;
  double mu = 0.0;
  double nu = 0.0;
};

inline gauge_constants derive_constants(const harnack_params& hp) {
  double n = static_cast<double>(hp.pde.n);
  double root = std::sqrt(2.0 * (hp.alpha - hp.beta) / n);
  gauge_constants c;
  c.omega = root / hp.alpha;
  c.mu = hp.pde.a * hp.alpha / root;
  c.nu = c.omega + hp.pde.b * hp.alpha / (hp.gamma * root);
  return c;
}

/// Time at which the psi gauge switches from its early 1/t piece to its
/// late crossover piece:
///
///   T = n alpha^2 / (2 (alpha - beta) (-a gamma))
///       * (2 ((alpha - beta) / (n alpha^2)) gamma + b).
///
/// Positive whenever the psi branch applies. Throws error{wrong_branch} on
/// phi-branch parameters.
inline double switch_time(const harnack_params& hp) {
  if (hp.branch != gauge_branch::psi)
    fail(errc::wrong_branch, "switch time is defined only on the psi branch");
  double n = static_cast<double>(hp.pde.n);
  double na2 = n * hp.alpha * hp.alpha;
  double q = 2.0 * ((hp.alpha - hp.beta) / na2) * hp.gamma + hp.pde.b;
  return na2 / (2.0 * (hp.alpha - hp.beta) * (-hp.pde.a * hp.gamma)) * q;
}

}  // namespace nwlab
