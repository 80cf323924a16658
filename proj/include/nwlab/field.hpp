#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "nwlab/error.hpp"

namespace nwlab {

/// Uniform periodic grid on [0, extent)^dim, dim in {1, 2}, with `points`
/// samples per axis. 2d data is stored row-major: index (i, j) -> i*points + j.
struct grid {
  int dim = 1;
  int points = 8;
  double extent = 1.0;

  double spacing() const { return extent / points; }
  int size() const { return dim == 1 ? points : points * points; }

  int wrap(int i) const {
    int m = i % points;
    return m < 0 ? m + points : m;
  }

  int at(int i) const { return wrap(i); }
  int at(int i, int j) const { return wrap(i) * points + wrap(j); }
  double coord(int i) const { return i * spacing(); }
};

inline grid make_grid(int dim, int points, double extent) {
  if (dim != 1 && dim != 2)
    fail(errc::constraint_violation, "grid dim must be 1 or 2");
  if (points < 8)
    fail(errc::constraint_violation, "grid needs at least 8 points per axis");
  if (!std::isfinite(extent) || !(extent > 0.0))
    fail(errc::constraint_violation, "grid extent must be positive");
  return grid{dim, points, extent};
}

/// Sampled scalar field on a grid at one instant.
struct field {
  ::nwlab::grid grid;
  double time = 0.0;
  std::vector<double> samples;
};

inline field make_field(const grid& g, double value = 0.0) {
  return field{g, 0.0, std::vector<double>(static_cast<size_t>(g.size()), value)};
}

inline void check_same_grid(const field& u, const field& v) {
  if (u.grid.dim != v.grid.dim || u.grid.points != v.grid.points ||
      u.grid.extent != v.grid.extent)
    fail(errc::constraint_violation, "fields live on different grids");
}

/// Pointwise logarithm. Every sample must be strictly positive.
inline field log_field(const field& f) {
  field out = f;
  for (size_t k = 0; k < f.samples.size(); ++k) {
    if (!(f.samples[k] > 0.0)) {
      std::ostringstream os;
      os << "sample at node " << k << " is not positive (" << f.samples[k]
         << ")";
      fail(errc::non_positive_sample, os.str());
    }
    out.samples[k] = std::log(f.samples[k]);
  }
  return out;
}

/// Second-order periodic central stencils. All operators commute with adding
/// a constant (up to roundoff) and are translation-equivariant on the torus.
inline field laplacian(const field& u) {
  field out = u;
  const grid& g = u.grid;
  double inv_h2 = 1.0 / (g.spacing() * g.spacing());
  if (g.dim == 1) {
    for (int i = 0; i < g.points; ++i)
      out.samples[i] = (u.samples[g.at(i + 1)] - 2.0 * u.samples[i] +
                        u.samples[g.at(i - 1)]) *
                       inv_h2;
  } else {
    for (int i = 0; i < g.points; ++i)
      for (int j = 0; j < g.points; ++j)
        out.samples[g.at(i, j)] =
            (u.samples[g.at(i + 1, j)] + u.samples[g.at(i - 1, j)] +
             u.samples[g.at(i, j + 1)] + u.samples[g.at(i, j - 1)] -
             4.0 * u.samples[g.at(i, j)]) *
            inv_h2;
  }
  return out;
}

/// |grad u|^2 from central first differences.
inline field gradient_sq(const field& u) {
  field out = u;
  const grid& g = u.grid;
  double inv_2h = 1.0 / (2.0 * g.spacing());
  if (g.dim == 1) {
    for (int i = 0; i < g.points; ++i) {
      double dx = (u.samples[g.at(i + 1)] - u.samples[g.at(i - 1)]) * inv_2h;
      out.samples[i] = dx * dx;
    }
  } else {
    for (int i = 0; i < g.points; ++i)
      for (int j = 0; j < g.points; ++j) {
        double dx =
            (u.samples[g.at(i + 1, j)] - u.samples[g.at(i - 1, j)]) * inv_2h;
        double dy =
            (u.samples[g.at(i, j + 1)] - u.samples[g.at(i, j - 1)]) * inv_2h;
        out.samples[g.at(i, j)] = dx * dx + dy * dy;
      }
  }
  return out;
}

/// grad u . grad v from central first differences.
inline field grad_dot(const field& u, const field& v) {
  check_same_grid(u, v);
  field out = u;
  const grid& g = u.grid;
  double inv_2h = 1.0 / (2.0 * g.spacing());
  if (g.dim == 1) {
    for (int i = 0; i < g.points; ++i) {
      double du = (u.samples[g.at(i + 1)] - u.samples[g.at(i - 1)]) * inv_2h;
      double dv = (v.samples[g.at(i + 1)] - v.samples[g.at(i - 1)]) * inv_2h;
      out.samples[i] = du * dv;
    }
  } else {
    for (int i = 0; i < g.points; ++i)
      for (int j = 0; j < g.points; ++j) {
        double dux =
            (u.samples[g.at(i + 1, j)] - u.samples[g.at(i - 1, j)]) * inv_2h;
        double duy =
            (u.samples[g.at(i, j + 1)] - u.samples[g.at(i, j - 1)]) * inv_2h;
        double dvx =
            (v.samples[g.at(i + 1, j)] - v.samples[g.at(i - 1, j)]) * inv_2h;
        double dvy =
            (v.samples[g.at(i, j + 1)] - v.samples[g.at(i, j - 1)]) * inv_2h;
        out.samples[g.at(i, j)] = dux * dvx + duy * dvy;
      }
  }
  return out;
}

/// Squared Frobenius norm of the Hessian: u_xx^2 in 1d,
/// u_xx^2 + 2 u_xy^2 + u_yy^2 in 2d (mixed term by the 4-corner stencil).
inline field hessian_sq(const field& u) {
  field out = u;
  const grid& g = u.grid;
  double h = g.spacing();
  double inv_h2 = 1.0 / (h * h);
  if (g.dim == 1) {
    for (int i = 0; i < g.points; ++i) {
      double uxx = (u.samples[g.at(i + 1)] - 2.0 * u.samples[i] +
                    u.samples[g.at(i - 1)]) *
                   inv_h2;
      out.samples[i] = uxx * uxx;
    }
  } else {
    double inv_4h2 = 1.0 / (4.0 * h * h);
    for (int i = 0; i < g.points; ++i)
      for (int j = 0; j < g.points; ++j) {
        double c = u.samples[g.at(i, j)];
        double uxx =
            (u.samples[g.at(i + 1, j)] - 2.0 * c + u.samples[g.at(i - 1, j)]) *
            inv_h2;
        double uyy =
            (u.samples[g.at(i, j + 1)] - 2.0 * c + u.samples[g.at(i, j - 1)]) *
            inv_h2;
        double uxy = (u.samples[g.at(i + 1, j + 1)] -
                      u.samples[g.at(i + 1, j - 1)] -
                      u.samples[g.at(i - 1, j + 1)] +
                      u.samples[g.at(i - 1, j - 1)]) *
                     inv_4h2;
        out.samples[g.at(i, j)] = uxx * uxx + 2.0 * uxy * uxy + uyy * uyy;
      }
  }
  return out;
}

/// Defect in the Bochner identity
///   lap |grad u|^2 = 2 grad u . grad(lap u) + 2 |hess u|^2,
/// evaluated with the discrete operators above. O(h^2) on smooth fields.
inline field bochner_residual(const field& u) {
  field gs = gradient_sq(u);
  field lap_gs = laplacian(gs);
  field gd = grad_dot(u, laplacian(u));
  field hs = hessian_sq(u);
  field out = u;
  for (size_t k = 0; k < out.samples.size(); ++k)
    out.samples[k] = lap_gs.samples[k] - 2.0 * gd.samples[k] - 2.0 * hs.samples[k];
  return out;
}

/// Discrete integral over the torus (long double accumulation keeps the
/// exact telescoping of stencil sums near roundoff).
inline double integral(const field& u) {
  long double acc = 0.0L;
  for (double s : u.samples) acc += s;
  double h = u.grid.spacing();
  double cell = u.grid.dim == 1 ? h : h * h;
  return static_cast<double>(acc) * cell;
}

inline double max_abs(const field& u) {
  double m = 0.0;
  for (double s : u.samples) m = std::max(m, std::abs(s));
  return m;
}

inline double min_value(const field& u) {
  double m = u.samples.empty() ? 0.0 : u.samples[0];
  for (double s : u.samples) m = std::min(m, s);
  return m;
}

inline int argmin(const field& u) {
  int arg = 0;
  for (size_t k = 1; k < u.samples.size(); ++k)
    if (u.samples[k] < u.samples[arg]) arg = static_cast<int>(k);
  return arg;
}

/// Shortest-roundtrip decimal formatting used by every CSV writer, so that
/// identical runs produce byte-identical files.
inline std::string format_g17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Snapshot format: a single comment header
///   # t=<time> dim=<dim> N=<points> L=<extent>
/// followed by one sample per line in row-major node order.
inline void write_snapshot(const field& f, std::ostream& os) {
  os << "# t=" << format_g17(f.time) << " dim=" << f.grid.dim
     << " N=" << f.grid.points << " L=" << format_g17(f.grid.extent) << "\n";
  for (double s : f.samples) os << format_g17(s) << "\n";
}

}  // namespace nwlab
