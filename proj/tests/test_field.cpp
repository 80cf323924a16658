#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "nwlab/field.hpp"

using namespace nwlab;

namespace {

constexpr double tau = 2.0 * std::numbers::pi;

field sine_1d(int points, double extent, int mode, double offset = 0.0) {
  field f = make_field(make_grid(1, points, extent));
  for (int i = 0; i < points; ++i)
    f.samples[i] = offset + std::sin(tau * mode * f.grid.coord(i) / extent);
  return f;
}

field sine_2d(int points, double extent) {
  field f = make_field(make_grid(2, points, extent));
  for (int i = 0; i < points; ++i)
    for (int j = 0; j < points; ++j)
      f.samples[f.grid.at(i, j)] =
          std::sin(tau * f.grid.coord(i) / extent) *
          std::cos(tau * 2.0 * f.grid.coord(j) / extent);
  return f;
}

double order_from_halving(double coarse, double fine) {
  return std::log2(coarse / fine);
}

}  // namespace

TEST_CASE("grid construction and wrapping") {
  grid g = make_grid(1, 16, 4.0);
  CHECK(g.spacing() == Catch::Approx(0.25));
  CHECK(g.size() == 16);
  CHECK(g.wrap(-1) == 15);
  CHECK(g.wrap(16) == 0);
  CHECK(g.wrap(35) == 3);
  CHECK(g.coord(4) == Catch::Approx(1.0));

  grid g2 = make_grid(2, 8, 2.0);
  CHECK(g2.size() == 64);
  CHECK(g2.at(1, 2) == 10);
  CHECK(g2.at(-1, 0) == 56);
  CHECK(g2.at(8, 8) == 0);

  CHECK_THROWS_AS(make_grid(3, 16, 1.0), error);
  CHECK_THROWS_AS(make_grid(1, 4, 1.0), error);
  CHECK_THROWS_AS(make_grid(1, 16, 0.0), error);
  CHECK_THROWS_AS(make_grid(1, 16, -2.0), error);
}

TEST_CASE("log_field maps samples and rejects non-positive values") {
  field f = make_field(make_grid(1, 8, 1.0), std::exp(2.0));
  field l = log_field(f);
  for (double s : l.samples) CHECK(s == Catch::Approx(2.0));

  f.samples[5] = 0.0;
  try {
    log_field(f);
    FAIL("expected a throw");
  } catch (const error& e) {
    CHECK(e.code() == errc::non_positive_sample);
    CHECK(std::string(e.what()).find("node 5") != std::string::npos);
  }
  f.samples[5] = -1.0;
  CHECK_THROWS_AS(log_field(f), error);
}

TEST_CASE("laplacian annihilates constants exactly") {
  for (int dim : {1, 2}) {
    field f = make_field(make_grid(dim, 16, 3.0), 7.25);
    field lap = laplacian(f);
    CHECK(max_abs(lap) == 0.0);
    CHECK(max_abs(gradient_sq(f)) == 0.0);
    CHECK(max_abs(hessian_sq(f)) == 0.0);
  }
}

TEST_CASE("laplacian converges at second order on a 1d sine") {
  // exact: lap sin(kx) = -k^2 sin(kx)
  auto err = [](int points) {
    double extent = tau;
    field f = sine_1d(points, extent, 1);
    field lap = laplacian(f);
    double worst = 0.0;
    for (int i = 0; i < points; ++i)
      worst = std::max(worst, std::abs(lap.samples[i] + f.samples[i]));
    return worst;
  };
  double e64 = err(64), e128 = err(128), e256 = err(256);
  CHECK(order_from_halving(e64, e128) == Catch::Approx(2.0).margin(0.1));
  CHECK(order_from_halving(e128, e256) == Catch::Approx(2.0).margin(0.1));
}

TEST_CASE("laplacian converges at second order on a 2d product mode") {
  // u = sin(x) cos(2y) on [0, tau)^2 has lap u = -5 u
  auto err = [](int points) {
    field f = sine_2d(points, tau);
    field lap = laplacian(f);
    double worst = 0.0;
    for (size_t k = 0; k < f.samples.size(); ++k)
      worst = std::max(worst, std::abs(lap.samples[k] + 5.0 * f.samples[k]));
    return worst;
  };
  double e32 = err(32), e64 = err(64);
  CHECK(order_from_halving(e32, e64) == Catch::Approx(2.0).margin(0.1));
}

TEST_CASE("gradient_sq converges on a 1d sine") {
  // |grad sin x|^2 = cos^2 x
  auto err = [](int points) {
    field f = sine_1d(points, tau, 1);
    field gs = gradient_sq(f);
    double worst = 0.0;
    for (int i = 0; i < points; ++i) {
      double c = std::cos(f.grid.coord(i));
      worst = std::max(worst, std::abs(gs.samples[i] - c * c));
    }
    return worst;
  };
  double e64 = err(64), e128 = err(128);
  CHECK(order_from_halving(e64, e128) == Catch::Approx(2.0).margin(0.1));
}

TEST_CASE("grad_dot is consistent with gradient_sq") {
  field f = sine_2d(32, tau);
  field a = grad_dot(f, f);
  field b = gradient_sq(f);
  for (size_t k = 0; k < a.samples.size(); ++k)
    CHECK(a.samples[k] == Catch::Approx(b.samples[k]).margin(1e-14));

  field other = make_field(make_grid(2, 16, tau));
  CHECK_THROWS_AS(grad_dot(f, other), error);
}

TEST_CASE("operators are invariant under adding a constant") {
  field f = sine_1d(128, tau, 2);
  field g = sine_1d(128, tau, 2, 10.0);
  field lf = laplacian(f), lg = laplacian(g);
  field gf = gradient_sq(f), gg = gradient_sq(g);
  field hf = hessian_sq(f), hg = hessian_sq(g);
  for (int i = 0; i < 128; ++i) {
    CHECK(std::abs(lf.samples[i] - lg.samples[i]) < 1e-8);
    CHECK(std::abs(gf.samples[i] - gg.samples[i]) < 1e-8);
    CHECK(std::abs(hf.samples[i] - hg.samples[i]) < 1e-7);
  }
}

TEST_CASE("integral of a laplacian telescopes to zero on the torus") {
  field f = sine_2d(64, tau);
  for (size_t k = 0; k < f.samples.size(); ++k)
    f.samples[k] = std::exp(f.samples[k]);  // break symmetry
  double total = integral(laplacian(f));
  CHECK(std::abs(total) < 1e-10);

  field f1 = sine_1d(256, 5.0, 3, 2.0);
  for (int i = 0; i < 256; ++i) f1.samples[i] = std::exp(f1.samples[i]);
  CHECK(std::abs(integral(laplacian(f1))) < 1e-9);
}

TEST_CASE("integral measures the cell volume") {
  field f = make_field(make_grid(1, 100, 5.0), 2.0);
  CHECK(integral(f) == Catch::Approx(10.0).epsilon(1e-13));
  field f2 = make_field(make_grid(2, 32, 4.0), 3.0);
  CHECK(integral(f2) == Catch::Approx(48.0).epsilon(1e-13));
}

TEST_CASE("hessian_sq matches the analytic Frobenius norm on a 2d mode") {
  // u = sin(x) cos(2y): u_xx = -u, u_yy = -4u, u_xy = cos(x)(-2 sin(2y))
  auto err = [](int points) {
    field f = sine_2d(points, tau);
    field hs = hessian_sq(f);
    double worst = 0.0;
    for (int i = 0; i < points; ++i)
      for (int j = 0; j < points; ++j) {
        double x = f.grid.coord(i), y = f.grid.coord(j);
        double u = std::sin(x) * std::cos(2.0 * y);
        double uxy = -2.0 * std::cos(x) * std::sin(2.0 * y);
        double exact = u * u + 2.0 * uxy * uxy + 16.0 * u * u;
        worst = std::max(worst, std::abs(hs.samples[f.grid.at(i, j)] - exact));
      }
    return worst;
  };
  double e32 = err(32), e64 = err(64);
  CHECK(order_from_halving(e32, e64) == Catch::Approx(2.0).margin(0.15));
}

TEST_CASE("Bochner residual vanishes at second order") {
  auto worst_1d = [](int points) {
    field f = sine_1d(points, tau, 1, 2.0);
    for (int i = 0; i < points; ++i) f.samples[i] = std::log(f.samples[i]);
    return max_abs(bochner_residual(f));
  };
  double b64 = worst_1d(64), b128 = worst_1d(128), b256 = worst_1d(256);
  double p1 = order_from_halving(b64, b128);
  double p2 = order_from_halving(b128, b256);
  CHECK(p1 >= 1.8);
  CHECK(p1 <= 2.2);
  CHECK(p2 >= 1.8);
  CHECK(p2 <= 2.2);

  auto worst_2d = [](int points) {
    field f = sine_2d(points, tau);
    for (size_t k = 0; k < f.samples.size(); ++k)
      f.samples[k] = std::log(2.5 + f.samples[k]);
    return max_abs(bochner_residual(f));
  };
  double c64 = worst_2d(64), c128 = worst_2d(128);
  double q = order_from_halving(c64, c128);
  CHECK(q >= 1.8);
  CHECK(q <= 2.2);
}

TEST_CASE("extrema helpers") {
  field f = sine_1d(64, tau, 1);
  f.samples[10] = -3.5;
  f.samples[20] = 1.75;
  CHECK(max_abs(f) == Catch::Approx(3.5));
  CHECK(min_value(f) == Catch::Approx(-3.5));
  CHECK(argmin(f) == 10);
}

TEST_CASE("snapshot format is stable and exact") {
  field f = make_field(make_grid(1, 8, 2.0));
  f.time = 0.125;
  for (int i = 0; i < 8; ++i) f.samples[i] = 1.0 / (i + 1.0);
  std::ostringstream os;
  write_snapshot(f, os);
  std::string text = os.str();
  CHECK(text.find("# t=0.125 dim=1 N=8 L=2") == 0);
  CHECK(text.find("\n1\n0.5\n") != std::string::npos);
  // shortest-roundtrip: 1/3 must re-read to the identical double
  CHECK(text.find(format_g17(1.0 / 3.0)) != std::string::npos);
  CHECK(std::stod(format_g17(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(std::stod(format_g17(0.1)) == 0.1);
}
