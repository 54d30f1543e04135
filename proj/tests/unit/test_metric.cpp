#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "conelab/error.hpp"
#include "conelab/metric.hpp"
#include "conelab/tridiag.hpp"

using namespace conelab;
using metric::Mat;
using metric::Vec;

namespace {

// Round metric of radius R on R^n via stereographic projection:
// g = (2R^2 / (R^2 + |x|^2))^2 delta, scal = n(n-1)/R^2.
Mat stereographic(const Vec& x, double R) {
  const double f = 2.0 * R * R / (R * R + x.squaredNorm());
  return f * f * Mat::Identity(x.size(), x.size());
}

}  // namespace

TEST_CASE("chart indexing round-trips") {
  metric::Chart c({{0, 1, 5}, {-1, 1, 7}, {2, 3, 6}});
  CHECK(c.node_count() == 5 * 7 * 6);
  for (std::size_t i = 0; i < c.node_count(); i += 17) CHECK(c.index(c.node(i)) == i);
  CHECK(c.coords(c.node(0))[1] == doctest::Approx(-1.0));
  CHECK(c.margin(c.center_node()) == 2);
  CHECK_THROWS_AS(metric::Chart({{0, 1, 3}}), Error);
}

TEST_CASE("polar christoffel symbols") {
  for (double r : {0.5, 2.0, 3.0}) {
    metric::Chart c = metric::Chart::centered((Vec(2) << r, 0.4).finished(), Vec::Constant(2, 1e-3));
    metric::MetricField g = metric::MetricField::sample(c, [](const Vec& x) {
      Mat m = Mat::Identity(2, 2);
      m(1, 1) = x[0] * x[0];
      return m;
    });
    metric::Christoffel G = metric::christoffel(g, c.center_node(), metric::Method::Stencil);
    CHECK(G(0, 1, 1) == doctest::Approx(-r).epsilon(1e-7));
    CHECK(G(1, 0, 1) == doctest::Approx(1.0 / r).epsilon(1e-7));
    CHECK(G(1, 1, 0) == doctest::Approx(1.0 / r).epsilon(1e-7));
    CHECK(std::abs(G(0, 0, 0)) < 1e-9);
    CHECK(std::abs(metric::scalar_curvature(g, c.center_node(), metric::Method::Stencil)) < 1e-5);
  }
}

TEST_CASE("round spheres have constant scal n(n-1)/R^2") {
  for (int n : {2, 3, 4}) {
    const double R = 1.7;
    Vec center = Vec::Constant(n, 0.2);
    metric::Chart c = metric::Chart::centered(center, Vec::Constant(n, 1e-3));
    metric::MetricField g = metric::MetricField::sample(c, [&](const Vec& x) { return stereographic(x, R); });
    CHECK(metric::scalar_curvature(g, c.center_node(), metric::Method::Stencil) ==
          doctest::Approx(n * (n - 1.0) / (R * R)).epsilon(1e-5));
  }
}

TEST_CASE("hyperbolic half-space has scal -n(n-1)") {
  const int n = 3;
  metric::Chart c = metric::Chart::centered((Vec(3) << 0.1, -0.3, 0.8).finished(), Vec::Constant(3, 1e-3));
  metric::MetricField g = metric::MetricField::sample(c, [](const Vec& x) { return Mat::Identity(3, 3) / (x[2] * x[2]); });
  CHECK(metric::scalar_curvature(g, c.center_node(), metric::Method::Stencil) == doctest::Approx(-n * (n - 1.0)).epsilon(1e-5));
}

TEST_CASE("conformal transformation law on a flat background") {
  // u^{4/(n-2)} delta with u = (2/(1 + |x|^2))^{(n-2)/2} is the unit sphere.
  const int n = 3;
  auto u_of = [](const Vec& x) { return std::sqrt(2.0 / (1.0 + x.squaredNorm())); };
  metric::Chart c = metric::Chart::centered((Vec(3) << 0.3, 0.1, -0.2).finished(), Vec::Constant(3, 1e-3));
  metric::MetricField flat = metric::MetricField::sample(c, [](const Vec&) { return Mat::Identity(3, 3); });
  metric::ScalarField u = metric::ScalarField::sample(c, u_of);
  metric::MetricField g = metric::conformal_deform(flat, u);
  CHECK(metric::scalar_curvature(g, c.center_node(), metric::Method::Stencil) == doctest::Approx(6.0).epsilon(1e-5));
  // Analytic Laplacian of u: with s = |x|^2, u = sqrt(2) (1+s)^{-1/2}.
  const Vec x = c.coords(c.center_node());
  const double s = x.squaredNorm();
  const double lap = std::sqrt(2.0) * (-3.0 * std::pow(1 + s, -1.5) + 3.0 * s * std::pow(1 + s, -2.5));
  CHECK(metric::conformal_scal(0.0, u_of(x), lap, n) == doctest::Approx(6.0).epsilon(1e-12));
  CHECK(metric::laplacian(flat, u, c.center_node(), metric::Method::Stencil) == doctest::Approx(lap).epsilon(1e-5));
}

TEST_CASE("conformal_scal rejects low dimensions and nonpositive factors") {
  CHECK_THROWS_AS(metric::conformal_scal(0.0, 1.0, 0.0, 2), Error);
  CHECK_THROWS_AS(metric::conformal_scal(0.0, -1.0, 0.0, 3), Error);
}

TEST_CASE("level sets of the radius are round spheres") {
  for (double r : {0.5, 1.0, 2.0}) {
    metric::Chart c = metric::Chart::centered((Vec(3) << r, 0.0, 0.0).finished(), Vec::Constant(3, 1e-3));
    metric::MetricField flat = metric::MetricField::sample(c, [](const Vec&) { return Mat::Identity(3, 3); });
    metric::ScalarField f = metric::ScalarField::sample(c, [](const Vec& x) { return x.norm(); });
    metric::ShapeResult s = metric::level_set_shape(flat, f, c.center_node(), metric::Method::Stencil);
    CHECK(s.trace == doctest::Approx(2.0 / r).epsilon(1e-6));
    CHECK(s.normal[0] == doctest::Approx(-1.0));
  }
  metric::Chart c = metric::Chart::centered(Vec::Zero(2), Vec::Constant(2, 1e-3));
  metric::MetricField flat = metric::MetricField::sample(c, [](const Vec&) { return Mat::Identity(2, 2); });
  metric::ScalarField constant = metric::ScalarField::sample(c, [](const Vec&) { return 1.0; });
  CHECK_THROWS_AS(metric::level_set_shape(flat, constant, c.center_node(), metric::Method::Stencil), Error);
}

TEST_CASE("conformal shape shift matches a rescaled sphere") {
  // Under u^{4/(n-2)} delta with u constant the sphere of radius r has
  // principal curvatures u^{-2/(n-2)} / r; the shift returns them times u^{2/(n-2)}.
  const int n = 5;
  const double r = 0.8, u = 3.0;
  Mat A = Mat::Identity(n - 1, n - 1) / r;
  Mat shifted = metric::conformal_shape_shift(A, Mat::Identity(n - 1, n - 1), u, Vec::Zero(n), Vec::Unit(n, 0), n);
  CHECK((shifted - A).norm() < 1e-14);
  // Inversion u = r^{2-n} reverses the sphere: the inward normal sees -(n-1)/r.
  Vec grad = Vec::Zero(n);
  grad[0] = -(n - 2.0) * std::pow(r, -(n - 1.0));
  Mat flipped = metric::conformal_shape_shift(A, Mat::Identity(n - 1, n - 1), std::pow(r, 2.0 - n), grad, -Vec::Unit(n, 0), n);
  CHECK(std::abs(metric::trace_relative(flipped, Mat::Identity(n - 1, n - 1)) + (n - 1.0) / r) < 1e-12);
}

TEST_CASE("separable diagonal jets agree with stencils") {
  metric::SeparableDiagonal sd(2);
  sd.set_factor(1, 0, {[](double x) { return std::array<double, 3>{std::sin(x) * std::sin(x), std::sin(2 * x), 2 * std::cos(2 * x)}; }});
  metric::Chart c = metric::Chart::centered((Vec(2) << 1.0, 0.5).finished(), Vec::Constant(2, 1e-3));
  metric::MetricField g = metric::MetricField::from_analytic(c, sd.analytic());
  const double analytic = metric::scalar_curvature(g, c.center_node(), metric::Method::Analytic);
  CHECK(analytic == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(metric::scalar_curvature(g, c.center_node(), metric::Method::Stencil) == doctest::Approx(analytic).epsilon(1e-5));
}

TEST_CASE("tridiagonal solve and lowest eigenpair match dense Eigen") {
  const int n = 12;
  std::vector<double> lo(n), d(n), up(n), rhs(n), off(n - 1);
  Mat dense = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    d[i] = 4.0 + 0.1 * i;
    lo[i] = -1.0 - 0.01 * i;
    up[i] = -1.0 + 0.02 * i;
    rhs[i] = std::sin(i);
    dense(i, i) = d[i];
    if (i > 0) dense(i, i - 1) = lo[i];
    if (i + 1 < n) dense(i, i + 1) = up[i];
  }
  std::vector<double> x = tridiag::solve(lo, d, up, rhs);
  Vec ref = dense.partialPivLu().solve(Eigen::Map<Vec>(rhs.data(), n));
  for (int i = 0; i < n; ++i) CHECK(x[i] == doctest::Approx(ref[i]).epsilon(1e-12));

  Mat sym = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    sym(i, i) = d[i];
    if (i + 1 < n) off[i] = sym(i, i + 1) = sym(i + 1, i) = -1.0 - 0.05 * i;
  }
  tridiag::Eigenpair e = tridiag::lowest(d, off);
  Eigen::SelfAdjointEigenSolver<Mat> es(sym);
  CHECK(e.value == doctest::Approx(es.eigenvalues()[0]).epsilon(1e-12));
}
