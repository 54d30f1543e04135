#include <doctest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>

#include "conelab/barrier.hpp"
#include "conelab/error.hpp"
#include "conelab/perron.hpp"

using namespace conelab;
using metric::Vec;

namespace {

cone::DeformedCone simons(double alpha) { return cone::make_deformed(cone::make_cone(3, 3), alpha); }

}  // namespace

TEST_CASE("green function values") {
  CHECK(barrier::green(7, 1.0) == 1.0);
  CHECK(barrier::green(7, 2.0) == doctest::Approx(1.0 / 32.0));
  CHECK_THROWS_AS(barrier::green(7, 0.0), Error);
}

TEST_CASE("green function is harmonic on deformed cones") {
  for (double alpha : {0.0, -0.5, -1.5}) {
    const barrier::GreenResidual g = barrier::green_laplacian_residual(simons(alpha), metric::Method::Analytic);
    CHECK(g.sup < 1e-12);
  }
  CHECK_THROWS_AS(barrier::green_laplacian_residual(simons(0.0), metric::Method::Stencil, 0.0), Error);
}

TEST_CASE("shell cutoff is a smooth step") {
  CHECK(barrier::shell_cutoff(0.5)[0] == 1.0);
  CHECK(barrier::shell_cutoff(2.5)[0] == 0.0);
  CHECK(barrier::shell_cutoff(1.5)[0] == doctest::Approx(0.5));
  const double h = 1e-5;
  for (double x : {1.2, 1.5, 1.8}) {
    const auto c = barrier::shell_cutoff(x);
    CHECK(c[1] == doctest::Approx((barrier::shell_cutoff(x + h)[0] - barrier::shell_cutoff(x - h)[0]) / (2 * h)).epsilon(1e-6));
    CHECK(c[2] == doctest::Approx((barrier::shell_cutoff(x + h)[1] - barrier::shell_cutoff(x - h)[1]) / (2 * h)).epsilon(1e-5));
    CHECK(c[1] <= 0.0);
  }
}

TEST_CASE("truncation penalty is linear in mu") {
  const cone::DeformedCone d = simons(-1.0);
  const double p1 = barrier::truncate({d, 1e-3, true}).penalty;
  const double p2 = barrier::truncate({d, 3e-3, true}).penalty;
  CHECK(p2 == doctest::Approx(3.0 * p1).epsilon(1e-10));
  CHECK(barrier::truncate({d, 0.0, true}).penalty == 0.0);
  CHECK_THROWS_AS(barrier::truncate({d, -1.0, true}), Error);
}

TEST_CASE("deflection radius follows mu^{1/(n-2)}") {
  for (int p : {3, 4}) {
    const cone::DeformedCone d = cone::make_deformed(cone::make_cone(p, 3), -0.5);
    const int n = d.base.n;
    for (double mu : {1e-6, 1e-3, 0.5}) {
      CHECK(barrier::deflection_radius({d, mu, false}) == doctest::Approx(std::pow(mu, 1.0 / (n - 2.0))).epsilon(1e-10));
    }
  }
  CHECK_THROWS_AS(barrier::deflection_radius({simons(0.0), 0.0, false}), Error);
}

TEST_CASE("area profile has its minimum at the deflection radius") {
  const barrier::BarrierSpec b{simons(-1.0), 1e-4, false};
  const double theta = barrier::deflection_radius(b);
  CHECK(barrier::area_profile(b, theta) < barrier::area_profile(b, 0.9 * theta));
  CHECK(barrier::area_profile(b, theta) < barrier::area_profile(b, 1.1 * theta));
  CHECK(barrier::sphere_trace(b, theta) == doctest::Approx(0.0).scale(1.0 / theta));
}

TEST_CASE("scal condition and the bisected weight") {
  const cone::DeformedCone d = simons(-1.0);
  const double iota = barrier::measure_iota(d);
  CHECK(iota == doctest::Approx(cone::deformed_scal(d, 1.0)).epsilon(1e-9));
  const barrier::MuBisection mb = barrier::bisect_mu(d, iota);
  CHECK(barrier::scal_condition_margin({d, 0.9 * mb.mu_h, true}, iota) >= 0.0);
  CHECK(barrier::scal_condition_margin({d, 1.5 * mb.mu_h, true}, iota) < 0.0);
}

TEST_CASE("line constant is the integral of (1 + t^2)^{-(e+1)/2}") {
  boost::math::quadrature::tanh_sinh<double> ts;
  for (double e : {0.5, 1.0, 2.0, 4.5}) {
    const double q = ts.integrate([&](double t) { return std::pow(1.0 + t * t, -0.5 * (e + 1.0)); },
                                  -std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity());
    CHECK(barrier::line_constant(e) == doctest::Approx(q).epsilon(1e-10));
  }
  CHECK(barrier::line_exponent(7, 0.0) == doctest::Approx(4.0));
  CHECK_THROWS_AS(barrier::line_exponent(7, -5.0), Error);
}

TEST_CASE("stieltjes sums approach the line barrier at first order") {
  barrier::LineBarrierSpec ls;
  ls.n = 5;
  ls.points = {{Vec::Zero(4), 0.3, 0.0}};
  Vec x = Vec::Zero(5);
  x[0] = 0.4;
  x[4] = 0.3;
  const double limit = barrier::stieltjes_limit(ls, 0.0, 1.0, x);
  ls.l = 50;
  const double e1 = std::abs(barrier::stieltjes_superpose(ls, 0.0, 1.0, x) - limit);
  ls.l = 100;
  const double e2 = std::abs(barrier::stieltjes_superpose(ls, 0.0, 1.0, x) - limit);
  CHECK(e1 / e2 == doctest::Approx(2.0).epsilon(0.1));
  ls.points.front().position = Vec::Zero(3);
  CHECK_THROWS_AS(barrier::validate(ls), Error);
}

TEST_CASE("tube checks") {
  const int n = 5;
  const double tau = 0.1;
  barrier::Tube sphere{Vec::Zero(n), Vec(), tau, 0.0};
  const auto flat = barrier::superpose({});
  const barrier::TubeCheck plain = barrier::tube_barrier_check(flat, sphere, n);
  CHECK(plain.margin == doctest::Approx(-(n - 1.0) / tau).epsilon(1e-12));
  CHECK_FALSE(plain.ok);
  barrier::PointSource s{Vec::Zero(n), std::pow(2.0 * tau, n - 2.0), n - 2.0, 0.0};
  CHECK(barrier::tube_barrier_check(barrier::superpose({s}), sphere, n).ok);
  CHECK_THROWS_AS(barrier::tube_barrier_check(flat, {Vec::Zero(n), Vec(), -1.0, 0.0}, n), Error);
}

TEST_CASE("dimension shift arithmetic") {
  CHECK(barrier::kappa_rational(7) == barrier::Rational(5, 24));
  for (int n = 5; n <= 12; ++n) {
    const barrier::DimshiftReport r = barrier::dimshift_scal_sign(n, 2.0, 0.5, 0.3);
    CHECK(r.coefficient == barrier::Rational(1, 4LL * (n - 1) * (n - 2)));
    CHECK(r.positive);
    CHECK(r.residual == doctest::Approx(-r.margin).epsilon(1e-9));
  }
  CHECK_THROWS_AS(barrier::dimshift_scal_sign(3, 1.0, 1.0, 0.3), Error);
}
