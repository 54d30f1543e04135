#include <doctest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>

#include "conelab/cone.hpp"
#include "conelab/error.hpp"

using namespace conelab;
using metric::Vec;

TEST_CASE("simons cone parameters") {
  const cone::ConeSpec c = cone::make_cone(3, 3);
  CHECK(c.n == 7);
  CHECK(c.a == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(c.b == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK_FALSE(c.reduced_dimension);
  CHECK(cone::make_cone(2, 2).reduced_dimension);
  CHECK_THROWS_AS(cone::make_cone(0, 3), Error);
}

TEST_CASE("kappa is the conformal Laplacian constant") {
  CHECK(cone::kappa(3) == doctest::Approx(1.0 / 8.0));
  CHECK(cone::kappa(7) == doctest::Approx(5.0 / 24.0));
}

TEST_CASE("second fundamental form scales like r^-2 and matches the embedding") {
  for (const cone::ConeSpec& c : cone::catalog()) {
    CHECK(cone::second_form_norm2(c, 1.0) == doctest::Approx(c.p + c.q));
    CHECK(cone::second_form_norm2(c, 3.0) == doctest::Approx((c.p + c.q) / 9.0));
    CHECK(cone::cone_scal(c, 2.0) == doctest::Approx(-cone::second_form_norm2(c, 2.0)));
    const cone::EmbeddedCurvature ec =
        cone::embedded_curvature(c, Vec::LinSpaced(c.p + 1, -0.4, 1.3), Vec::LinSpaced(c.q + 1, 0.2, 0.9));
    CHECK(std::abs(ec.mean_curvature) < 1e-12);
    CHECK(ec.norm2 == doctest::Approx(c.p + c.q).epsilon(1e-12));
  }
  CHECK_THROWS_AS(cone::second_form_norm2(cone::make_cone(3, 3), 0.0), Error);
}

TEST_CASE("link geometry") {
  const cone::ConeSpec c = cone::make_cone(3, 3);
  CHECK(cone::link_diameter(c) == doctest::Approx(std::numbers::pi));
  // |S^3(a)| = 2 pi^2 a^3 with a^3 = 2^{-3/2}.
  const double s3 = 2.0 * std::numbers::pi * std::numbers::pi;
  CHECK(cone::link_volume(c) == doctest::Approx(s3 * s3 / 8.0));
  CHECK(cone::sphere_area(1) == doctest::Approx(2.0 * std::numbers::pi));
  CHECK(cone::sphere_area(2) == doctest::Approx(4.0 * std::numbers::pi));
}

TEST_CASE("deformed distance integrates the conformal factor") {
  const cone::ConeSpec c = cone::make_cone(3, 3);
  for (double beta : {-2.0, -1.0, -0.3, 0.0}) {
    const double e = 1.0 + 2.0 * beta / (c.n - 2.0);
    for (double r : {0.01, 0.5, 2.0}) {
      boost::math::quadrature::tanh_sinh<double> ts;
      const double q = ts.integrate([&](double s) { return std::pow(s, e - 1.0); }, 0.0, r);
      CHECK(cone::deformed_distance(c, beta, r) == doctest::Approx(q).epsilon(1e-9));
    }
  }
  CHECK_THROWS_AS(cone::deformed_distance(c, -2.5, 1.0), Error);
}

TEST_CASE("distortion bracket") {
  const cone::DistortionBracket b = cone::distortion_bounds(0.25, 0.5, 0.5, 1.0, 2.0);
  CHECK(b.lower == doctest::Approx(0.5));
  CHECK(b.upper == doctest::Approx(1.0));
  CHECK_THROWS_AS(cone::distortion_bounds(1.0, 0.6, 0.5, 1.0, 2.0), Error);
  CHECK_THROWS_AS(cone::distortion_bounds(1.0, 0.1, 0.5, 3.0, 2.0), Error);
}

TEST_CASE("deformed cone scal is constant over rho^2") {
  const cone::ConeSpec c = cone::make_cone(3, 3);
  const cone::DeformedCone plain = cone::make_deformed(c, 0.0);
  // With alpha = 0 the metric is the cone itself.
  CHECK(cone::deformed_scal(plain, 1.0) == doctest::Approx(cone::cone_scal(c, 1.0)).epsilon(1e-12));
  const cone::DeformedCone d = cone::make_deformed(c, -1.0);
  CHECK(cone::deformed_scal(d, 0.5) == doctest::Approx(4.0 * cone::deformed_scal(d, 1.0)));
  const metric::AnalyticMetric am = cone::deformed_analytic(d);
  Vec x = Vec::Constant(c.n, 1.2);
  x[0] = 0.7;
  CHECK(metric::scal_from_jet(am.jet(x)) == doctest::Approx(cone::deformed_scal(d, 0.7)).epsilon(1e-10));
  CHECK_THROWS_AS(cone::make_deformed(c, 0.5), Error);
  CHECK_THROWS_AS(cone::make_deformed(c, -2.5), Error);
}
