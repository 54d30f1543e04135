#include <doctest.h>

#include <cmath>

#include "conelab/bending.hpp"
#include "conelab/error.hpp"

using namespace conelab;

TEST_CASE("h is even, convex and equals |t| outside the window") {
  const double k = 20.0, delta = 0.1;
  for (double t : {0.0, 0.01, 0.05, 0.09, 0.1, 0.3}) {
    const bending::HSample a = bending::h_eval(k, delta, t), b = bending::h_eval(k, delta, -t);
    CHECK(a.value == doctest::Approx(b.value).epsilon(1e-14));
    CHECK(a.d1 == doctest::Approx(-b.d1).epsilon(1e-14));
    CHECK(a.d2 >= 0.0);
    CHECK(std::abs(a.d1) <= 1.0);
  }
  const bending::HSample out = bending::h_eval(k, delta, 0.25);
  CHECK(out.value == 0.25);
  CHECK(out.d1 == 1.0);
  CHECK(out.d2 == 0.0);
  CHECK(bending::h_eval(k, delta, 0.0).value > 0.0);
}

TEST_CASE("h derivatives agree with finite differences") {
  const double k = 20.0, delta = 0.1, e = 1e-6;
  for (double t : {-0.07, -0.02, 0.03, 0.08}) {
    const bending::HSample s = bending::h_eval(k, delta, t);
    CHECK(s.d1 == doctest::Approx((bending::h_eval(k, delta, t + e).value - bending::h_eval(k, delta, t - e).value) / (2 * e)).epsilon(1e-6));
    CHECK(s.d2 == doctest::Approx((bending::h_eval(k, delta, t + e).d1 - bending::h_eval(k, delta, t - e).d1) / (2 * e)).epsilon(1e-5));
    CHECK(s.defect == doctest::Approx(1.0 - std::abs(s.d1)).epsilon(1e-12));
  }
}

TEST_CASE("build_h invariants and resolution guard") {
  const bending::BendProfile bp = bending::build_h(100.0, 0.1);
  CHECK(bp.invariants_hold());
  CHECK(bp.max_abs_slope <= 1.0);
  CHECK(bp.max_asymmetry < 1e-14);
  CHECK_THROWS_AS(bending::build_h(1e6, 0.1, 1.0, 101), Error);
  CHECK_THROWS_AS(bending::build_h(1.0, 0.6, 1.0), Error);
}

TEST_CASE("tube metrics") {
  const bending::TubeMetric s = bending::spherical_tube(2, 1.0, 0.3);
  CHECK(s.core_trace() == doctest::Approx(2.0 * std::cos(1.0) / std::sin(1.0)));
  CHECK(bending::flat_tube(3, 2.0, 0.5).core_trace() == doctest::Approx(1.5));
  CHECK(bending::cylinder_tube(2, 0.3).core_trace() == 0.0);
  CHECK_THROWS_AS(bending::spherical_tube(2, 0.2, 0.3), Error);
  CHECK_THROWS_AS(bending::flat_tube(2, 0.2, 0.3), Error);
}

TEST_CASE("bending leaves the metric unchanged outside the window") {
  const bending::TubeMetric tm = bending::spherical_tube(2, 1.0, 0.3);
  const bending::BendProfile bp = bending::build_h(10.0, 0.1, 0.3);
  for (double t : {0.1, 0.2, 0.29}) CHECK(bending::scal_difference(tm, bp, t, metric::Method::Analytic) == 0.0);
  const bending::CompareReport r = bending::scal_compare(tm, bp);
  CHECK(r.max_abs_outside == 0.0);
  CHECK(bending::totally_geodesic_residual(tm, bp, metric::Method::Analytic) < 1e-12);
}

TEST_CASE("analytic and stencil differences agree") {
  const bending::TubeMetric tm = bending::spherical_tube(2, 1.2, 0.3);
  const bending::BendProfile bp = bending::build_h(4.0, 0.1, 0.3);
  for (double t : {0.0, 0.03, 0.06}) {
    const double a = bending::scal_difference(tm, bp, t, metric::Method::Analytic);
    const double s = bending::scal_difference(tm, bp, t, metric::Method::Stencil, 1e-3);
    CHECK(std::abs(a - s) <= 5.0 * bending::stencil_error(tm, bp, t, 1e-3));
  }
}

TEST_CASE("buckets sum to the difference") {
  const bending::TubeMetric tm = bending::spherical_tube(2, 1.2, 0.3);
  const bending::BendProfile bp = bending::build_h(8.0, 0.1, 0.3);
  for (double t : {0.0, 0.05}) {
    const bending::Buckets b = bending::dominant_decomposition(tm, bp, t);
    CHECK(b.sum == doctest::Approx(b.diff).epsilon(1e-10));
    CHECK(b.i6 == 0.0);
  }
}

TEST_CASE("stiffness search") {
  const bending::TubeMetric tm = bending::spherical_tube(2, 1.4, 0.3);
  const bending::StiffnessSearch s = bending::search_k(tm, 0.1);
  CHECK(s.min_diff >= 0.0);
  CHECK(s.k_star >= 1.0);
  CHECK(bending::scal_compare(tm, bending::build_h(s.k_star / 2.0, 0.1, 0.3)).min_diff < 0.0);
  CHECK_THROWS_AS(bending::search_k(tm, 0.1, 1.0, 1.0), Error);
  CHECK_THROWS_AS(bending::stiffness_estimate(bending::cylinder_tube(2, 0.3)), Error);
}

TEST_CASE("sphere-core tube metric is the round sphere, as in the transformation law") {
  // dt^2 + sin^2(rho0 - t) g_{S^m} is the unit sphere S^{m+1}; its scal
  // m(m+1) must agree with the stereographic conformal metric used for the
  // transformation-law checks.
  for (int m : {1, 2, 3}) {
    const bending::TubeMetric tm = bending::spherical_tube(m, 1.2, 0.3);
    metric::Vec x = metric::Vec::Constant(m + 1, 1.2);
    x[0] = 0.1;
    CHECK(metric::scal_from_jet(bending::base_analytic(tm).jet(x)) == doctest::Approx(m * (m + 1.0)).epsilon(1e-12));
  }
}
