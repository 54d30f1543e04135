#include <doctest.h>

#include <cmath>

#include "conelab/error.hpp"
#include "conelab/perron.hpp"
#include "conelab/spectral.hpp"

using namespace conelab;

namespace {

perron::PerronProblem simons_problem() {
  perron::PerronProblem pp;
  pp.cone = cone::make_cone(3, 3);
  pp.lambda = 0.4;
  return pp;
}

}  // namespace

TEST_CASE("radial power roots solve the quadratic") {
  const perron::IndicialRoots r = perron::radial_power_roots(7, 3.0);
  CHECK(r.alpha * r.alpha + 5.0 * r.alpha + 3.0 == doctest::Approx(0.0).scale(1.0));
  CHECK(r.conjugate == doctest::Approx(-5.0 - r.alpha));
  CHECK(r.alpha > -2.5);
  CHECK_THROWS_AS(perron::radial_power_roots(7, 7.0), Error);
}

TEST_CASE("indicial threshold meets lambda0") {
  for (const cone::ConeSpec& c : cone::catalog())
    CHECK(perron::lambda_threshold(c) == doctest::Approx(spectral::lambda0_closed_form(c)).epsilon(1e-12));
}

TEST_CASE("local solve is exact on powers of r") {
  const perron::PerronProblem pp = simons_problem();
  const double alpha = perron::indicial_exponent(pp.cone, pp.lambda).alpha;
  const double beta = perron::indicial_exponent(pp.cone, pp.lambda).conjugate;
  std::vector<double> r = log_grid(0.6, 0.9, 301);
  // Any combination of the two power solutions is reproduced.
  auto exact = [&](double x) { return 2.0 * std::pow(x, alpha) + 0.1 * std::pow(x, beta); };
  RadialProfile u = perron::local_solve(pp, r, exact(0.6), exact(0.9));
  for (std::size_t i = 0; i < r.size(); ++i) CHECK(u.u(i) == doctest::Approx(exact(r[i])).epsilon(1e-9));
  CHECK_THROWS_AS(perron::local_solve(pp, log_grid(1e-3, 1.0, 301), 1.0, 1.0), Error);
}

TEST_CASE("supersolution test finds witnesses") {
  perron::PerronProblem pp = simons_problem();
  const RadialProfile seed = perron::seed_supersolution(pp, 0.6);
  CHECK(perron::is_supersolution(pp, seed).ok);
  const RadialProfile sub = perron::seed_supersolution(pp, 0.6);
  std::vector<double> u = sub.u();
  const double alpha = perron::indicial_exponent(pp.cone, 0.2).alpha;
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = std::pow(sub.r(i), alpha);  // a subsolution
  const perron::SupersolutionReport rep = perron::is_supersolution(pp, RadialProfile(sub.r(), u));
  CHECK_FALSE(rep.ok);
  REQUIRE(rep.witness.has_value());
  CHECK(rep.witness->violation > 0.0);
}

TEST_CASE("perron minimal solution reproduces c r^alpha") {
  perron::PerronProblem pp = simons_problem();
  perron::PerronResult res = perron::perron_minimal(pp, {perron::seed_supersolution(pp, 0.7)});
  CHECK(res.closed_form_error < 1e-4);
  CHECK(res.residual < 1e-8);
  CHECK(res.minimality.front() <= 0.0);
  CHECK(res.alpha == doctest::Approx(perron::indicial_exponent(pp.cone, pp.lambda).alpha));
  CHECK_THROWS_AS(perron::perron_minimal(pp, {}), Error);
  CHECK_THROWS_AS(perron::seed_supersolution(pp, 0.3), Error);
}

TEST_CASE("cutoff function closed form") {
  const perron::CutoffSpec s = perron::make_cutoff(5.0, 1.0);
  CHECK(s.value(0.0) == doctest::Approx(1.0));
  CHECK(s.value(1.0) == 0.0);
  CHECK(s.value(0.5) == doctest::Approx(std::exp(-s.A)));
  const double h = 1e-5;
  CHECK(s.d1(0.3) == doctest::Approx((s.value(0.3 + h) - s.value(0.3 - h)) / (2 * h)).epsilon(1e-6));
  CHECK(s.margin_k_chi >= 0.0);
  CHECK(s.margin_k_dchi >= 0.0);
  CHECK_THROWS_AS(perron::make_cutoff(-1.0, 1.0), Error);
}

TEST_CASE("crossing detection") {
  std::vector<double> r = log_grid(1.0, 2.0, 101), a(r.size()), b(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    a[i] = r[i];
    b[i] = 3.0 - r[i];
  }
  CHECK(perron::find_crossing(RadialProfile(r, a), RadialProfile(r, b)) == doctest::Approx(1.5).epsilon(1e-5));  // log-linear interpolation
  CHECK_THROWS_AS(perron::find_crossing(RadialProfile(r, a), RadialProfile(r, a)), Error);
}
