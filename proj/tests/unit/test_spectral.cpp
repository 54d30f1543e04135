#include <doctest.h>

#include <cmath>

#include "conelab/error.hpp"
#include "conelab/spectral.hpp"

using namespace conelab;

TEST_CASE("weight and closed form") {
  const cone::ConeSpec c = cone::make_cone(3, 3);
  CHECK(spectral::weight(c, 0.5, 2.0) == doctest::Approx(0.25 / 4.0 + 6.0 / 4.0));
  CHECK(spectral::lambda0_closed_form(c) == doctest::Approx(5.0 / 6.0));
  CHECK(spectral::lambda0_closed_form(cone::make_cone(4, 3)) == doctest::Approx(6.0 * 5.0 / 28.0));
}

TEST_CASE("Rayleigh quotients of test functions stay above lambda0") {
  const cone::ConeSpec c = cone::make_cone(3, 3);
  std::vector<double> r = log_grid(0.1, 10.0, 801), u(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) u[i] = std::sin(std::numbers::pi * std::log(r[i] / 0.1) / std::log(100.0));
  u.front() = u.back() = 0.0;
  CHECK(spectral::rayleigh(c, RadialProfile(r, u), 0.0) >= spectral::lambda0_closed_form(c));
  std::vector<double> zero(r.size(), 0.0);
  CHECK_THROWS_AS(spectral::rayleigh(c, RadialProfile(r, zero), 0.0), Error);
}

TEST_CASE("finite differences agree with shooting") {
  const cone::ConeSpec c = cone::make_cone(4, 4);
  spectral::WeightedProblem w = spectral::make_problem(c, 0.1, 1.0, 3.0);
  const double fd = spectral::dirichlet_eigen(w, 1).lambda;
  CHECK(fd == doctest::Approx(spectral::shooting_eigen(c, 0.1, 1.0, 3.0)).epsilon(1e-7));
}

TEST_CASE("exhaustion annuli grow by a factor four") {
  spectral::WeightedProblem w = spectral::make_problem(cone::make_cone(3, 3), 0.1, 0.5, 1.0);
  auto [a, b] = spectral::exhaustion_annulus(w, 3);
  CHECK(a == doctest::Approx(0.5 / 16.0));
  CHECK(b == doctest::Approx(1.0));
  CHECK_THROWS_AS(spectral::exhaustion_annulus(w, 0), Error);
}

TEST_CASE("lambda0 converges to the Hardy value") {
  spectral::Lambda0Result r = spectral::lambda0(cone::make_cone(3, 3));
  CHECK(r.lambda0 == doctest::Approx(5.0 / 6.0).epsilon(1e-3));
  for (const auto& seq : r.lambda_sequence)
    for (std::size_t m = 1; m < seq.size(); ++m) CHECK(seq[m] <= seq[m - 1]);
}

TEST_CASE("eigenfunctions below lambda0 are powers of r") {
  const cone::ConeSpec c = cone::make_cone(3, 3);
  spectral::BelowResult b = spectral::eigenfunction_below(c, 0.5);
  // alpha^2 + 5 alpha + (5/24 + 1/2) 6 = 0.
  const double disc = 25.0 - 4.0 * (5.0 / 24.0 + 0.5) * 6.0;
  CHECK(b.alpha == doctest::Approx((-5.0 + std::sqrt(disc)) / 2.0).epsilon(1e-12));
  CHECK(b.residual < 1e-10);
  CHECK_THROWS_AS(spectral::eigenfunction_below(c, 0.1), Error);
  CHECK_THROWS_AS(spectral::eigenfunction_below(c, 5.0 / 6.0), Error);
}
