#include <doctest.h>

#include "conelab/error.hpp"
#include "conelab/serialize.hpp"

using namespace conelab;
using metric::Mat;
using metric::Vec;

TEST_CASE("numbers round-trip at full precision") {
  for (double x : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300}) CHECK(std::stod(io::format_number(x)) == x);
  CHECK(io::format_number(std::nan("")) == "nan");
}

TEST_CASE("metric fields round-trip through JSON") {
  metric::Chart c({{0, 1, 5}, {0, 2, 6}});
  metric::MetricField g = metric::MetricField::sample(c, [](const Vec& x) {
    Mat m = Mat::Identity(2, 2);
    m(0, 1) = m(1, 0) = 0.1 * x[0];
    m(1, 1) = 1.0 + x[1] * x[1];
    return m;
  });
  const metric::MetricField back = io::metric_from_json(io::to_json(g));
  CHECK(back.components() == g.components());
  CHECK(back.chart().axis(1).samples == 6);
  CHECK_THROWS_AS(io::metric_from_json(io::json{{"dim", 2}}), Error);
}

TEST_CASE("ball sets round-trip through JSON") {
  covering::BallSet bs;
  bs.dim = 2;
  bs.balls = {{(Vec(2) << 0.25, 0.5).finished(), 0.125, 3}};
  bs.targets = {(Vec(2) << 0.3, 0.5).finished()};
  const covering::BallSet back = io::balls_from_json(io::balls_json(bs));
  REQUIRE(back.balls.size() == 1);
  CHECK(back.balls[0].center == bs.balls[0].center);
  CHECK(back.balls[0].radius == 0.125);
  CHECK(back.balls[0].id == 3);
  CHECK(back.targets.size() == 1);
  CHECK(io::balls_json(back).dump() == io::balls_json(bs).dump());
}

TEST_CASE("csv layout") {
  io::Csv csv({"a", "b"});
  csv.add({1.0, 0.5});
  csv.add_text({"x", "y"});
  CHECK(csv.str() == "a,b\n1,0.5\nx,y\n");
  CHECK(csv.rows() == 2);
  CHECK_THROWS_AS(csv.add({1.0}), Error);
}

TEST_CASE("module CSV headers") {
  CHECK(io::barrier_csv({}).str() == "mu,Theta_measured,Theta_closed_form,penalty,scal_min_times_rho2,tube_margin\n");
  CHECK(io::bending_csv({}).str() == "k,min_scal_diff,argmin_location,totally_geodesic_residual\n");
}
