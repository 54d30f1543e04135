#include <doctest.h>

#include "conelab/covering.hpp"
#include "conelab/error.hpp"
#include "conelab/serialize.hpp"

using namespace conelab;
using covering::Ball;
using covering::Vec;

namespace {

Vec v2(double x, double y) { return (Vec(2) << x, y).finished(); }

// Independent brute-force check of the three family properties.
bool brute_force_ok(const covering::BallSet& bs, const covering::FamilyAssignment& fa) {
  for (std::size_t i = 0; i < bs.balls.size(); ++i)
    for (std::size_t j = i + 1; j < bs.balls.size(); ++j) {
      const double d = (bs.balls[i].center - bs.balls[j].center).norm();
      if (fa.family[i] > 0 && fa.family[i] == fa.family[j] && d < 6.0 * (bs.balls[i].radius + bs.balls[j].radius))
        return false;
      if (fa.family[i] > 0 && fa.family[j] > 0 &&
          (d < 2.0 * bs.balls[i].radius || d < 2.0 * bs.balls[j].radius))
        return false;
    }
  for (const Vec& t : bs.targets) {
    bool covered = false;
    for (std::size_t i = 0; i < bs.balls.size(); ++i)
      covered = covered || (fa.family[i] > 0 && (t - bs.balls[i].center).norm() < 3.0 * bs.balls[i].radius);
    if (!covered) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("two far balls share a family") {
  covering::BallSet bs;
  bs.dim = 2;
  bs.balls = {{v2(0, 0), 1.0, 1}, {v2(100, 0), 0.5, 2}};
  bs.targets = {v2(0.5, 0), v2(100, 0.2)};
  const covering::FamilyAssignment fa = covering::assign_families(bs, 12);
  CHECK(fa.used == 1);
  CHECK(fa.family == std::vector<int>{1, 1});
  CHECK(covering::verify_families(bs, fa).pass());
  CHECK(brute_force_ok(bs, fa));
}

TEST_CASE("a ball centred inside a kept ball is ruled out") {
  covering::BallSet bs;
  bs.dim = 2;
  bs.balls = {{v2(0, 0), 1.0, 1}, {v2(1.5, 0), 0.5, 2}};
  bs.targets = {v2(0, 0)};
  const covering::FamilyAssignment fa = covering::assign_families(bs, 12);
  CHECK(fa.family[1] == 0);
  CHECK(covering::verify_families(bs, fa).pass());
}

TEST_CASE("near balls open new families and the bound is enforced") {
  covering::BallSet bs;
  bs.dim = 2;
  bs.balls = {{v2(0, 0), 1.0, 1}, {v2(2.5, 0), 0.9, 2}, {v2(-2.5, 0), 0.8, 3}};
  bs.targets = {v2(0, 0)};
  const covering::FamilyAssignment fa = covering::assign_families(bs, 12);
  CHECK(fa.used == 3);
  CHECK(brute_force_ok(bs, fa));
  try {
    covering::assign_families(bs, 2);
    FAIL("expected a bound error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BoundExceeded);
  }
}

TEST_CASE("tied radii are perturbed deterministically") {
  covering::BallSet bs;
  bs.dim = 2;
  bs.balls = {{v2(0, 0), 1.0, 1}, {v2(5, 0), 1.0, 2}, {v2(9, 0), 2.0, 3}};
  CHECK_THROWS_AS(covering::assign_families(bs, 12), Error);
  const covering::BallSet a = covering::perturb_ties(bs, 7), b = covering::perturb_ties(bs, 7);
  CHECK(a.balls[0].radius != a.balls[1].radius);
  CHECK(a.balls[0].radius == b.balls[0].radius);
  CHECK(a.balls[2].radius == 2.0);
  CHECK(std::abs(a.balls[0].radius - 1.0) < 1e-8);
}

TEST_CASE("random instances pass brute force and serialize identically") {
  for (int dim : {2, 3}) {
    covering::InstanceOptions o;
    o.dim = dim;
    o.balls = 300;
    o.targets = 40;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const covering::BallSet bs = covering::random_instance(o, seed);
      covering::check_coverable(bs);
      const covering::FamilyAssignment fa = covering::assign_families(bs, covering::default_c_bound(dim));
      CHECK(covering::verify_families(bs, fa).pass());
      CHECK(brute_force_ok(bs, fa));
      CHECK(io::balls_json(bs, &fa).dump() == io::balls_json(covering::random_instance(o, seed), &fa).dump());
    }
  }
  CHECK_THROWS_AS(covering::default_c_bound(4), Error);
}

TEST_CASE("verification reports witnesses") {
  covering::BallSet bs;
  bs.dim = 2;
  bs.balls = {{v2(0, 0), 1.0, 10}, {v2(3, 0), 0.5, 20}};
  bs.targets = {v2(50, 50)};
  covering::FamilyAssignment fa;
  fa.family = {1, 1};
  fa.c_bound = 12;
  fa.used = 1;
  const covering::VerifyReport r = covering::verify_families(bs, fa);
  CHECK_FALSE(r.separation.pass);
  CHECK(r.separation.witness == std::vector<int>{10, 20});
  CHECK_FALSE(r.cover.pass);
  CHECK_THROWS_AS(covering::check_coverable(bs), Error);
}

TEST_CASE("center shift maps balls to their sources") {
  covering::BallSet bs;
  bs.dim = 2;
  bs.balls = {{v2(0.1, 0), 1.0, 1}, {v2(50, 0.2), 0.5, 2}};
  bs.targets = {v2(0, 0)};
  bs.sources = {{v2(0, 0), 1.0, 1}, {v2(50, 0), 0.5, 2}};
  const covering::FamilyAssignment fa = covering::assign_families(bs, 12);
  const covering::BallSet out = covering::center_shift(bs, fa);
  CHECK((out.balls[0].center - v2(0, 0)).norm() == 0.0);
  CHECK((out.balls[1].center - v2(50, 0)).norm() == 0.0);
  bs.sources.pop_back();
  CHECK_THROWS_AS(covering::center_shift(bs, fa), Error);
  bs.sources.clear();
  CHECK((covering::center_shift(bs, fa).balls[0].center - v2(0.1, 0)).norm() == 0.0);
}
