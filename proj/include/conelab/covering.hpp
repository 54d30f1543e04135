#pragma once

// Family selection for finite ball sets: decreasing-radius greedy assignment
// into boundedly many separated families, and brute-force verification.

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace conelab::covering {

using Vec = Eigen::VectorXd;

// A ball of parameter radius rho. Its kept ball is B_{2 rho}(center).
struct Ball {
  Vec center;
  double radius = 0.0;
  int id = 0;
};

struct BallSet {
  int dim = 2;
  std::vector<Ball> balls;
  std::vector<Vec> targets;
  // Source balls B_rho(p) the balls were recentred from; empty means z = p.
  std::vector<Ball> sources;
};

struct Constants {
  double kept = 2.0;        // kept ball B_{kept rho}
  double assignment = 10.0; // enlargement that must be disjoint within a family
  double separation = 6.0;  // enlargement checked by verification
  double cover = 3.0;       // targets must lie in some B_{cover rho}
};

// Rescales tied radii by factors 1 + O(1e-9) drawn from the seed so that all
// radii become pairwise distinct. Untied radii are left alone.
BallSet perturb_ties(BallSet bs, std::uint64_t seed);

// Every target must lie in some kept ball.
void check_coverable(const BallSet& bs, const Constants& k = {});

struct FamilyAssignment {
  std::vector<int> family;  // parallel to bs.balls; 0 = ruled out
  int c_bound = 0;
  int used = 0;             // largest family index in use
  std::vector<int> order;   // processing order, indices into bs.balls
};

FamilyAssignment assign_families(const BallSet& bs, int c_bound, const Constants& k = {});

struct PropertyCheck {
  bool pass = true;
  std::vector<int> witness;  // ball ids, or a target index for the cover property
  std::string detail;
};

struct VerifyReport {
  PropertyCheck separation;  // (i) within each family
  PropertyCheck exclusion;   // (ii) no kept ball holds another kept centre
  PropertyCheck cover;       // (iii) targets covered
  bool pass() const { return separation.pass && exclusion.pass && cover.pass; }
};

VerifyReport verify_families(const BallSet& bs, const FamilyAssignment& fa, const Constants& k = {});

// Replaces every ball by its source of equal radius; families are unchanged.
BallSet center_shift(const BallSet& bs, const FamilyAssignment& fa);

struct InstanceOptions {
  int dim = 2;
  int targets = 100;
  int balls = 1000;
  double r_min = 1e-4;
  double r_max = 1e-2;
};

// Targets uniform in the unit cube, balls centred on random targets with
// log-uniform radii. Deterministic in the seed across platforms.
BallSet random_instance(const InstanceOptions& o, std::uint64_t seed);

int default_c_bound(int dim);

}  // namespace conelab::covering
