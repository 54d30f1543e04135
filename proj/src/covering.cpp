#include "conelab/covering.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "conelab/error.hpp"

namespace conelab::covering {

namespace {

// Portable uniform draw in [0, 1) from a 64-bit engine.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

void check_dims(const BallSet& bs) {
  require(bs.dim >= 1, ErrorCode::Domain, "dimension must be positive");
  for (const Ball& b : bs.balls) {
    require(b.center.size() == bs.dim, ErrorCode::Domain, "ball centre has the wrong dimension");
    require(b.radius > 0.0, ErrorCode::Domain, "ball radius must be positive");
  }
  for (const Vec& t : bs.targets) require(t.size() == bs.dim, ErrorCode::Domain, "target has the wrong dimension");
}

}  // namespace

BallSet perturb_ties(BallSet bs, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::map<double, std::vector<std::size_t>> by_radius;
  for (std::size_t i = 0; i < bs.balls.size(); ++i) by_radius[bs.balls[i].radius].push_back(i);
  for (auto& [r, idx] : by_radius) {
    if (idx.size() < 2) continue;
    for (std::size_t j = 0; j < idx.size(); ++j)
      bs.balls[idx[j]].radius = r * (1.0 + 1e-9 * (static_cast<double>(j) + unit(rng)) / static_cast<double>(idx.size()));
  }
  return bs;
}

void check_coverable(const BallSet& bs, const Constants& k) {
  for (std::size_t t = 0; t < bs.targets.size(); ++t) {
    const bool hit = std::any_of(bs.balls.begin(), bs.balls.end(), [&](const Ball& b) {
      return (bs.targets[t] - b.center).norm() < k.kept * b.radius;
    });
    if (!hit) {
      std::ostringstream os;
      os << "target " << t << " lies in no kept ball";
      fail(ErrorCode::Domain, os.str());
    }
  }
}

FamilyAssignment assign_families(const BallSet& bs, int c_bound, const Constants& k) {
  check_dims(bs);
  require(c_bound >= 1, ErrorCode::Domain, "c_bound must be positive");
  FamilyAssignment fa;
  fa.c_bound = c_bound;
  fa.family.assign(bs.balls.size(), 0);
  fa.order.resize(bs.balls.size());
  std::iota(fa.order.begin(), fa.order.end(), 0);
  std::stable_sort(fa.order.begin(), fa.order.end(),
                   [&](int a, int b) { return bs.balls[a].radius > bs.balls[b].radius; });
  for (std::size_t i = 1; i < fa.order.size(); ++i)
    require(bs.balls[fa.order[i]].radius < bs.balls[fa.order[i - 1]].radius, ErrorCode::Domain,
            "radii must be pairwise distinct");

  std::vector<std::vector<int>> members;  // members[f-1]
  std::vector<int> kept;
  for (int i : fa.order) {
    const Ball& b = bs.balls[i];
    const bool ruled_out = std::any_of(kept.begin(), kept.end(), [&](int j) {
      return (b.center - bs.balls[j].center).norm() < k.kept * bs.balls[j].radius;
    });
    if (ruled_out) continue;
    int chosen = 0;
    for (std::size_t f = 0; f < members.size() && chosen == 0; ++f) {
      const bool disjoint = std::all_of(members[f].begin(), members[f].end(), [&](int j) {
        const Ball& o = bs.balls[j];
        return (b.center - o.center).norm() >= k.assignment * (b.radius + o.radius);
      });
      if (disjoint) chosen = static_cast<int>(f) + 1;
    }
    if (chosen == 0) {
      if (static_cast<int>(members.size()) + 1 > c_bound) {
        std::ostringstream os;
        os << "ball " << b.id << " needs family " << members.size() + 1 << " > c_bound " << c_bound
           << "; conflicts with ids";
        for (const auto& m : members)
          for (int j : m) {
            const Ball& o = bs.balls[j];
            if ((b.center - o.center).norm() < k.assignment * (b.radius + o.radius)) {
              os << ' ' << o.id;
              break;
            }
          }
        fail(ErrorCode::BoundExceeded, os.str());
      }
      members.emplace_back();
      chosen = static_cast<int>(members.size());
    }
    members[chosen - 1].push_back(i);
    kept.push_back(i);
    fa.family[i] = chosen;
  }
  fa.used = static_cast<int>(members.size());
  return fa;
}

VerifyReport verify_families(const BallSet& bs, const FamilyAssignment& fa, const Constants& k) {
  require(fa.family.size() == bs.balls.size(), ErrorCode::DataIntegrity, "assignment does not match the ball set");
  VerifyReport rep;
  std::vector<int> kept;
  for (std::size_t i = 0; i < bs.balls.size(); ++i)
    if (fa.family[i] > 0) kept.push_back(static_cast<int>(i));

  for (std::size_t a = 0; a < kept.size(); ++a) {
    for (std::size_t c = a + 1; c < kept.size(); ++c) {
      const Ball& x = bs.balls[kept[a]];
      const Ball& y = bs.balls[kept[c]];
      const double d = (x.center - y.center).norm();
      if (rep.separation.pass && fa.family[kept[a]] == fa.family[kept[c]] &&
          d < k.separation * (x.radius + y.radius)) {
        rep.separation.pass = false;
        rep.separation.witness = {x.id, y.id};
        rep.separation.detail = "enlarged balls overlap within one family";
      }
      if (rep.exclusion.pass && (d < k.kept * x.radius || d < k.kept * y.radius)) {
        rep.exclusion.pass = false;
        rep.exclusion.witness = {x.id, y.id};
        rep.exclusion.detail = "a kept ball contains another kept centre";
      }
    }
  }
  for (std::size_t t = 0; t < bs.targets.size() && rep.cover.pass; ++t) {
    const bool hit = std::any_of(kept.begin(), kept.end(), [&](int i) {
      return (bs.targets[t] - bs.balls[i].center).norm() < k.cover * bs.balls[i].radius;
    });
    if (!hit) {
      rep.cover.pass = false;
      rep.cover.witness = {static_cast<int>(t)};
      rep.cover.detail = "target not covered";
    }
  }
  return rep;
}

BallSet center_shift(const BallSet& bs, const FamilyAssignment& fa) {
  require(fa.family.size() == bs.balls.size(), ErrorCode::DataIntegrity, "assignment does not match the ball set");
  BallSet out = bs;
  if (bs.sources.empty()) return out;
  std::map<double, const Ball*> by_radius;
  for (const Ball& s : bs.sources) {
    require(by_radius.emplace(s.radius, &s).second, ErrorCode::DataIntegrity, "source radii must be distinct");
  }
  for (Ball& b : out.balls) {
    auto it = by_radius.find(b.radius);
    if (it == by_radius.end()) {
      std::ostringstream os;
      os << "ball " << b.id << " has no source of radius " << b.radius;
      fail(ErrorCode::DataIntegrity, os.str());
    }
    b.center = it->second->center;
  }
  out.sources.clear();
  return out;
}

BallSet random_instance(const InstanceOptions& o, std::uint64_t seed) {
  require(o.dim >= 1 && o.targets >= 1 && o.balls >= 0, ErrorCode::Domain, "invalid instance size");
  require(0.0 < o.r_min && o.r_min < o.r_max, ErrorCode::Domain, "invalid radius range");
  std::mt19937_64 rng(seed);
  BallSet bs;
  bs.dim = o.dim;
  for (int t = 0; t < o.targets; ++t) {
    Vec p(o.dim);
    for (int d = 0; d < o.dim; ++d) p[d] = unit(rng);
    bs.targets.push_back(p);
  }
  const double span = std::log(o.r_max / o.r_min);
  for (int i = 0; i < o.balls; ++i) {
    // The first pass puts one ball on every target so that all are coverable.
    const auto t = i < o.targets ? static_cast<std::size_t>(i) : static_cast<std::size_t>(rng() % o.targets);
    bs.balls.push_back({bs.targets[t], o.r_min * std::exp(span * unit(rng)), i});
  }
  return perturb_ties(std::move(bs), seed ^ 0x9e3779b97f4a7c15ULL);
}

int default_c_bound(int dim) {
  require(dim == 2 || dim == 3, ErrorCode::Domain, "calibrated c_bound exists for dimensions 2 and 3 only");
  return dim == 2 ? 12 : 24;
}

}  // namespace conelab::covering
