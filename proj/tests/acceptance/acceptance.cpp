// Runs the bundled scenarios and evaluates the twelve acceptance criteria
// against thresholds pinned here. Prints one line per criterion and exits
// nonzero if any criterion fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "conelab/cli/scenario.hpp"

namespace cli = conelab::cli;

namespace {

struct Requirement {
  std::string scenario;
  std::string check;
  std::function<bool(double)> holds;
  std::string pinned;  // printed form of the threshold
};

struct Criterion {
  int id;
  std::string name;
  std::vector<Requirement> requirements;
};

Requirement le(std::string s, std::string c, double bound) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "<= %.3g", bound);
  return {std::move(s), std::move(c), [bound](double x) { return x <= bound; }, buf};
}
Requirement gt(std::string s, std::string c, double bound) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "> %.3g", bound);
  return {std::move(s), std::move(c), [bound](double x) { return x > bound; }, buf};
}
Requirement ge(std::string s, std::string c, double bound) {
  char buf[64];
  std::snprintf(buf, sizeof buf, ">= %.3g", bound);
  return {std::move(s), std::move(c), [bound](double x) { return x >= bound; }, buf};
}
Requirement near(std::string s, std::string c, double target, double tol) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "= %.6g +- %.3g", target, tol);
  return {std::move(s), std::move(c), [=](double x) { return std::abs(x - target) <= tol; }, buf};
}
Requirement in(std::string s, std::string c, double lo, double hi) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "in [%.3g, %.3g]", lo, hi);
  return {std::move(s), std::move(c), [=](double x) { return lo <= x && x <= hi; }, buf};
}
Requirement yes(std::string s, std::string c) {
  return {std::move(s), std::move(c), [](double x) { return x == 1.0; }, "true"};
}

std::vector<Criterion> criteria() {
  return {
      {1, "tl-curvature-consistency",
       {in("tl-convergence", "tl-order-min", 1.8, 2.2), in("tl-convergence", "tl-order-max", 1.8, 2.2)}},
      {2, "lambda0-bound-and-value",
       {near("lambda0-simons", "lambda0-value", 5.0 / 6.0, 1e-3), gt("lambda0-simons", "lambda0-above-quarter", 0.25),
        le("lambda0-simons", "exhaustion-monotone", 0.0)}},
      {3, "indicial-band",
       {le("indicial-band", "unique-root-violations", 0.0), le("indicial-band", "alpha-vs-shooting", 1e-6)}},
      {4, "perron-minimality",
       {le("perron-simons", "closed-form-sup-error", 1e-4), le("perron-simons", "minimality", 0.0),
        le("perron-simons", "operator-residual", 1e-8)}},
      {5, "crease-smoothing",
       {gt("crease-smoothing", "crease-margin", 0.0), le("crease-smoothing", "crease-locality", 0.0)}},
      {6, "green-identity",
       {le("green-deformed", "green-analytic-residual", 1e-12), in("green-deformed", "green-stencil-order", 1.8, 2.2)}},
      {7, "truncation-penalty",
       {near("truncation-penalty", "penalty-slope", 1.0, 0.05), ge("truncation-penalty", "scal-condition-below-mu-h", 0.0)}},
      {8, "deflection-law",
       {le("theta-scaling", "theta-closed-form", 1e-8), near("theta-scaling", "theta-slope", 1.0, 0.01),
        le("theta-scaling-n8", "theta-closed-form", 1e-8), near("theta-scaling-n8", "theta-slope", 1.0, 0.01)}},
      {9, "covering-properties",
       {le("covering-random", "covering-property-failures", 0.0), le("covering-random", "covering-bound-exceeded", 0.0),
        yes("covering-random", "covering-deterministic")}},
      {10, "superposition",
       {in("superposition", "stieltjes-first-order", 1.8, 2.2), gt("superposition", "tube-single", 0.0),
        gt("superposition", "tube-superposed", 0.0)}},
      {11, "bending",
       {ge("bending-sphere", "k-star-min-difference", 0.0), le("bending-sphere", "k-star", 1048576.0),
        le("bending-sphere", "totally-geodesic", 1e-8), le("bending-sphere", "bucket-completeness", 5.0),
        yes("bending-sphere", "locality-identical")}},
      {12, "dimension-shift-sign", {le("dimshift-table", "dimshift-table-mismatches", 0.0)}},
  };
}

}  // namespace

int main() {
  std::map<std::string, cli::RunReport> runs;
  for (const cli::Scenario& s : cli::bundled()) runs.emplace(s.name, cli::run_scenario(s));

  int failed = 0;
  for (const Criterion& c : criteria()) {
    bool ok = true;
    std::string detail;
    for (const Requirement& r : c.requirements) {
      const cli::Check* found = nullptr;
      auto it = runs.find(r.scenario);
      if (it != runs.end())
        for (const cli::Check& k : it->second.checks)
          if (k.name == r.check) found = &k;
      char buf[160];
      if (!found) {
        std::snprintf(buf, sizeof buf, "%s missing", r.check.c_str());
        ok = false;
      } else {
        const bool pass = found->status == cli::Status::Pass && r.holds(found->measured);
        ok = ok && pass;
        std::snprintf(buf, sizeof buf, "%s=%.6g (%s)%s", r.check.c_str(), found->measured, r.pinned.c_str(),
                      pass ? "" : " FAILED");
      }
      detail += (detail.empty() ? "" : "; ") + std::string(buf);
    }
    // A module error inside a scenario is a failure of every criterion it feeds.
    std::vector<std::string> seen;
    for (const Requirement& r : c.requirements) {
      auto it = runs.find(r.scenario);
      if (it == runs.end() || std::find(seen.begin(), seen.end(), r.scenario) != seen.end()) continue;
      seen.push_back(r.scenario);
      const std::string error_check = it->second.scenario.module + "-error";
      for (const cli::Check& k : it->second.checks)
        if (k.name == error_check) {
          ok = false;
          detail += "; " + k.name + ": " + k.detail;
        }
    }
    failed += !ok;
    std::printf("%s  [%2d] %s  %s\n", ok ? "PASS" : "FAIL", c.id, c.name.c_str(), detail.c_str());
  }
  std::printf("%d of 12 criteria passed\n", 12 - failed);
  return failed == 0 ? 0 : 1;
}
