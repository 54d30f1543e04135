#pragma once

// Radial Perron method for Δu + (λ|A|^2 - κ scal) u = 0 on cone annuli:
// local solves, supersolution tests, lifts, minimal solutions, indicial
// exponents and crease smoothing.

#include <optional>
#include <string>
#include <vector>

#include "conelab/cone.hpp"
#include "conelab/radial.hpp"

namespace conelab::perron {

struct IndicialRoots {
  double alpha = 0.0;      // root in (-(n-2)/2, 0]
  double conjugate = 0.0;  // -(n-2) - alpha
  double discriminant = 0.0;
};

// Roots of alpha^2 + (n-2) alpha + c = 0.
IndicialRoots radial_power_roots(int n, double c);

// Roots for c(ω) r^alpha with constant link mode: c = (κ + λ)(p + q).
IndicialRoots indicial_exponent(const cone::ConeSpec& c, double lambda);

// λ at which the discriminant vanishes.
double lambda_threshold(const cone::ConeSpec& c);

enum class InnerEnd { Truncated, Pinned };

struct PerronProblem {
  cone::ConeSpec cone;
  double lambda = 0.0;
  double r_in = 1e-2;
  double r_out = 1.0;
  double boundary_value = 1.0;
  InnerEnd inner = InnerEnd::Truncated;
  double truncation_depth = 1e-3;  // truncated mode: zero data at r_in * depth
  double nodes_per_unit = 1000.0;  // per unit of log r
};

void validate(const PerronProblem& pp);

// (λ + κ)(n - 1), the coefficient of u / r^2.
double potential(const PerronProblem& pp);

// Computational grid, log-uniform; starts at r_in * depth in truncated mode.
std::vector<double> grid(const PerronProblem& pp);

// μ_1(-Δ on [a, b]) a^2 / sup(potential r^2): the admissibility ratio.
double admissibility_ratio(const PerronProblem& pp, double a, double b);
constexpr double kAdmissibility = 1.1;

// Solution of the equation on the log-uniform radii r with end values ua, ub.
RadialProfile local_solve(const PerronProblem& pp, const std::vector<double>& r, double ua, double ub);

struct Witness {
  double a = 0.0;
  double b = 0.0;
  double radius = 0.0;
  double violation = 0.0;
};

struct SupersolutionReport {
  bool ok = true;
  std::optional<Witness> witness;
  int checked = 0;
};

// Comparison against local solves over dyadic sub-annuli of log-width
// ln2 * 2^-j, j = 0..3, shifted by half a width.
SupersolutionReport is_supersolution(const PerronProblem& pp, const RadialProfile& f);

// Replaces f on nodes first..last by the local solve with f's end values.
RadialProfile lift(const PerronProblem& pp, const RadialProfile& f, std::size_t first, std::size_t last);

// Diagonally scaled residual max_i |(A u)_i| / (|A_ii| |u_i|) over interior nodes.
double operator_residual(const PerronProblem& pp, const RadialProfile& u);

// b (r / r_out)^alpha(λ') on the computational grid; a supersolution for λ' > λ.
RadialProfile seed_supersolution(const PerronProblem& pp, double lambda_prime);

struct PerronResult {
  RadialProfile w;  // on [r_in, r_out]
  int iterations = 0;
  double residual = 0.0;
  double decrement = 0.0;
  double alpha = 0.0;
  double c = 0.0;                 // b r_out^{-alpha}
  double closed_form_error = 0.0;  // sup |w - c r^alpha| on [r_in, r_out]
  std::vector<double> minimality; // max(w - seed) per seed, all <= 0
};

struct PerronOptions {
  int max_sweeps = 200000;
  double decrement_tolerance = 1e-10;
  double residual_tolerance = 1e-8;
};

PerronResult perron_minimal(const PerronProblem& pp, const std::vector<RadialProfile>& seeds,
                            const PerronOptions& options = {});

// Solution of the equation through the last two nodes of w, evaluated at r.
RadialProfile continue_solution(const PerronProblem& pp, const RadialProfile& w, const std::vector<double>& r);

struct CutoffSpec {
  double K = 0.0;
  double delta = 0.0;
  double A = 0.0;  // chi(t) = exp(-A t / (1 - t)) on t < 1, zero beyond
  std::vector<double> t, chi, dchi, ddchi;
  double margin_k_chi = 0.0;   // min over samples of (chi'' - K chi) / chi
  double margin_k_dchi = 0.0;  // min over samples of (chi'' + K chi') / |chi'|

  double value(double t) const;
  double d1(double t) const;
  double d2(double t) const;
};

CutoffSpec make_cutoff(double K, double delta, int samples = 10000);

struct CreaseOptions {
  double merge_fraction = 0.1;  // merge half-width in units of delta / A
  double min_cells = 10.0;      // grid cells required across the merge
};

struct CreaseResult {
  RadialProfile smoothed;
  double margin = 0.0;  // min r^2 (-Δf + κ scal f) / f over interior nodes
  double margin_radius = 0.0;
  double gap = 0.0;     // d(f1 - f2)/dx1 at the crossing, x1 = r_c - r
  double eta = 0.0;
  double delta = 0.0;
  double merge_width = 0.0;
  double A = 0.0;
};

// Radius where f1 - f2 changes sign, by linear interpolation.
double find_crossing(const RadialProfile& f1, const RadialProfile& f2);

// Smooths min(f1, f2) across the crossing, f2 the smaller side for r < r_c.
// Both profiles live on one log-uniform grid.
CreaseResult crease_smooth(const cone::ConeSpec& c, const RadialProfile& f1, const RadialProfile& f2,
                           double crossing, double eta, double K, const CreaseOptions& options = {});

// r^2 (-Δf + κ scal f) / f at interior nodes of a log-uniform profile.
std::vector<double> conformal_margin(const cone::ConeSpec& c, const RadialProfile& f);

}  // namespace conelab::perron
