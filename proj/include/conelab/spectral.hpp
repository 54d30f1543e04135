#pragma once

// Weighted conformal-Laplacian eigenproblems on cone annuli, radially reduced.

#include <vector>

#include "conelab/cone.hpp"
#include "conelab/radial.hpp"

namespace conelab::spectral {

struct WeightedProblem {
  cone::ConeSpec cone;
  double kappa = 0.0;
  double eps = 0.0;
  double r_in = 0.5;
  double r_out = 1.0;
};

WeightedProblem make_problem(const cone::ConeSpec& c, double eps, double r_in, double r_out);

// eps^2 / r^2 + |A|^2(r).
double weight(const cone::ConeSpec& c, double eps, double r);

// Rayleigh quotient of a profile vanishing at both ends, f piecewise linear in r.
double rayleigh(const cone::ConeSpec& c, const RadialProfile& f, double eps);

struct SolverOptions {
  int nodes = 2000;            // interior nodes of the coarse grid
  bool richardson = true;      // combine nodes and 2 nodes + 1
  bool shooting_check = false;
  int shooting_steps = 20000;
};

struct EigenResult {
  double lambda = 0.0;
  RadialProfile profile;  // first eigenfunction, normalized on the reference band
  int m = 1;
  double r_in = 0.0;      // inner end of the exhaustion annulus K_m
  double r_out = 0.0;
  double lambda_coarse = 0.0;
  double lambda_fine = 0.0;
  double lambda_shooting = 0.0;  // only with shooting_check
};

// Exhaustion annulus K_m = [r_in 4^{-(m-1)}, r_out].
std::pair<double, double> exhaustion_annulus(const WeightedProblem& w, int m);

EigenResult dirichlet_eigen(const WeightedProblem& w, int m, const SolverOptions& options = {});

// First Dirichlet eigenvalue on [a, b] by shooting and bisection on the
// number of zeros.
double shooting_eigen(const cone::ConeSpec& c, double eps, double a, double b, int steps = 20000);

struct Lambda0Options {
  double r_in = 0.5;
  double r_out = 1.0;
  int m_max = 4;
  std::vector<double> eps = {0.2, 0.1, 0.05};
  SolverOptions solver;
  double monotone_tolerance = 1e-12;
};

struct Lambda0Result {
  double lambda0 = 0.0;
  double error_estimate = 0.0;
  std::vector<double> eps;
  std::vector<int> schedule;                        // exhaustion indices m
  std::vector<std::vector<double>> lambda_sequence;  // [eps][m]
  std::vector<double> lambda_eps;                   // exhaustion limit per eps
};

Lambda0Result lambda0(const cone::ConeSpec& c, const Lambda0Options& options = {});

// ((n-2)^2/4 - kappa (n-1)) / (n-1) = (n-2)(n-3)/(4(n-1)).
double lambda0_closed_form(const cone::ConeSpec& c);

struct BelowResult {
  RadialProfile profile;
  double alpha = 0.0;
  double residual = 0.0;  // sup of |L u| r^2 / u
};

// Positive solution r^alpha of -Δu + kappa scal u = lambda |A|^2 u on
// [r_in, r_out] for lambda in [1/8, lambda0).
BelowResult eigenfunction_below(const cone::ConeSpec& c, double lambda, double r_in = 1e-2,
                                double r_out = 1.0, std::size_t samples = 401);

}  // namespace conelab::spectral
