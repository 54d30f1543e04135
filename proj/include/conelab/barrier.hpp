#pragma once

// Truncated Green's-function barriers on deformed cones, their deflection
// radii, line superpositions and tube mean-curvature checks.

#include <boost/rational.hpp>
#include <functional>
#include <vector>

#include "conelab/cone.hpp"
#include "conelab/metric.hpp"
#include "conelab/radial.hpp"

namespace conelab::barrier {

using metric::Vec;

double green(int n, double rho);

struct GreenResidual {
  double sup = 0.0;  // max over samples of rho^2 |Δφ| / φ
  double argmax = 0.0;
  std::vector<double> rho;
  std::vector<double> residual;
};

// Radial Laplacian of rho^{2-n} on the deformed cone at log-spaced samples in
// [0.1, 10]. The stencil path samples a local chart with spacings h rho and h.
GreenResidual green_laplacian_residual(const cone::DeformedCone& d, metric::Method method, double h = 0.0,
                                       int samples = 9);

// Smooth step: 1 for x <= 1, 0 for x >= 2; returns value, first and second derivative.
std::array<double, 3> shell_cutoff(double x);

struct BarrierSpec {
  cone::DeformedCone deformed;
  double mu = 0.0;
  bool truncated = true;  // false: φ = μ rho^{2-n} + 1 everywhere
};

struct RadialJet {
  double value, d1, d2;
};

// φ⁺ = μ rho^{2-n} ψ(rho) + 1.
RadialJet phi_plus(const BarrierSpec& b, double rho);

// f'' + (n-1) f' / rho.
double radial_laplacian(int n, const RadialJet& f, double rho);

struct TruncationReport {
  RadialProfile profile;
  double penalty = 0.0;  // sup over the shell of |Δφ⁺|
  double penalty_radius = 0.0;
  double scal_deficit = 0.0;  // sup over the shell of (4(n-1)/(n-2)) |Δφ⁺| / φ⁺
};

TruncationReport truncate(const BarrierSpec& b, std::size_t shell_samples = 2001);

// inf over samples in [rho_min, rho_max] of scal rho^2 of the deformed cone,
// through metric-core on the analytic path.
double measure_iota(const cone::DeformedCone& d, double rho_min = 1e-3, double rho_max = 10.0, int samples = 17);

// min over samples of (scal - (4(n-1)/(n-2)) Δφ/φ) rho^2 - iota/2, i.e. the
// scal of φ^{4/(n-2)} g in units of φ^{-4/(n-2)} / rho^2.
double scal_condition_margin(const BarrierSpec& b, double iota, double rho_min = 1e-3, double rho_max = 10.0);

struct MuBisection {
  double mu_h = 0.0;
  double iota = 0.0;
  int iterations = 0;
};

MuBisection bisect_mu(const cone::DeformedCone& d, double iota, double rho_min = 1e-3, double rho_max = 10.0);

double area_profile(const BarrierSpec& b, double rho);

// Trace of the second fundamental form of S_rho after the conformal change,
// for the normal d/drho, up to the positive factor φ^{2/(n-2)}.
double sphere_trace(const BarrierSpec& b, double rho);

double deflection_radius(const BarrierSpec& b, double rho_min = 1e-6, double rho_max = 10.0);

// ---------------------------------------------------------------- superposition

struct FactorSample {
  double value;
  Vec grad;
};

using ConformalFactor = std::function<FactorSample(const Vec&)>;

// weight |x - center|^{-exponent} psi(|x - center| / cutoff), psi omitted when cutoff is 0.
struct PointSource {
  Vec center;
  double weight = 0.0;
  double exponent = 0.0;
  double cutoff = 0.0;
};

// Value, radial derivative and flat Laplacian of one source at distance d.
RadialJet source_jet(const PointSource& s, double d, int n);

ConformalFactor superpose(std::vector<PointSource> sources);

struct LinePoint {
  Vec position;  // in R^{n-1}
  double weight = 0.0;
  double beta = 0.0;
};

struct LineBarrierSpec {
  int n = 7;
  std::vector<LinePoint> points;
  int l = 64;
  double weight_cap = 1.0;
  double truncation = 0.0;  // cutoff radius of the point sources, 0 for none
};

void validate(const LineBarrierSpec& ls);

double line_exponent(int n, double beta);

// sqrt(pi) Gamma(e/2) / Gamma((e+1)/2) = ∫ (1 + t^2)^{-(e+1)/2} dt.
double line_constant(double e);

// Points x = (y, t) with y in R^{n-1}, axes R p through y = p.
double line_barrier(const LineBarrierSpec& ls, const Vec& x);
ConformalFactor line_factor(const LineBarrierSpec& ls);

// Left Riemann sum over t in (1/l)Z ∩ [t0, t1) of point sources with weight
// λ_p / (c_e l) and exponent e + 1, plus 1.
std::vector<PointSource> stieltjes_sources(const LineBarrierSpec& ls, double t0, double t1);
double stieltjes_superpose(const LineBarrierSpec& ls, double t0, double t1, const Vec& x);
// The l → ∞ limit of the same sum, by adaptive quadrature.
double stieltjes_limit(const LineBarrierSpec& ls, double t0, double t1, const Vec& x);

struct Tube {
  Vec center;
  Vec axis;  // unit vector for a line tube, empty for a sphere
  double radius = 0.0;
  double half_length = 0.0;  // axial extent for line tubes
};

struct TubeCheck {
  bool ok = false;
  double margin = 0.0;
  Vec argmin;
  int samples = 0;
  bool refined = false;
};

// Mean curvature of the tube boundary for the normal pointing away from the
// core after the change to u^{4/(n-2)} g_flat, on a 64 x 64 sample grid,
// refined once on failure.
TubeCheck tube_barrier_check(const ConformalFactor& u, const Tube& tube, int n, int samples = 64);

// ---------------------------------------------------------------- dimension shift

using Rational = boost::rational<long long>;

Rational kappa_rational(int n);

struct DimshiftReport {
  int n = 0;
  Rational kappa_n;
  Rational kappa_prev;
  Rational coefficient;  // kappa_n - kappa_{n-1}
  double margin = 0.0;   // coefficient a^2 c
  double residual = 0.0; // (CW) with kappa_{n-1}, evaluated at the kappa_n root
  double residual_flip_error = 0.0;  // |residual + margin|
  bool positive = false;
};

DimshiftReport dimshift_scal_sign(int n, double a2, double c_mode, double lambda);

}  // namespace conelab::barrier
