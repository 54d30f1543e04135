#pragma once

// Minimal cones over products of two round spheres S^p(a) x S^q(b) and the
// conformally deformed cone metrics built from c0 r^alpha.

#include <utility>
#include <vector>

#include "conelab/metric.hpp"

namespace conelab::cone {

struct ConeSpec {
  int p = 3;
  int q = 3;
  int n = 7;       // hypersurface dimension p + q + 1
  double a = 0.0;  // radius of the S^p factor of the link
  double b = 0.0;
  bool reduced_dimension = false;  // n < 7: formulas hold, minimization does not
};

ConeSpec make_cone(int p, int q);

// Conformal coupling (n-2)/(4(n-1)).
double kappa(int n);

// The cones used throughout the test suite and the CLI.
std::vector<ConeSpec> catalog();

double second_form_norm2(const ConeSpec& c, double r);
double cone_scal(const ConeSpec& c, double r);

// Scalar curvature of the link with its induced metric, (n-1)(n-3).
double link_scal(const ConeSpec& c);
double link_volume(const ConeSpec& c);
double link_diameter(const ConeSpec& c);

// Area of the unit sphere S^k in R^{k+1}.
double sphere_area(int k);

struct EmbeddedCurvature {
  double mean_curvature;  // of the link in S^n, equal to that of the cone at r = 1
  double norm2;           // |A|^2 of the cone at r = 1
};

// Curvature of the zero set of b^2|x|^2 - a^2|y|^2 at a link point given by
// unit vectors u in R^{p+1} and v in R^{q+1}, from the exact Hessian.
EmbeddedCurvature embedded_curvature(const ConeSpec& c, const metric::Vec& u, const metric::Vec& v);

struct DeformedCone {
  ConeSpec base;
  double alpha = 0.0;
  double c0 = 1.0;
};

DeformedCone make_deformed(const ConeSpec& base, double alpha, double c0 = 1.0);

// gamma = 2 alpha / (n - 2). The deformed metric reads
// d rho^2 + (1 + gamma)^2 rho^2 g_link.
double gamma_of(const DeformedCone& d);

// Coordinates (rho, theta_1..theta_p, phi_1..phi_q); hyperspherical angles on
// each sphere factor.
metric::AnalyticMetric deformed_analytic(const DeformedCone& d);
metric::MetricField deformed_metric(const DeformedCone& d, const metric::Chart& chart);

// Chart centred at distance rho with angles near pi/2.
metric::Chart link_chart(const ConeSpec& c, double rho, double h_rho, double h_angle, int samples = 5);

// Closed forms for the deformed metric.
double deformed_scal(const DeformedCone& d, double rho);
// The eigenvalue whose indicial root is alpha: -(alpha^2 + (n-2) alpha)/(n-1) - kappa.
double lambda_of_alpha(const ConeSpec& c, double alpha);
// scal * rho^2 written through lambda: 4 (n-1)^2 lambda / ((n-2) (1+gamma)^2).
double scal_constant_from_lambda(const DeformedCone& d);
// (4(n-1)/(2|alpha|)) lambda c0^{4(n-3)/(n-2)} (p+q), the constant in the
// form usually quoted for this metric.
double quoted_scal_constant(const DeformedCone& d);

// t^e / e with e = 1 + 2 beta/(n-2).
double deformed_distance(const ConeSpec& c, double beta, double r);

struct DistortionBracket {
  double lower;
  double upper;
};

DistortionBracket distortion_bounds(double rho_original, double theta_plus, double theta_minus,
                                    double k1, double k2);

}  // namespace conelab::cone
