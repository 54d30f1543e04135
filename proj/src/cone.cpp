#include "conelab/cone.hpp"

#include <cmath>
#include <numbers>

#include "conelab/error.hpp"

namespace conelab::cone {

using metric::Mat;
using metric::Vec;

ConeSpec make_cone(int p, int q) {
  require(p >= 1 && q >= 1, ErrorCode::Domain, "sphere factor dimensions must be positive");
  ConeSpec c;
  c.p = p;
  c.q = q;
  c.n = p + q + 1;
  c.a = std::sqrt(static_cast<double>(p) / (p + q));
  c.b = std::sqrt(static_cast<double>(q) / (p + q));
  c.reduced_dimension = c.n < 7;
  return c;
}

double kappa(int n) { return (n - 2.0) / (4.0 * (n - 1.0)); }

std::vector<ConeSpec> catalog() {
  return {make_cone(3, 3), make_cone(4, 3), make_cone(4, 4), make_cone(5, 4)};
}

double second_form_norm2(const ConeSpec& c, double r) {
  require(r > 0.0, ErrorCode::Domain, "radius must be positive");
  return (c.p + c.q) / (r * r);
}

double cone_scal(const ConeSpec& c, double r) { return -second_form_norm2(c, r); }

double link_scal(const ConeSpec& c) { return (c.n - 1.0) * (c.n - 3.0); }

double sphere_area(int k) {
  const double h = 0.5 * (k + 1);
  return 2.0 * std::pow(std::numbers::pi, h) / std::tgamma(h);
}

double link_volume(const ConeSpec& c) {
  return sphere_area(c.p) * std::pow(c.a, c.p) * sphere_area(c.q) * std::pow(c.b, c.q);
}

double link_diameter(const ConeSpec& c) {
  return std::numbers::pi * std::sqrt(c.a * c.a + c.b * c.b);
}

EmbeddedCurvature embedded_curvature(const ConeSpec& c, const Vec& u, const Vec& v) {
  require(u.size() == c.p + 1 && v.size() == c.q + 1, ErrorCode::Domain, "link point has wrong rank");
  const int dim = c.p + c.q + 2;
  const double a2 = c.a * c.a, b2 = c.b * c.b;
  Vec x(dim);
  x << c.a * u.normalized(), c.b * v.normalized();
  Vec grad(dim);
  Mat hess = Mat::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const bool first = i <= c.p;
    grad[i] = 2.0 * (first ? b2 : -a2) * x[i];
    hess(i, i) = 2.0 * (first ? b2 : -a2);
  }
  const double norm = grad.norm();
  Vec nu = grad / norm;
  Mat proj = Mat::Identity(dim, dim) - nu * nu.transpose();
  Mat form = proj * hess * proj / norm;
  return {form.trace(), form.squaredNorm()};
}

DeformedCone make_deformed(const ConeSpec& base, double alpha, double c0) {
  require(c0 > 0.0, ErrorCode::Domain, "c0 must be positive");
  require(alpha > -0.5 * (base.n - 2) && alpha <= 0.0, ErrorCode::Domain,
          "alpha must lie in (-(n-2)/2, 0]");
  return {base, alpha, c0};
}

double gamma_of(const DeformedCone& d) { return 2.0 * d.alpha / (d.base.n - 2.0); }

namespace {

metric::Factor sin2_factor() {
  return {[](double t) {
    return std::array<double, 3>{std::sin(t) * std::sin(t), std::sin(2.0 * t), 2.0 * std::cos(2.0 * t)};
  }};
}

metric::Factor radial_factor(double coefficient) {
  return {[coefficient](double rho) {
    return std::array<double, 3>{coefficient * rho * rho, 2.0 * coefficient * rho, 2.0 * coefficient};
  }};
}

}  // namespace

metric::AnalyticMetric deformed_analytic(const DeformedCone& d) {
  const ConeSpec& c = d.base;
  const double s = 1.0 + gamma_of(d);
  metric::SeparableDiagonal sep(c.n);
  auto add_sphere = [&](int first, int count, double radius) {
    for (int j = 0; j < count; ++j) {
      const int entry = first + j;
      sep.set_factor(entry, 0, radial_factor(s * s * radius * radius));
      for (int i = 0; i < j; ++i) sep.set_factor(entry, first + i, sin2_factor());
    }
  };
  add_sphere(1, c.p, c.a);
  add_sphere(1 + c.p, c.q, c.b);
  return sep.analytic();
}

metric::MetricField deformed_metric(const DeformedCone& d, const metric::Chart& chart) {
  require(chart.dim() == d.base.n, ErrorCode::Domain, "chart dimension differs from the cone");
  return metric::MetricField::from_analytic(chart, deformed_analytic(d));
}

metric::Chart link_chart(const ConeSpec& c, double rho, double h_rho, double h_angle, int samples) {
  Vec center = Vec::Constant(c.n, 1.2);
  center[0] = rho;
  Vec h = Vec::Constant(c.n, h_angle);
  h[0] = h_rho;
  return metric::Chart::centered(center, h, samples);
}

double deformed_scal(const DeformedCone& d, double rho) {
  require(rho > 0.0, ErrorCode::Domain, "distance must be positive");
  const double n = d.base.n;
  const double s = 1.0 + gamma_of(d);
  return ((n - 1.0) * (n - 3.0) / (s * s) - (n - 1.0) * (n - 2.0)) / (rho * rho);
}

double lambda_of_alpha(const ConeSpec& c, double alpha) {
  return -(alpha * alpha + (c.n - 2.0) * alpha) / (c.n - 1.0) - kappa(c.n);
}

double scal_constant_from_lambda(const DeformedCone& d) {
  const double n = d.base.n;
  const double s = 1.0 + gamma_of(d);
  return 4.0 * (n - 1.0) * (n - 1.0) * lambda_of_alpha(d.base, d.alpha) / ((n - 2.0) * s * s);
}

double quoted_scal_constant(const DeformedCone& d) {
  require(d.alpha < 0.0, ErrorCode::Domain, "the quoted constant needs alpha < 0");
  const double n = d.base.n;
  return 4.0 * (n - 1.0) / (2.0 * std::abs(d.alpha)) * lambda_of_alpha(d.base, d.alpha) *
         std::pow(d.c0, 4.0 * (n - 3.0) / (n - 2.0)) * (d.base.p + d.base.q);
}

double deformed_distance(const ConeSpec& c, double beta, double r) {
  require(r > 0.0, ErrorCode::Domain, "radius must be positive");
  const double e = 1.0 + 2.0 * beta / (c.n - 2.0);
  require(e > 0.0, ErrorCode::DivergentDistance, "conformal factor is not integrable at the tip");
  return std::pow(r, e) / e;
}

DistortionBracket distortion_bounds(double rho_original, double theta_plus, double theta_minus,
                                    double k1, double k2) {
  require(rho_original > 0.0, ErrorCode::Domain, "distance must be positive");
  require(0.0 <= theta_plus && theta_plus <= theta_minus && theta_minus < 1.0, ErrorCode::Domain,
          "need 0 <= theta_plus <= theta_minus < 1");
  require(0.0 < k1 && k1 <= k2, ErrorCode::Domain, "need 0 < k1 <= k2");
  return {k1 * std::pow(rho_original, 1.0 - theta_plus), k2 * std::pow(rho_original, 1.0 - theta_minus)};
}

}  // namespace conelab::cone
