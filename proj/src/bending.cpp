#include "conelab/bending.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "conelab/error.hpp"

namespace conelab::bending {

namespace {

constexpr double kAngle = 1.2;

double sign(double t) { return (t > 0.0) - (t < 0.0); }

// 1 - S(y) = 2 / (1 + e^{2B}).
double one_minus_s(double A, double y) {
  const double B = 0.5 * A * y / (1.0 - y * y);
  return 2.0 / (1.0 + std::exp(2.0 * B));
}

metric::Factor sin2_factor() {
  return {[](double t) {
    return std::array<double, 3>{std::sin(t) * std::sin(t), std::sin(2.0 * t), 2.0 * std::cos(2.0 * t)};
  }};
}

Vec angles(int dim, double t) {
  Vec x = Vec::Constant(dim, kAngle);
  x[0] = t;
  return x;
}

metric::MetricJet with_first(const metric::MetricJet& j, bool normal, bool tangential) {
  const int n = static_cast<int>(j.g.rows());
  metric::MetricJet out = metric::MetricJet::zero(n);
  out.g = j.g;
  if (normal) out.dg[0] = j.dg[0];
  if (tangential)
    for (int c = 1; c < n; ++c) out.dg[c] = j.dg[c];
  return out;
}

double Q(const metric::MetricJet& j) { return metric::scal_from_jet(j); }

// Linear part of scal evaluated on a single second-derivative slot pattern.
double L(const Mat& g, const std::vector<std::pair<int, int>>& slots, const std::vector<Mat>& values) {
  const int n = static_cast<int>(g.rows());
  metric::MetricJet j = metric::MetricJet::zero(n);
  j.g = g;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    j.ddg[slots[i].first][slots[i].second] = values[i];
  }
  return metric::scal_from_jet(j);
}

metric::MetricJet diagonal_part(metric::MetricJet j) {
  auto diag = [](Mat& m) { m = Mat(m.diagonal().asDiagonal()); };
  diag(j.g);
  for (Mat& m : j.dg) diag(m);
  for (auto& row : j.ddg)
    for (Mat& m : row) diag(m);
  return j;
}

}  // namespace

HSample h_eval(double k, double delta, double t) {
  require(k > 0.0 && delta > 0.0, ErrorCode::Domain, "need k > 0 and delta > 0");
  const double a = std::abs(t);
  const double x = a / delta;
  if (x >= 1.0) return {a, sign(t), 0.0, 0.0};
  const double A = 2.1 * k * delta;
  const double B = 0.5 * A * x / (1.0 - x * x);
  const double e = std::exp(-2.0 * B);
  const double s = (1.0 - e) / (1.0 + e);
  HSample out;
  out.defect = 2.0 * e / (1.0 + e);
  out.d1 = sign(t) * s;
  out.d2 = 4.0 * e / ((1.0 + e) * (1.0 + e)) * 0.5 * A * (1.0 + x * x) / ((1.0 - x * x) * (1.0 - x * x)) / delta;
  // Beyond B = 40 the integrand is below 1e-34 and is dropped.
  const double y_end = (-0.5 * A + std::sqrt(0.25 * A * A + 6400.0)) / 80.0;
  const double tail = x >= y_end ? 0.0
                                 : boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
                                       [A](double y) { return one_minus_s(A, y); }, x, y_end, 12, 1e-13);
  out.value = a + delta * tail;
  return out;
}

bool BendProfile::invariants_hold() const {
  return min_ratio_neg >= 0.0 && min_ratio_pos >= 0.0 && max_abs_slope <= 1.0 && min_curvature >= 0.0 &&
         max_asymmetry == 0.0 && min_value > 0.0;
}

BendProfile build_h(double k, double delta, double sigma, int samples) {
  require(k > 0.0, ErrorCode::Domain, "k must be positive");
  require(delta > 0.0 && delta < 0.5 * sigma, ErrorCode::Domain, "delta must lie in (0, sigma/2)");
  require(samples >= 3, ErrorCode::Domain, "need at least three samples");
  const double spacing = 2.0 * sigma / (samples - 1);
  // Width of the steep part of h' around t = 0.
  const double width = 1.0 / (1.05 * k);
  require(width >= 4.0 * spacing, ErrorCode::Resolution, "transition of h' is narrower than the sampling allows");
  BendProfile bp;
  bp.k = k;
  bp.delta = delta;
  bp.sigma = sigma;
  bp.min_ratio_neg = bp.min_ratio_pos = bp.min_curvature = bp.min_value = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    const double t = -sigma + spacing * i;
    HSample h = h_eval(k, delta, t);
    const double ratio = std::abs(h.d2) - k * h.defect;
    if (t <= 0.0) bp.min_ratio_neg = std::min(bp.min_ratio_neg, ratio);
    if (t >= 0.0) bp.min_ratio_pos = std::min(bp.min_ratio_pos, ratio);
    bp.max_abs_slope = std::max(bp.max_abs_slope, std::abs(h.d1));
    bp.min_curvature = std::min(bp.min_curvature, h.d2);
    bp.max_asymmetry = std::max(bp.max_asymmetry, std::abs(h_eval(k, delta, -t).value - h.value));
    bp.min_value = std::min(bp.min_value, h.value);
    bp.t.push_back(t);
    bp.h.push_back(h);
  }
  return bp;
}

// ---------------------------------------------------------------- tubes

std::array<double, 3> TubeMetric::warp(double s) const {
  switch (kind) {
    case CoreKind::Flat: return {size - s, -1.0, 0.0};
    case CoreKind::Spherical: return {std::sin(size - s), -std::cos(size - s), -std::sin(size - s)};
    case CoreKind::Cylinder: return {1.0, 0.0, 0.0};
  }
  return {1.0, 0.0, 0.0};
}

double TubeMetric::slice_trace(double s) const {
  auto [f, f1, f2] = warp(s);
  (void)f2;
  return -m * f1 / f;
}

TubeMetric flat_tube(int m, double radius, double depth) {
  TubeMetric tm{CoreKind::Flat, m, radius, depth};
  validate(tm);
  return tm;
}

TubeMetric spherical_tube(int m, double rho0, double depth) {
  TubeMetric tm{CoreKind::Spherical, m, rho0, depth};
  validate(tm);
  return tm;
}

TubeMetric cylinder_tube(int m, double depth) {
  TubeMetric tm{CoreKind::Cylinder, m, 1.0, depth};
  validate(tm);
  return tm;
}

void validate(const TubeMetric& tm) {
  require(tm.m >= 1, ErrorCode::Domain, "core dimension must be positive");
  require(tm.depth > 0.0, ErrorCode::Domain, "tube depth must be positive");
  if (tm.kind == CoreKind::Flat)
    require(tm.size > tm.depth, ErrorCode::Domain, "tube depth must stay below the core radius");
  if (tm.kind == CoreKind::Spherical)
    require(tm.size > tm.depth && tm.size < std::numbers::pi - tm.depth, ErrorCode::Domain,
            "geodesic core radius must satisfy depth < rho0 < pi - depth");
}

metric::AnalyticMetric base_analytic(const TubeMetric& tm) {
  validate(tm);
  metric::SeparableDiagonal sep(tm.dim());
  metric::Factor radial{[tm](double s) {
    auto [f, f1, f2] = tm.warp(s);
    return std::array<double, 3>{f * f, 2.0 * f * f1, 2.0 * (f1 * f1 + f * f2)};
  }};
  for (int entry = 1; entry <= tm.m; ++entry) {
    sep.set_factor(entry, 0, radial);
    for (int c = 1; c < entry; ++c) sep.set_factor(entry, c, sin2_factor());
  }
  return sep.analytic();
}

metric::MetricJet bent_jet(const metric::MetricJet& base, const HSample& h) {
  const int n = static_cast<int>(base.g.rows());
  metric::MetricJet out = base;
  out.dg[0] = h.d1 * base.dg[0];
  out.ddg[0][0] = h.d2 * base.dg[0] + (h.d1 * h.d1) * base.ddg[0][0];
  for (int c = 1; c < n; ++c) {
    out.ddg[0][c] = h.d1 * base.ddg[0][c];
    out.ddg[c][0] = h.d1 * base.ddg[c][0];
  }
  return out;
}

metric::AnalyticMetric bent_analytic(const TubeMetric& tm, const BendProfile& bp) {
  metric::AnalyticMetric base = base_analytic(tm);
  const double k = bp.k, delta = bp.delta;
  metric::AnalyticMetric out;
  out.value = [base, k, delta](const Vec& x) {
    Vec y = x;
    y[0] = h_eval(k, delta, x[0]).value;
    return base.value(y);
  };
  out.jet = [base, k, delta](const Vec& x) {
    HSample h = h_eval(k, delta, x[0]);
    Vec y = x;
    y[0] = h.value;
    return bent_jet(base.jet(y), h);
  };
  return out;
}

metric::Chart tube_chart(const TubeMetric& tm, double t_min, double t_max, int t_samples, int angle_samples) {
  require(t_max > t_min, ErrorCode::Domain, "empty t range");
  std::vector<metric::Axis> axes{{t_min, t_max, t_samples}};
  const double half = 0.05 * (angle_samples - 1) / 2.0;
  for (int c = 0; c < tm.m; ++c) axes.push_back({kAngle - half, kAngle + half, angle_samples});
  return metric::Chart(std::move(axes));
}

metric::MetricField base_metric(const TubeMetric& tm, const metric::Chart& chart) {
  require(chart.dim() == tm.dim(), ErrorCode::Domain, "chart dimension differs from the tube");
  return metric::MetricField::from_analytic(chart, base_analytic(tm));
}

metric::MetricField bend_metric(const TubeMetric& tm, const BendProfile& bp, const metric::Chart& chart) {
  require(chart.dim() == tm.dim(), ErrorCode::Domain, "chart dimension differs from the tube");
  require(tm.depth >= bp.delta, ErrorCode::Domain, "tube too shallow for the bending transition");
  require(bp.sigma >= tm.depth, ErrorCode::Domain, "bend profile does not cover the tube depth");
  return metric::MetricField::from_analytic(chart, bent_analytic(tm, bp));
}

// ---------------------------------------------------------------- comparison

double scal_difference(const TubeMetric& tm, const BendProfile& bp, double t, metric::Method method, double h) {
  metric::AnalyticMetric base = base_analytic(tm);
  HSample hs = bp(t);
  const Vec xb = angles(tm.dim(), t), xs = angles(tm.dim(), hs.value);
  if (method != metric::Method::Stencil)
    return metric::scal_from_jet(bent_jet(base.jet(xs), hs)) - metric::scal_from_jet(base.jet(xs));
  require(h > 0.0, ErrorCode::Domain, "stencil spacing must be positive");
  metric::AnalyticMetric bent = bent_analytic(tm, bp);
  const Vec step = Vec::Constant(tm.dim(), h);
  metric::Chart cb = metric::Chart::centered(xb, step);
  metric::Chart cs = metric::Chart::centered(xs, step);
  metric::MetricField mb = metric::MetricField::sample(cb, bent.value);
  metric::MetricField ms = metric::MetricField::sample(cs, base.value);
  return metric::scalar_curvature(mb, cb.center_node(), metric::Method::Stencil) -
         metric::scalar_curvature(ms, cs.center_node(), metric::Method::Stencil);
}

double stencil_error(const TubeMetric& tm, const BendProfile& bp, double t, double h) {
  const double coarse = scal_difference(tm, bp, t, metric::Method::Stencil, h);
  const double fine = scal_difference(tm, bp, t, metric::Method::Stencil, 0.5 * h);
  const double floor = 100.0 * std::numeric_limits<double>::epsilon() / (h * h);
  return 4.0 / 3.0 * std::abs(coarse - fine) + floor;
}

CompareReport scal_compare(const TubeMetric& tm, const BendProfile& bp, const CompareOptions& o) {
  validate(tm);
  require(o.samples >= 2, ErrorCode::Domain, "need at least two samples");
  require(bp.sigma >= tm.depth, ErrorCode::Domain, "bend profile does not cover the tube depth");
  CompareReport out;
  out.min_diff = std::numeric_limits<double>::infinity();
  for (int i = 0; i < o.samples; ++i) {
    const double t = tm.depth * i / (o.samples - 1);
    const double d = scal_difference(tm, bp, t, o.method, o.stencil_h);
    out.t.push_back(t);
    out.diff.push_back(d);
    if (d < out.min_diff) {
      out.min_diff = d;
      out.argmin = t;
    }
    if (t >= bp.delta) out.max_abs_outside = std::max(out.max_abs_outside, std::abs(d));
  }
  return out;
}

Buckets dominant_decomposition(const TubeMetric& tm, const BendProfile& bp, double t) {
  metric::AnalyticMetric base = base_analytic(tm);
  const int n = tm.dim();
  HSample hs = bp(t);
  metric::MetricJet J = base.jet(angles(n, hs.value));
  metric::MetricJet B = bent_jet(J, hs);

  const double w1 = -hs.defect * (2.0 - hs.defect);              // h'^2 - 1
  const double w2 = t >= 0.0 ? -hs.defect : hs.d1 - 1.0;         // h' - 1
  const double q1 = Q(with_first(J, true, false));
  const double qk = Q(with_first(J, false, true));
  const double qall = Q(with_first(J, true, true));

  std::vector<std::pair<int, int>> mixed;
  std::vector<Mat> mixed_values;
  for (int c = 1; c < n; ++c) {
    mixed.push_back({0, c});
    mixed_values.push_back(J.ddg[0][c]);
    mixed.push_back({c, 0});
    mixed_values.push_back(J.ddg[c][0]);
  }

  Buckets out;
  out.t = t;
  out.i1 = w1 * q1;
  out.i2 = w2 * (qall - q1 - qk);
  out.i3 = w1 * L(J.g, {{0, 0}}, {J.ddg[0][0]});
  out.i4 = w2 * L(J.g, mixed, mixed_values);
  out.i5 = hs.d2 * L(J.g, {{0, 0}}, {J.dg[0]});
  out.i5_diagonal = 2.0 * hs.d2 * tm.slice_trace(hs.value);
  out.sum = out.i1 + out.i2 + out.i3 + out.i4 + out.i5;
  out.diff = metric::scal_from_jet(B) - metric::scal_from_jet(J);
  const double diag_diff = metric::scal_from_jet(diagonal_part(B)) - metric::scal_from_jet(diagonal_part(J));
  out.i6 = out.diff - diag_diff;
  return out;
}

StiffnessEstimate stiffness_estimate(const TubeMetric& tm, int samples) {
  metric::AnalyticMetric base = base_analytic(tm);
  const int n = tm.dim();
  StiffnessEstimate out;
  out.min_trace = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    const double s = tm.depth * i / (samples - 1);
    metric::MetricJet J = base.jet(angles(n, s));
    const double q1 = Q(with_first(J, true, false));
    const double qk = Q(with_first(J, false, true));
    const double qall = Q(with_first(J, true, true));
    std::vector<std::pair<int, int>> mixed;
    std::vector<Mat> mixed_values;
    for (int c = 1; c < n; ++c) {
      mixed.push_back({0, c});
      mixed_values.push_back(J.ddg[0][c]);
      mixed.push_back({c, 0});
      mixed_values.push_back(J.ddg[c][0]);
    }
    const double k = 2.0 * std::abs(q1) + std::abs(qall - q1 - qk) + 2.0 * std::abs(L(J.g, {{0, 0}}, {J.ddg[0][0]})) +
                     std::abs(L(J.g, mixed, mixed_values));
    out.k_est = std::max(out.k_est, k);
    out.min_trace = std::min(out.min_trace, tm.slice_trace(s));
  }
  require(out.min_trace > 0.0, ErrorCode::Domain, "tube slices are not mean convex");
  out.k = 2.0 * out.k_est / out.min_trace;
  return out;
}

double totally_geodesic_residual(const TubeMetric& tm, const BendProfile& bp, metric::Method method, double h) {
  const int n = tm.dim();
  metric::AnalyticMetric bent = bent_analytic(tm, bp);
  const Vec x = angles(n, 0.0);
  metric::ShapeResult shape;
  if (method != metric::Method::Stencil) {
    metric::ScalarJet f{0.0, Vec::Unit(n, 0), Mat::Zero(n, n)};
    shape = metric::shape_from_jets(bent.jet(x), f);
  } else {
    metric::Chart chart = metric::Chart::centered(x, Vec::Constant(n, h));
    metric::MetricField m = metric::MetricField::sample(chart, bent.value);
    metric::ScalarField f = metric::ScalarField::sample(chart, [](const Vec& y) { return y[0]; });
    shape = metric::level_set_shape(m, f, chart.center_node(), metric::Method::Stencil);
  }
  return shape.secondform.cwiseAbs().maxCoeff();
}

StiffnessSearch search_k(const TubeMetric& tm, double delta, double k0, double k_cap, const CompareOptions& o) {
  require(k0 > 0.0 && k_cap >= k0, ErrorCode::Domain, "need 0 < k0 <= k_cap");
  StiffnessSearch out;
  for (double k = k0; k <= k_cap; k *= 2.0, ++out.doublings) {
    CompareReport r = scal_compare(tm, build_h(k, delta, tm.depth), o);
    out.k_star = k;
    out.min_diff = r.min_diff;
    if (r.min_diff >= 0.0) return out;
  }
  fail(ErrorCode::ConvergenceFailure, "no stiffness up to the cap makes the scal difference nonnegative");
}

}  // namespace conelab::bending
