#pragma once

// Non-conformal bending of one-sided tubes: the even profile h, the bent
// metric g_{h(t)}, pointwise scalar curvature comparison and the split of
// the difference into weighted buckets.

#include <array>
#include <vector>

#include "conelab/metric.hpp"

namespace conelab::bending {

using metric::Mat;
using metric::Vec;

struct HSample {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double defect = 0.0;  // 1 - |h'|, evaluated without cancellation
};

// h'(t) = S(t/delta) with S(x) = tanh((A/2) x / (1 - x^2)) on |x| < 1 and
// h(t) = |t| for |t| >= delta, A = 2.1 k delta. h is even and convex.
HSample h_eval(double k, double delta, double t);

struct BendProfile {
  double k = 0.0;
  double delta = 0.0;
  double sigma = 0.0;
  std::vector<double> t;
  std::vector<HSample> h;
  double min_ratio_neg = 0.0;  // min over t <= 0 of |h''| - k|h' + 1|
  double min_ratio_pos = 0.0;  // min over t >= 0 of |h''| - k|h' - 1|
  double max_abs_slope = 0.0;  // max |h'|
  double min_curvature = 0.0;  // min h''
  double max_asymmetry = 0.0;  // max |h(-t) - h(t)|
  double min_value = 0.0;      // min h
  bool invariants_hold() const;
  HSample operator()(double t) const { return h_eval(k, delta, t); }
};

BendProfile build_h(double k, double delta, double sigma = 1.0, int samples = 10001);

enum class CoreKind { Flat, Spherical, Cylinder };

// dt^2 + f(t)^2 g_{S^m} on t in [0, depth]: the inward normal tube of a
// round sphere of radius R in flat space (f = R - t), of a geodesic sphere
// of radius rho0 in the unit sphere (f = sin(rho0 - t)), or a round cylinder
// (f = 1). Coordinates (t, theta_1 .. theta_m).
struct TubeMetric {
  CoreKind kind = CoreKind::Spherical;
  int m = 2;
  double size = 1.0;  // R or rho0
  double depth = 0.3;

  int dim() const { return m + 1; }
  std::array<double, 3> warp(double s) const;
  // tr A of the slice {t = s} for the normal d/dt, -f'(s) m / f(s).
  double slice_trace(double s) const;
  double core_trace() const { return slice_trace(0.0); }
};

TubeMetric flat_tube(int m, double radius, double depth);
TubeMetric spherical_tube(int m, double rho0, double depth);
TubeMetric cylinder_tube(int m, double depth);
void validate(const TubeMetric& tm);

metric::AnalyticMetric base_analytic(const TubeMetric& tm);
metric::AnalyticMetric bent_analytic(const TubeMetric& tm, const BendProfile& bp);
metric::MetricJet bent_jet(const metric::MetricJet& base, const HSample& h);

// Chart over [t_min, t_max] x angles centred at 1.2 with spacing 0.05.
metric::Chart tube_chart(const TubeMetric& tm, double t_min, double t_max, int t_samples, int angle_samples = 5);
metric::MetricField base_metric(const TubeMetric& tm, const metric::Chart& chart);
metric::MetricField bend_metric(const TubeMetric& tm, const BendProfile& bp, const metric::Chart& chart);

struct CompareOptions {
  metric::Method method = metric::Method::Analytic;
  int samples = 2001;
  double stencil_h = 1e-3;
};

struct CompareReport {
  std::vector<double> t;
  std::vector<double> diff;  // scal(bent)(t) - scal(base)(h(t))
  double min_diff = 0.0;
  double argmin = 0.0;
  double max_abs_outside = 0.0;  // over t >= delta
};

CompareReport scal_compare(const TubeMetric& tm, const BendProfile& bp, const CompareOptions& o = {});

// Pointwise difference at (t, angles = 1.2); stencil path uses a centred
// five-node chart with spacing h.
double scal_difference(const TubeMetric& tm, const BendProfile& bp, double t, metric::Method method, double h = 1e-3);
// (4/3)|D(h) - D(h/2)| plus a rounding floor.
double stencil_error(const TubeMetric& tm, const BendProfile& bp, double t, double h);

struct Buckets {
  double t = 0.0;
  double i1 = 0.0, i2 = 0.0, i3 = 0.0, i4 = 0.0, i5 = 0.0, i6 = 0.0;
  double i5_diagonal = 0.0;  // 2 h'' tr A of the slice at h(t)
  double sum = 0.0;          // i1 + .. + i5
  double diff = 0.0;         // analytic pointwise difference
  double rest() const { return i1 + i2 + i3 + i4; }
};

Buckets dominant_decomposition(const TubeMetric& tm, const BendProfile& bp, double t);

struct StiffnessEstimate {
  double k_est = 0.0;      // sup of the bucket coefficients
  double min_trace = 0.0;  // min slice tr A over [0, depth]
  double k = 0.0;          // 2 k_est / min_trace
};

StiffnessEstimate stiffness_estimate(const TubeMetric& tm, int samples = 401);

double totally_geodesic_residual(const TubeMetric& tm, const BendProfile& bp, metric::Method method, double h = 1e-3);

struct StiffnessSearch {
  double k_star = 0.0;
  int doublings = 0;
  double min_diff = 0.0;
};

// Doubles k from k0 until scal_compare reports min difference >= 0.
StiffnessSearch search_k(const TubeMetric& tm, double delta, double k0 = 1.0, double k_cap = 1048576.0,
                         const CompareOptions& o = {});

}  // namespace conelab::bending
