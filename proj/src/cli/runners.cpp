#include <algorithm>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "conelab/barrier.hpp"
#include "conelab/bending.hpp"
#include "conelab/cli/scenario.hpp"
#include "conelab/cone.hpp"
#include "conelab/covering.hpp"
#include "conelab/error.hpp"
#include "conelab/metric.hpp"
#include "conelab/perron.hpp"
#include "conelab/serialize.hpp"
#include "conelab/spectral.hpp"

namespace conelab::cli {

namespace {

using metric::Mat;
using metric::Vec;

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double num(const Context& ctx, const char* key) { return ctx.params().at(key).get<double>(); }
int integer(const Context& ctx, const char* key) { return ctx.params().at(key).get<int>(); }
std::vector<double> list(const Context& ctx, const char* key) { return ctx.params().at(key).get<std::vector<double>>(); }

cone::ConeSpec scenario_cone(const Context& ctx) { return cone::make_cone(integer(ctx, "p"), integer(ctx, "q")); }

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::string fmt(double x) { return io::format_number(x); }

// Indicial exponent by shooting in s = ln r: v'' + (n-2) v' + C v = 0 with
// v(0) = 1, v'(0) = sigma. Integrating towards the tip, slopes above the
// decaying-branch exponent produce a zero; slopes below it do not.
double shoot_alpha(int n, double C) {
  auto has_zero = [&](double sigma) {
    const double T = 30.0, h = 1e-3;
    double v = 1.0, w = sigma;
    auto rhs = [&](double a, double b) { return std::array<double, 2>{b, -(n - 2.0) * b - C * a}; };
    for (double s = 0.0; s < T; s += h) {
      // Backward step in s.
      auto k1 = rhs(v, w);
      auto k2 = rhs(v - 0.5 * h * k1[0], w - 0.5 * h * k1[1]);
      auto k3 = rhs(v - 0.5 * h * k2[0], w - 0.5 * h * k2[1]);
      auto k4 = rhs(v - h * k3[0], w - h * k3[1]);
      v -= h / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]);
      w -= h / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]);
      if (v <= 0.0) return true;
    }
    return false;
  };
  double lo = -(n - 2.0) / 2.0, hi = 0.0;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (has_zero(mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

// ------------------------------------------------------------------ metric

void run_metric(Context& ctx) {
  const int factors = integer(ctx, "factors"), coarse = integer(ctx, "coarse");
  const double amp = num(ctx, "amplitude"), wave = num(ctx, "wavenumber");
  std::mt19937_64 rng(ctx.seed());
  io::Csv csv({"factor", "error_coarse", "error_fine", "order"});
  double min_order = 1e9, max_order = -1e9;
  std::string first_field;
  for (int f = 0; f < factors; ++f) {
    std::array<double, 3> a, phase;
    std::array<Vec, 3> k;
    for (int j = 0; j < 3; ++j) {
      a[j] = amp * (2.0 * unit(rng) - 1.0);
      k[j] = Vec(3);
      for (int d = 0; d < 3; ++d) k[j][d] = wave * (2.0 * unit(rng) - 1.0);
      phase[j] = 2.0 * std::numbers::pi * unit(rng);
    }
    auto s_of = [&](const Vec& x) {
      double s = 0;
      for (int j = 0; j < 3; ++j) s += a[j] * std::sin(k[j].dot(x) + phase[j]);
      return s;
    };
    auto lap_u = [&](const Vec& x) {
      double lap_s = 0;
      Vec grad = Vec::Zero(3);
      for (int j = 0; j < 3; ++j) {
        const double arg = k[j].dot(x) + phase[j];
        lap_s -= a[j] * k[j].squaredNorm() * std::sin(arg);
        grad += a[j] * std::cos(arg) * k[j];
      }
      return std::exp(s_of(x)) * (lap_s + grad.squaredNorm());
    };
    std::array<double, 2> err{};
    for (int level = 0; level < 2; ++level) {
      const int N = coarse << level;
      metric::Chart chart({{0, 1, N + 1}, {0, 1, N + 1}, {0, 1, N + 1}});
      metric::MetricField flat = metric::MetricField::sample(chart, [](const Vec&) { return Mat::Identity(3, 3); });
      metric::ScalarField u = metric::ScalarField::sample(chart, [&](const Vec& x) { return std::exp(s_of(x)); });
      metric::MetricField g = metric::conformal_deform(flat, u);
      if (f == 0 && level == 0 && N <= 16) first_field = io::to_json(g).dump();
      for (int i = 1; i < coarse; ++i)
        for (int j = 1; j < coarse; ++j)
          for (int l = 1; l < coarse; ++l) {
            metric::Node p{i << level, j << level, l << level};
            const Vec x = chart.coords(p);
            const double fd = metric::scalar_curvature(g, p, metric::Method::Stencil);
            const double tl = metric::conformal_scal(0.0, std::exp(s_of(x)), lap_u(x), 3);
            err[level] = std::max(err[level], std::abs(fd - tl));
          }
    }
    const double order = std::log2(err[0] / err[1]);
    min_order = std::min(min_order, order);
    max_order = std::max(max_order, order);
    csv.add({static_cast<double>(f), err[0], err[1], order});
  }
  ctx.op("metric", "conformal_deform");
  ctx.op("metric", "scalar_curvature");
  ctx.op("metric", "conformal_scal");
  ctx.within("tl-order-min", min_order, 1.8, 2.2, "smallest convergence order over the factors");
  ctx.within("tl-order-max", max_order, 1.8, 2.2, "largest convergence order over the factors");
  ctx.artifact("tl.csv", csv.str());
  if (!first_field.empty()) ctx.artifact("metric.json", first_field + "\n");

  // Polar coordinates at r = 2.
  metric::Chart polar = metric::Chart::centered((Vec(2) << 2.0, 0.3).finished(), Vec::Constant(2, 1e-3));
  metric::MetricField gp = metric::MetricField::sample(polar, [](const Vec& x) {
    Mat g = Mat::Identity(2, 2);
    g(1, 1) = x[0] * x[0];
    return g;
  });
  metric::Christoffel G = metric::christoffel(gp, polar.center_node(), metric::Method::Stencil);
  ctx.op("metric", "christoffel");
  ctx.near("christoffel-polar-r-thetatheta", G(0, 1, 1), -2.0, 1e-6);
  ctx.near("christoffel-polar-theta-rtheta", G(1, 0, 1), 0.5, 1e-6);

  // Unit sphere as a level set in flat R^4.
  metric::Chart box = metric::Chart::centered((Vec(4) << 1.0, 0.0, 0.0, 0.0).finished(), Vec::Constant(4, 1e-3));
  metric::MetricField flat4 = metric::MetricField::sample(box, [](const Vec&) { return Mat::Identity(4, 4); });
  metric::ScalarField radius = metric::ScalarField::sample(box, [](const Vec& x) { return x.norm(); });
  metric::ScalarField minus = metric::ScalarField::sample(box, [](const Vec& x) { return -x.norm(); });
  const double tr = metric::level_set_shape(flat4, radius, box.center_node(), metric::Method::Stencil).trace;
  const double tr_minus = metric::level_set_shape(flat4, minus, box.center_node(), metric::Method::Stencil).trace;
  ctx.op("metric", "level_set_shape");
  ctx.near("sphere-trace", tr, 3.0, 1e-5, "unit sphere in R^4, trace n - 1");
  ctx.near("sphere-trace-flip", tr + tr_minus, 0.0, 1e-12, "reversing the normal negates the trace");

  // Distance sphere of a 7-dimensional cone under u = rho^{-5/2}: a cylinder slice.
  const int n = 7;
  const double rho = 0.7;
  Vec grad = Vec::Zero(n), normal = Vec::Zero(n);
  const double u = std::pow(rho, -2.5);
  grad[0] = -2.5 * u / rho;
  normal[0] = 1.0;
  const Mat shifted = metric::conformal_shape_shift(-(1.0 / rho) * Mat::Identity(n - 1, n - 1),
                                                    Mat::Identity(n - 1, n - 1), u, grad, normal, n);
  ctx.op("metric", "conformal_shape_shift");
  ctx.near("cylinder-trace", shifted.trace(), 0.0, 1e-12);
}

// ------------------------------------------------------------------ cone

void run_cone(Context& ctx) {
  const std::vector<cone::ConeSpec> cones = cone::catalog();
  ctx.op("cone", "make_cone");
  double mean_curv = 0, a2_err = 0, scal_err = 0, diam_err = 0;
  for (const cone::ConeSpec& c : cones) {
    Vec u = Vec::LinSpaced(c.p + 1, 0.3, 1.1), v = Vec::LinSpaced(c.q + 1, -0.7, 0.9);
    cone::EmbeddedCurvature ec = cone::embedded_curvature(c, u, v);
    mean_curv = std::max(mean_curv, std::abs(ec.mean_curvature));
    for (double r : {0.5, 1.0, 2.0}) {
      a2_err = std::max(a2_err, std::abs(cone::second_form_norm2(c, r) / (ec.norm2 / (r * r)) - 1.0));
      scal_err = std::max(scal_err, std::abs(cone::cone_scal(c, r) + ec.norm2 / (r * r)));
    }
    diam_err = std::max(diam_err, std::abs(cone::link_diameter(c) - std::numbers::pi));
  }
  ctx.op("cone", "second_form_norm2");
  ctx.op("cone", "cone_scal");
  ctx.op("cone", "link_diameter");
  ctx.at_most("link-minimality", mean_curv, 1e-8, "mean curvature of the embedded link");
  ctx.at_most("second-form-embedding", a2_err, 1e-6, "relative error against the embedded link");
  ctx.at_most("gauss-equation", scal_err, 1e-9);
  ctx.at_most("link-diameter-pi", diam_err, 1e-12);

  // Analytic jets at a single point per radius; the sampled field is only
  // built for the Simons cone, whose chart stays small.
  double homothety = 0, scal_rel = 0;
  for (const cone::ConeSpec& c : cones) {
    const double lambda = 0.5 * spectral::lambda0_closed_form(c);
    cone::DeformedCone d = cone::make_deformed(c, perron::indicial_exponent(c, lambda).alpha);
    const metric::AnalyticMetric am = cone::deformed_analytic(d);
    auto scal_at = [&](double rho) {
      Vec x = Vec::Constant(c.n, 1.2);
      x[0] = rho;
      return metric::scal_from_jet(am.jet(x));
    };
    for (double rho : {0.5, 1.0, 2.0}) scal_rel = std::max(scal_rel, std::abs(scal_at(rho) / cone::deformed_scal(d, rho) - 1.0));
    homothety = std::max(homothety, std::abs(4.0 * scal_at(2.0) / scal_at(1.0) - 1.0));
  }
  {
    const cone::ConeSpec c = cone::make_cone(3, 3);
    cone::DeformedCone d = cone::make_deformed(c, perron::indicial_exponent(c, 0.5 * spectral::lambda0_closed_form(c)).alpha);
    metric::Chart chart = cone::link_chart(c, 1.0, 1e-3, 1e-3);
    const double s = metric::scalar_curvature(cone::deformed_metric(d, chart), chart.center_node(), metric::Method::Analytic);
    scal_rel = std::max(scal_rel, std::abs(s / cone::deformed_scal(d, 1.0) - 1.0));
  }
  ctx.op("cone", "deformed_metric");
  ctx.at_most("deformed-scal-closed-form", scal_rel, 1e-9, "metric-core scal against the constant/rho^2 form");
  ctx.at_most("deformed-homothety", homothety, 1e-9);

  // Deformed distance of the Simons cone against quadrature and the bracket.
  const cone::ConeSpec simons = cone::make_cone(3, 3);
  const double beta = perron::indicial_exponent(simons, 0.5 * spectral::lambda0_closed_form(simons)).alpha;
  const double e = 1.0 + 2.0 * beta / (simons.n - 2.0);
  boost::math::quadrature::tanh_sinh<double> ts;
  double quad_err = 0;
  bool inside = true;
  for (double r : log_grid(num(ctx, "r_min"), num(ctx, "r_max"), 13)) {
    const double rho = cone::deformed_distance(simons, beta, r);
    const double q = ts.integrate([&](double t) { return std::pow(t, e - 1.0); }, 0.0, r);
    quad_err = std::max(quad_err, std::abs(rho / q - 1.0));
    cone::DistortionBracket b = cone::distortion_bounds(r, 1.0 - e, 1.0 - e, 0.99 / e, 1.01 / e);
    inside = inside && b.lower < rho && rho <= b.upper;
  }
  ctx.op("cone", "deformed_distance");
  ctx.op("cone", "distortion_bounds");
  ctx.at_most("deformed-distance-quadrature", quad_err, 1e-9);
  ctx.truth("deformed-distance-bracket", inside);
  ctx.artifact("catalog.json", io::catalog_json(cones).dump(2) + "\n");
}

// ------------------------------------------------------------------ spectral

void run_spectral(Context& ctx) {
  const cone::ConeSpec c = scenario_cone(ctx);
  spectral::Lambda0Options o;
  o.r_in = num(ctx, "r_in");
  o.r_out = num(ctx, "r_out");
  o.m_max = integer(ctx, "m_max");
  o.eps = list(ctx, "eps");
  o.solver.nodes = integer(ctx, "nodes");
  spectral::Lambda0Result r = spectral::lambda0(c, o);
  ctx.op("spectral", "lambda0");
  ctx.op("spectral", "dirichlet_eigen");
  ctx.near("lambda0-value", r.lambda0, spectral::lambda0_closed_form(c), num(ctx, "tolerance"), "Hardy closed form");
  ctx.above("lambda0-above-quarter", r.lambda0, 0.25);
  double rise = -1e300;
  for (const auto& seq : r.lambda_sequence)
    for (std::size_t m = 1; m < seq.size(); ++m) rise = std::max(rise, seq[m] - seq[m - 1]);
  ctx.at_most("exhaustion-monotone", rise, 0.0, "largest increase of lambda_{m,eps} in m");

  spectral::WeightedProblem w = spectral::make_problem(c, o.eps.back(), 1.0, 2.0);
  spectral::SolverOptions so;
  so.nodes = o.solver.nodes;
  const double fd = spectral::dirichlet_eigen(w, 1, so).lambda;
  const double sh = spectral::shooting_eigen(c, o.eps.back(), 1.0, 2.0);
  ctx.near("fd-vs-shooting", fd, sh, 1e-6, "first eigenvalue on [1, 2]");

  ctx.op("spectral", "weight");
  ctx.near("weight-value", spectral::weight(c, 1.0, 1.0), 1.0 + c.p + c.q, 1e-15);
  std::vector<double> rr = log_grid(1.0, 2.0, 201), uu(rr.size());
  for (std::size_t i = 0; i < rr.size(); ++i) uu[i] = 1.0 - std::abs(2.0 * (rr[i] - 1.5));
  ctx.op("spectral", "rayleigh");
  ctx.at_least("rayleigh-hat-bound", spectral::rayleigh(c, RadialProfile(rr, uu), 0.0),
               spectral::lambda0_closed_form(c) - 1e-9);
  ctx.artifact("lambda0.json", io::lambda0_json(c, r).dump(2) + "\n");
}

// ------------------------------------------------------------------ indicial band

void run_indicial(Context& ctx) {
  const int steps = integer(ctx, "lambda_steps");
  io::Csv csv({"p", "q", "lambda", "alpha", "alpha_shooting", "conjugate"});
  double worst = 0, residual = 0;
  int bad_count = 0;
  for (const cone::ConeSpec& c : cone::catalog()) {
    const double top = spectral::lambda0_closed_form(c);
    for (int j = 0; j < steps; ++j) {
      const double lambda = 0.125 + (top - 0.125) * j / steps;
      spectral::BelowResult below = spectral::eigenfunction_below(c, lambda, num(ctx, "r_in"));
      perron::IndicialRoots roots = perron::indicial_exponent(c, lambda);
      const double lo = -(c.n - 2.0) / 2.0;
      const int count = (roots.alpha > lo && roots.alpha < 0.0) + (roots.conjugate > lo && roots.conjugate < 0.0);
      bad_count += count != 1;
      const double shot = shoot_alpha(c.n, (cone::kappa(c.n) + lambda) * (c.p + c.q));
      worst = std::max({worst, std::abs(shot - roots.alpha), std::abs(below.alpha - roots.alpha)});
      residual = std::max(residual, below.residual);
      csv.add({double(c.p), double(c.q), lambda, roots.alpha, shot, roots.conjugate});
    }
  }
  ctx.op("spectral", "eigenfunction_below");
  ctx.op("perron", "indicial_exponent");
  ctx.at_most("unique-root-violations", bad_count, 0.0, "sweeps without exactly one root in the band");
  ctx.at_most("alpha-vs-shooting", worst, 1e-6);
  ctx.at_most("below-residual", residual, 1e-10);
  bool out_of_band = false;
  try {
    const cone::ConeSpec s = cone::make_cone(3, 3);
    spectral::eigenfunction_below(s, spectral::lambda0_closed_form(s));
  } catch (const Error& e) {
    out_of_band = e.code() == ErrorCode::OutOfBand;
  }
  ctx.truth("lambda0-is-out-of-band", out_of_band);
  ctx.artifact("indicial.csv", csv.str());
}

// ------------------------------------------------------------------ perron

perron::PerronProblem scenario_problem(const Context& ctx) {
  perron::PerronProblem pp;
  pp.cone = scenario_cone(ctx);
  pp.lambda = num(ctx, "lambda_fraction") * spectral::lambda0_closed_form(pp.cone);
  pp.r_in = num(ctx, "r_in");
  pp.r_out = num(ctx, "r_out");
  pp.nodes_per_unit = num(ctx, "nodes_per_unit");
  return pp;
}

void run_perron(Context& ctx) {
  perron::PerronProblem pp = scenario_problem(ctx);
  const double top = spectral::lambda0_closed_form(pp.cone);
  std::vector<RadialProfile> seeds;
  for (double f : list(ctx, "seed_fractions")) seeds.push_back(perron::seed_supersolution(pp, pp.lambda + f * (top - pp.lambda)));

  perron::SupersolutionReport sr = perron::is_supersolution(pp, seeds.front());
  ctx.op("perron", "is_supersolution");
  ctx.truth("seed-is-supersolution", sr.ok);

  perron::PerronResult res = perron::perron_minimal(pp, seeds);
  ctx.op("perron", "perron_minimal");
  const double alpha = perron::indicial_exponent(pp.cone, pp.lambda).alpha;
  double worst = 0;
  for (std::size_t i = 0; i < res.w.size(); ++i)
    worst = std::max(worst, std::abs(res.w.u(i) - pp.boundary_value * std::pow(res.w.r(i) / pp.r_out, alpha)));
  ctx.at_most("closed-form-sup-error", worst, 1e-4);
  ctx.at_most("operator-residual", res.residual, 1e-8);
  ctx.at_most("minimality", *std::max_element(res.minimality.begin(), res.minimality.end()), 0.0,
              "max over seeds of max(w - seed)");

  // Exact data recovers r^alpha.
  std::vector<double> r = log_grid(0.5, 1.0, 401);
  RadialProfile exact = perron::local_solve(pp, r, std::pow(0.5, alpha), 1.0);
  double local = 0;
  for (std::size_t i = 0; i < r.size(); ++i) local = std::max(local, std::abs(exact.u(i) - std::pow(r[i], alpha)));
  ctx.op("perron", "local_solve");
  ctx.at_most("local-solve-exact", local, 1e-8);

  // Lift of a strict supersolution lies strictly below it; a profile dipping
  // below zero is rejected.
  std::vector<double> g = perron::grid(pp), down(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) down[i] = std::pow(g[i], alpha) - 3.0;
  const RadialProfile& raised = seeds.front();
  const std::size_t a = raised.size() / 3;
  std::size_t b = a + 2;
  while (raised.r(b + 1) < 1.5 * raised.r(a)) ++b;
  RadialProfile lifted = perron::lift(pp, raised, a, b);
  double gain = 1e300;
  for (std::size_t i = a + 1; i < b; ++i) gain = std::min(gain, raised.u(i) - lifted.u(i));
  ctx.op("perron", "lift");
  ctx.above("lift-strictly-below", gain, 0.0, "lift of the seed supersolution on a sub-annulus");
  perron::SupersolutionReport bad = perron::is_supersolution(pp, RadialProfile(g, down));
  ctx.truth("dipping-profile-rejected", !bad.ok && bad.witness.has_value());

  io::Csv csv({"r", "w", "closed_form"});
  for (std::size_t i = 0; i < res.w.size(); i += 50)
    csv.add({res.w.r(i), res.w.u(i), pp.boundary_value * std::pow(res.w.r(i) / pp.r_out, alpha)});
  ctx.artifact("perron.json", io::perron_json(res).dump(2) + "\n");
  ctx.artifact("perron.csv", csv.str());
}

// ------------------------------------------------------------------ crease

void run_crease(Context& ctx) {
  perron::PerronProblem pp = scenario_problem(ctx);
  const cone::ConeSpec& c = pp.cone;
  const double top = spectral::lambda0_closed_form(c);
  const double lp = 0.5 * (pp.lambda + top);
  const double ap = perron::indicial_exponent(c, lp).alpha;
  perron::PerronResult pr = perron::perron_minimal(pp, {perron::seed_supersolution(pp, lp)});
  const double scale = num(ctx, "outer_scale");
  const double rc0 = std::pow(1.0 / scale, 1.0 / (ap - pr.alpha));
  std::vector<double> r = log_grid(rc0 * std::exp(-0.3), rc0 * std::exp(0.3), 60001), u1(r.size());
  RadialProfile f2 = perron::continue_solution(pp, pr.w, r);
  for (std::size_t i = 0; i < r.size(); ++i) u1[i] = scale * std::pow(r[i], ap);
  RadialProfile f1(r, u1);
  const double rc = perron::find_crossing(f1, f2);

  perron::CutoffSpec probe = perron::make_cutoff(num(ctx, "cutoff_probe_K"), 1.0);
  ctx.op("perron", "make_cutoff");
  ctx.at_least("cutoff-chi-inequality", probe.margin_k_chi, 0.0);
  ctx.at_least("cutoff-dchi-inequality", probe.margin_k_dchi, 0.0);

  io::Csv csv({"K", "delta_fraction", "eta", "delta", "margin", "margin_radius", "outside_deviation"});
  double min_margin = 1e300, outside = 0;
  for (double K : list(ctx, "K")) {
    for (double frac : list(ctx, "delta_fractions")) {
      const double A = perron::make_cutoff(K, 1.0).A;
      const double h = 1e-4 * rc;
      const double gap = -((f1(rc + h) - f2(rc + h)) - (f1(rc - h) - f2(rc - h))) / (2.0 * h);
      const double eta = gap * frac * rc / (2.0 * A);
      perron::CreaseResult res = perron::crease_smooth(c, f1, f2, rc, eta, K);
      double dev = 0;
      for (std::size_t i = 0; i < r.size(); ++i)
        if (std::abs(r[i] - rc) >= res.delta) dev = std::max(dev, std::abs(res.smoothed.u(i) - std::min(f1.u(i), f2.u(i))));
      min_margin = std::min(min_margin, res.margin);
      outside = std::max(outside, dev);
      csv.add({K, frac, eta, res.delta, res.margin, res.margin_radius, dev});
    }
  }
  ctx.op("perron", "crease_smooth");
  ctx.above("crease-margin", min_margin, 0.0, "smallest operator margin over all K and windows");
  ctx.at_most("crease-locality", outside, 0.0, "deviation from min(f1, f2) outside the window");
  bool no_crease = false;
  try {
    perron::crease_smooth(c, f2, f2, rc, 1e-3, 5.0);
  } catch (const Error& e) {
    no_crease = e.code() == ErrorCode::NoCrease;
  }
  ctx.truth("zero-gap-rejected", no_crease);
  ctx.artifact("crease.csv", csv.str());
}

// ------------------------------------------------------------------ barrier

cone::DeformedCone scenario_deformed(const Context& ctx) {
  const cone::ConeSpec c = scenario_cone(ctx);
  const double alpha = num(ctx, "alpha_scale") == 0.0
                           ? 0.0
                           : num(ctx, "alpha_scale") * perron::indicial_exponent(c, 0.5 * spectral::lambda0_closed_form(c)).alpha;
  return cone::make_deformed(c, alpha);
}

void run_green(Context& ctx) {
  const cone::DeformedCone d = scenario_deformed(ctx);
  const int n = d.base.n;
  ctx.op("barrier", "green");
  ctx.near("green-unit", barrier::green(n, 1.0), 1.0, 0.0);
  ctx.near("green-homogeneity", barrier::green(n, 2.0) / barrier::green(n, 1.0), std::pow(2.0, 2.0 - n), 1e-15);
  const double h = num(ctx, "stencil_h");
  const int samples = integer(ctx, "samples");
  auto an = barrier::green_laplacian_residual(d, metric::Method::Analytic, 0.0, samples);
  auto s1 = barrier::green_laplacian_residual(d, metric::Method::Stencil, h, samples);
  auto s2 = barrier::green_laplacian_residual(d, metric::Method::Stencil, 0.5 * h, samples);
  auto plain = barrier::green_laplacian_residual(cone::make_deformed(d.base, 0.0), metric::Method::Analytic, 0.0, samples);
  ctx.op("barrier", "green_laplacian_residual");
  ctx.at_most("green-analytic-residual", an.sup, 1e-12);
  ctx.within("green-stencil-order", std::log2(s1.sup / s2.sup), 1.8, 2.2);
  ctx.at_most("green-plain-cone", plain.sup, 1e-12);
  io::Csv csv({"rho", "analytic", "stencil_h", "stencil_h2"});
  for (std::size_t i = 0; i < an.rho.size(); ++i) csv.add({an.rho[i], an.residual[i], s1.residual[i], s2.residual[i]});
  ctx.artifact("green.csv", csv.str());
}

double area_stationary_point(const barrier::BarrierSpec& b) {
  auto f = [&](double log_rho) { return std::log(barrier::area_profile(b, std::exp(log_rho))); };
  auto [x, fx] = boost::math::tools::brent_find_minima(f, std::log(1e-6), std::log(10.0), 52);
  (void)fx;
  return std::exp(x);
}

double tube_margin_at(int n, double mu, double radius) {
  barrier::PointSource s{Vec::Zero(n), mu, n - 2.0, 1.0};
  return barrier::tube_barrier_check(barrier::superpose({s}), {Vec::Zero(n), Vec(), radius, 0.0}, n).margin;
}

io::BarrierRow barrier_row(const cone::DeformedCone& d, double mu, double iota) {
  const int n = d.base.n;
  barrier::BarrierSpec b{d, mu, true};
  barrier::TruncationReport t = barrier::truncate(b);
  const double theta = barrier::deflection_radius(b);
  return {mu,
          theta,
          std::pow(mu, 1.0 / (n - 2.0)),
          t.penalty,
          barrier::scal_condition_margin(b, iota) + 0.5 * iota,
          tube_margin_at(n, mu, 0.5 * theta)};
}

void run_truncation(Context& ctx) {
  const cone::DeformedCone d = scenario_deformed(ctx);
  const int n = d.base.n;
  std::vector<double> mus = log_grid(num(ctx, "mu_min"), num(ctx, "mu_max"), static_cast<std::size_t>(integer(ctx, "mu_points")));
  std::vector<double> lx, ly;
  double ratio_dev = 0;
  for (double mu : mus) {
    const double p1 = barrier::truncate({d, mu, true}).penalty;
    const double p2 = barrier::truncate({d, 2.0 * mu, true}).penalty;
    ratio_dev = std::max(ratio_dev, std::abs(p2 / p1 - 2.0));
    lx.push_back(std::log(mu));
    ly.push_back(std::log(p1));
  }
  ctx.op("barrier", "truncate");
  ctx.within("penalty-slope", slope(lx, ly), 0.95, 1.05);
  ctx.at_most("penalty-doubling", ratio_dev, 0.02, "|penalty(2 mu)/penalty(mu) - 2|");
  barrier::TruncationReport zero = barrier::truncate({d, 0.0, true});
  ctx.near("penalty-at-zero", zero.penalty, 0.0, 0.0);

  const double iota = barrier::measure_iota(d);
  barrier::MuBisection mb = barrier::bisect_mu(d, iota);
  double worst = 1e300;
  for (double f : list(ctx, "mu_h_fractions")) worst = std::min(worst, barrier::scal_condition_margin({d, f * mb.mu_h, true}, iota));
  ctx.above("mu-h-positive", mb.mu_h, 0.0);
  ctx.at_least("scal-condition-below-mu-h", worst, 0.0, "min of scal rho^2 - iota/2 for mu below mu_H");

  ctx.op("barrier", "area_profile");
  bool increasing = true;
  double prev = 0;
  for (double rho : log_grid(1e-3, 10.0, 200)) {
    const double a = barrier::area_profile({d, 0.0, true}, rho);
    increasing = increasing && a > prev;
    prev = a;
  }
  ctx.truth("area-increasing-at-zero", increasing);
  const double mu = mus.front();
  ctx.near("area-stationary-point", area_stationary_point({d, mu, false}) / std::pow(mu, 1.0 / (n - 2.0)), 1.0, 1e-6);

  std::vector<io::BarrierRow> rows;
  for (double m : mus) rows.push_back(barrier_row(d, m, iota));
  ctx.artifact("barrier.csv", io::barrier_csv(rows).str());
  json j = {{"iota", iota}, {"mu_h", mb.mu_h}, {"bisection_iterations", mb.iterations}};
  ctx.artifact("mu_h.json", j.dump(2) + "\n");
}

void run_theta(Context& ctx) {
  const cone::DeformedCone d = scenario_deformed(ctx);
  const int n = d.base.n;
  std::vector<double> mus = log_grid(num(ctx, "mu_min"), num(ctx, "mu_max"), static_cast<std::size_t>(integer(ctx, "mu_points")));
  std::vector<double> lx, ly;
  double rel = 0, trunc = 0, stationary = 0, prev = 0;
  bool monotone = true;
  for (double mu : mus) {
    const double cf = std::pow(mu, 1.0 / (n - 2.0));
    const double th = barrier::deflection_radius({d, mu, false});
    rel = std::max(rel, std::abs(th - cf) / cf);
    if (cf < 1.0) trunc = std::max(trunc, std::abs(barrier::deflection_radius({d, mu, true}) - th) / cf);
    stationary = std::max(stationary, std::abs(area_stationary_point({d, mu, false}) - th) / cf);
    monotone = monotone && th > prev;
    prev = th;
    lx.push_back(std::log(mu));
    ly.push_back(std::log(th));
  }
  ctx.op("barrier", "deflection_radius");
  ctx.op("barrier", "area_profile");
  ctx.at_most("theta-closed-form", rel, 1e-8, "relative error against mu^{1/(n-2)}");
  ctx.at_most("theta-truncated-agrees", trunc, 1e-8);
  ctx.at_most("theta-area-stationary", stationary, 1e-6);
  ctx.truth("theta-monotone", monotone);
  ctx.near("theta-slope", slope(lx, ly) * (n - 2.0), 1.0, 0.01, "fitted slope times (n - 2)");
  const double mu = mus.front(), rho = 1e-3 * std::pow(mu, 1.0 / (n - 2.0));
  ctx.near("small-sphere-trace", barrier::sphere_trace({d, mu, false}, rho) * rho / (n - 1.0), 1.0, 1e-2);
  bool no_barrier = false;
  try {
    barrier::deflection_radius({d, 1e8, false});
  } catch (const Error& e) {
    no_barrier = e.code() == ErrorCode::NoBarrier;
  }
  ctx.truth("no-sign-change-reported", no_barrier);
  const double iota = barrier::measure_iota(d);
  std::vector<io::BarrierRow> rows;
  for (double m : mus) rows.push_back(barrier_row(d, m, iota));
  ctx.artifact("barrier.csv", io::barrier_csv(rows).str());
}

void run_superposition(Context& ctx) {
  const int n = integer(ctx, "n");
  const double weight = num(ctx, "weight");
  barrier::LineBarrierSpec ls;
  ls.n = n;
  ls.points = {{Vec::Zero(n - 1), weight, 0.0}};
  std::vector<double> dev;
  for (double l : list(ctx, "levels")) {
    ls.l = static_cast<int>(l);
    double worst = 0;
    for (double dist : list(ctx, "distances")) {
      Vec x = Vec::Zero(n);
      x[0] = dist;
      x[n - 1] = num(ctx, "slab");
      worst = std::max(worst, std::abs(barrier::stieltjes_superpose(ls, 0.0, 1.0, x) - barrier::stieltjes_limit(ls, 0.0, 1.0, x)));
    }
    dev.push_back(worst);
  }
  ctx.op("barrier", "stieltjes_superpose");
  ctx.within("stieltjes-first-order", dev[0] / dev[1], 1.8, 2.2, "deviation ratio under doubling l");

  ctx.op("barrier", "line_barrier");
  Vec x = Vec::Zero(n);
  x[1] = 0.3;
  ctx.near("line-single-point", barrier::line_barrier(ls, x), weight / std::pow(0.3, n - 3.0) + 1.0, 1e-12);
  ctx.near("line-exponent-shift", barrier::line_exponent(7, -1.0), 4.5, 1e-15);
  barrier::LineBarrierSpec empty = ls;
  empty.points.clear();
  ctx.near("line-empty", barrier::line_barrier(empty, x), 1.0, 0.0);

  const double tau = num(ctx, "tube_radius");
  const double mu = std::pow(2.0 * tau, n - 2.0);  // deflection radius 2 tau
  barrier::PointSource s0{Vec::Zero(n), mu, n - 2.0, 1.0};
  barrier::Tube sphere{Vec::Zero(n), Vec(), tau, 0.0};
  barrier::TubeCheck single = barrier::tube_barrier_check(barrier::superpose({s0}), sphere, n);
  barrier::TubeCheck none = barrier::tube_barrier_check(barrier::superpose({}), sphere, n);
  ctx.op("barrier", "tube_barrier_check");
  ctx.above("tube-single", single.margin, 0.0);
  ctx.truth("tube-without-barrier-fails", !none.ok && none.margin < 0.0);

  const int fold = integer(ctx, "fold");
  std::vector<barrier::PointSource> many{s0}, others;
  for (int i = 1; i < fold; ++i) {
    barrier::PointSource s = s0;
    s.center = Vec::Zero(n);
    s.center[(i - 1) % n] = ((i - 1) / n % 2 == 0 ? 1.0 : -1.0) * num(ctx, "spacing");
    many.push_back(s);
    others.push_back(s);
  }
  barrier::TubeCheck multi = barrier::tube_barrier_check(barrier::superpose(many), sphere, n);
  // Bound for the extra terms: (2(n-1)/(n-2)) sup(|grad v| + |grad u1| v) over the tube.
  auto u1 = barrier::superpose({s0});
  auto v = barrier::superpose(others);
  double bound = 0;
  for (int i = 0; i < 64; ++i)
    for (int j = 0; j < 64; ++j) {
      const double th = std::numbers::pi * (i + 0.5) / 64, ph = 2 * std::numbers::pi * j / 64;
      Vec y = Vec::Zero(n);
      y[0] = tau * std::sin(th) * std::cos(ph);
      y[1] = tau * std::sin(th) * std::sin(ph);
      y[2] = tau * std::cos(th);
      barrier::FactorSample a = u1(y), b = v(y);
      bound = std::max(bound, b.grad.norm() + a.grad.norm() * (b.value - 1.0));
    }
  bound *= 2.0 * (n - 1.0) / (n - 2.0);
  ctx.above("tube-superposed", multi.margin, 0.0);
  ctx.at_least("tube-superposed-bound", multi.margin, single.margin - bound);

  barrier::LineBarrierSpec line = ls;
  line.points = {{Vec::Zero(n - 1), std::pow(2.0 * tau, n - 3.0), 0.0}};
  barrier::Tube cyl{Vec::Zero(n), Vec::Unit(n, n - 1), tau, 0.5};
  barrier::TubeCheck lt = barrier::tube_barrier_check(barrier::line_factor(line), cyl, n);
  ctx.above("tube-line", lt.margin, 0.0);
  bool resample = false;
  try {
    barrier::Tube through{Vec::Unit(n, 1) * tau, Vec::Unit(n, n - 1), tau, 0.5};
    barrier::tube_barrier_check(barrier::line_factor(line), through, n, 4);
  } catch (const Error& e) {
    resample = e.code() == ErrorCode::Resample;
  }
  ctx.truth("axis-sample-resample-error", resample);

  io::Csv csv({"level", "deviation"});
  const std::vector<double> levels = list(ctx, "levels");
  for (std::size_t i = 0; i < dev.size(); ++i) csv.add({levels[i], dev[i]});
  ctx.artifact("stieltjes.csv", csv.str());
  std::vector<io::BarrierRow> rows{{mu, 2.0 * tau, std::pow(mu, 1.0 / (n - 2.0)), 0.0, 0.0, single.margin}};
  ctx.artifact("barrier.csv", io::barrier_csv(rows).str());
}

void run_dimshift(Context& ctx) {
  const int n_min = integer(ctx, "n_min"), n_max = integer(ctx, "n_max");
  io::Csv csv({"n", "kappa_n", "kappa_prev", "coefficient_num", "coefficient_den", "margin", "residual"});
  int mismatches = 0;
  double flip = 0;
  for (int n = n_min; n <= n_max; ++n) {
    barrier::DimshiftReport r = barrier::dimshift_scal_sign(n, num(ctx, "a2"), num(ctx, "c"), num(ctx, "lambda"));
    const barrier::Rational expected(1, 4LL * (n - 1) * (n - 2));
    mismatches += r.coefficient != expected || !r.positive;
    // Cancellation error is measured against the size of the individual terms.
    const double scale = (boost::rational_cast<double>(r.kappa_n) + num(ctx, "lambda")) * num(ctx, "a2") * num(ctx, "c");
    flip = std::max(flip, r.residual_flip_error / scale);
    csv.add({double(n), boost::rational_cast<double>(r.kappa_n), boost::rational_cast<double>(r.kappa_prev),
             double(r.coefficient.numerator()), double(r.coefficient.denominator()), r.margin, r.residual});
  }
  ctx.op("barrier", "dimshift_scal_sign");
  ctx.at_most("dimshift-table-mismatches", mismatches, 0.0, "coefficient differs from 1/(4(n-1)(n-2))");
  ctx.at_most("dimshift-residual-flip", flip, 1e-13, "|residual + margin| relative to the term size");
  const barrier::Rational big = barrier::kappa_rational(1000) - barrier::kappa_rational(999);
  ctx.near("dimshift-asymptotic", 1e6 * boost::rational_cast<double>(big), 0.25, 0.0025, "n^2 (kappa_n - kappa_{n-1}) at n = 1000");
  ctx.artifact("dimshift.csv", csv.str());
}

// ------------------------------------------------------------------ covering

void run_covering(Context& ctx) {
  const int instances = integer(ctx, "instances");
  io::Csv csv({"dim", "instance", "balls", "kept", "families_used", "c_bound"});
  int failures = 0, over = 0, max_used = 0;
  std::string first_dump;
  for (double dd : list(ctx, "dims")) {
    const int dim = static_cast<int>(dd);
    const int c_bound = integer(ctx, "c_bound") > 0 ? integer(ctx, "c_bound") : covering::default_c_bound(dim);
    for (int i = 0; i < instances; ++i) {
      covering::InstanceOptions o;
      o.dim = dim;
      o.balls = integer(ctx, "balls");
      o.targets = integer(ctx, "targets");
      o.r_min = num(ctx, "r_min");
      o.r_max = num(ctx, "r_max");
      const std::uint64_t seed = ctx.seed() + 1000003ULL * dim + i;
      covering::BallSet bs = covering::random_instance(o, seed);
      covering::check_coverable(bs);
      try {
        covering::FamilyAssignment fa = covering::assign_families(bs, c_bound);
        failures += !covering::verify_families(bs, fa).pass();
        max_used = std::max(max_used, fa.used);
        const long kept = std::count_if(fa.family.begin(), fa.family.end(), [](int f) { return f > 0; });
        csv.add({double(dim), double(i), double(bs.balls.size()), double(kept), double(fa.used), double(c_bound)});
        if (i == 0 && dim == 2) first_dump = io::balls_json(bs, &fa).dump(1);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::BoundExceeded) throw;
        ++over;
      }
    }
  }
  ctx.op("covering", "assign_families");
  ctx.op("covering", "verify_families");
  ctx.at_most("covering-property-failures", failures, 0.0);
  ctx.at_most("covering-bound-exceeded", over, 0.0);
  ctx.at_least("covering-max-families", max_used, 1.0, "largest family count observed");

  covering::InstanceOptions o;
  o.dim = 2;
  o.balls = integer(ctx, "balls");
  o.targets = integer(ctx, "targets");
  o.r_min = num(ctx, "r_min");
  o.r_max = num(ctx, "r_max");
  auto dump = [&] {
    covering::BallSet bs = covering::random_instance(o, ctx.seed());
    covering::FamilyAssignment fa = covering::assign_families(bs, covering::default_c_bound(2));
    return io::balls_json(bs, &fa).dump();
  };
  ctx.truth("covering-deterministic", dump() == dump());

  // Ring of 13 unit balls about a target, plus a larger ball elsewhere.
  covering::BallSet ring;
  ring.dim = 2;
  ring.targets = {(Vec(2) << 4.0, 0.0).finished()};
  ring.balls.push_back({Vec::Zero(2), 1.6, 0});
  for (int i = 0; i < 13; ++i) {
    const double a = 2.0 * std::numbers::pi * i / 13;
    ring.balls.push_back({(Vec(2) << 4.0 + 1.5 * std::cos(a), 1.5 * std::sin(a)).finished(), 1.0, i + 1});
  }
  ring = covering::perturb_ties(ring, ctx.seed());
  covering::FamilyAssignment rf = covering::assign_families(ring, covering::default_c_bound(2));
  ctx.at_least("ring-families", rf.used, 2.0);
  ctx.truth("ring-verified", covering::verify_families(ring, rf).pass());

  // Recentring recovers the source centres.
  covering::BallSet shifted = ring;
  shifted.sources = ring.balls;
  std::mt19937_64 rng(ctx.seed());
  for (covering::Ball& b : shifted.balls) {
    Vec off(2);
    off << unit(rng) - 0.5, unit(rng) - 0.5;
    b.center += 0.9 * b.radius * off.normalized() * unit(rng);
  }
  covering::BallSet back = covering::center_shift(shifted, rf);
  double moved = 0;
  bool radii = true;
  for (std::size_t i = 0; i < back.balls.size(); ++i) {
    moved = std::max(moved, (back.balls[i].center - ring.balls[i].center).norm());
    radii = radii && back.balls[i].radius == ring.balls[i].radius;
  }
  ctx.op("covering", "center_shift");
  ctx.near("center-shift-recovers", moved, 0.0, 0.0);
  ctx.truth("center-shift-radii", radii);
  ctx.artifact("covering.csv", csv.str());
  if (!first_dump.empty()) ctx.artifact("balls.json", first_dump + "\n");
}

// ------------------------------------------------------------------ bending

double warped_difference(const bending::TubeMetric& tm, const bending::HSample& h) {
  auto [f, f1, f2] = tm.warp(h.value);
  const double m = tm.m, w = 1.0 - h.d1 * h.d1;
  return m * (m - 1.0) * f1 * f1 * w / (f * f) - 2.0 * m * (f2 * (h.d1 * h.d1 - 1.0) + f1 * h.d2) / f;
}

void run_bending(Context& ctx) {
  const int m = integer(ctx, "m");
  const double delta = num(ctx, "delta"), depth = num(ctx, "depth");
  const bending::TubeMetric tm = bending::spherical_tube(m, num(ctx, "rho0"), depth);

  bending::BendProfile probe = bending::build_h(num(ctx, "probe_k"), delta, 1.0);
  ctx.op("bending", "build_h");
  ctx.truth("h-invariants", probe.invariants_hold());
  const bending::HSample edge = probe(delta);
  ctx.near("h-at-delta", edge.value - delta + std::abs(edge.d1 - 1.0) + std::abs(edge.d2), 0.0, 0.0);

  bending::StiffnessSearch ks = bending::search_k(tm, delta, 1.0, num(ctx, "k_cap"));
  ctx.op("bending", "scal_compare");
  ctx.at_least("k-star-min-difference", ks.min_diff, 0.0);
  ctx.at_most("k-star", ks.k_star, num(ctx, "k_cap"));

  const bending::BendProfile bp = bending::build_h(ks.k_star, delta, depth);
  bending::CompareReport cr = bending::scal_compare(tm, bp);
  double oracle = 0;
  for (std::size_t i = 0; i < cr.t.size(); ++i) oracle = std::max(oracle, std::abs(cr.diff[i] - warped_difference(tm, bp(cr.t[i]))));
  ctx.at_most("warped-product-oracle", oracle, 1e-9);
  ctx.near("outside-window-difference", cr.max_abs_outside, 0.0, 0.0);

  const double tg = bending::totally_geodesic_residual(tm, bp, metric::Method::Analytic);
  ctx.at_most("totally-geodesic", tg, 1e-8);

  metric::Chart chart = bending::tube_chart(tm, -depth, depth, 121);
  metric::MetricField bent = bending::bend_metric(tm, bp, chart);
  metric::MetricField base = bending::base_metric(tm, chart);
  ctx.op("bending", "bend_metric");
  bool identical = true;
  const std::size_t nn = static_cast<std::size_t>(tm.dim() * tm.dim());
  for (std::size_t i = 0; i < chart.node_count(); ++i) {
    if (chart.coords(chart.node(i))[0] < delta) continue;
    for (std::size_t c = 0; c < nn; ++c) identical = identical && bent.components()[i * nn + c] == base.components()[i * nn + c];
  }
  ctx.truth("locality-identical", identical);

  const bending::StiffnessEstimate est = bending::stiffness_estimate(tm);
  const bending::BendProfile strong = bending::build_h(est.k, delta, depth);
  json table = json::array();
  double completeness = 0, dominance = -1e300;
  const int nodes = integer(ctx, "bucket_nodes");
  for (int i = 0; i < nodes; ++i) {
    const double t = delta * i / nodes;
    bending::Buckets b = bending::dominant_decomposition(tm, strong, t);
    const double sd = bending::scal_difference(tm, strong, t, metric::Method::Stencil, 1e-3);
    const double err = bending::stencil_error(tm, strong, t, 1e-3);
    completeness = std::max(completeness, std::abs(b.sum - sd) / err);
    dominance = std::max(dominance, std::abs(b.rest()) - std::abs(b.i5_diagonal));
    table.push_back(io::buckets_json(b));
  }
  ctx.op("bending", "dominant_decomposition");
  ctx.at_most("bucket-completeness", completeness, 5.0, "|bucket sum - stencil difference| / stencil error");
  ctx.at_most("bucket-dominance", dominance, 0.0, "max of |I1+..+I4| - |I5 diagonal|");

  // Stiffness against core mean curvature.
  std::vector<std::pair<double, double>> curve;
  for (double rho0 : list(ctx, "rho0_family")) {
    const bending::TubeMetric t = bending::spherical_tube(m, rho0, depth);
    curve.push_back({t.core_trace(), bending::search_k(t, delta, 1.0, num(ctx, "k_cap")).k_star});
  }
  std::sort(curve.begin(), curve.end());
  bool monotone = true;
  for (std::size_t i = 1; i < curve.size(); ++i) monotone = monotone && curve[i].second <= curve[i - 1].second;
  ctx.truth("k-star-monotone-in-trace", monotone);

  const bending::CompareReport weak = bending::scal_compare(tm, bending::build_h(num(ctx, "weak_k"), delta, depth));
  ctx.truth("weak-stiffness-negative", weak.min_diff < 0.0, "min difference " + fmt(weak.min_diff));
  const bending::TubeMetric cyl = bending::cylinder_tube(m, depth);
  ctx.at_most("cylinder-unchanged", std::abs(bending::scal_compare(cyl, bp).min_diff), 1e-12);

  std::vector<io::BendingRow> rows;
  for (double k = 1.0; k <= ks.k_star; k *= 2.0) {
    const bending::BendProfile b = bending::build_h(k, delta, depth);
    const bending::CompareReport r = bending::scal_compare(tm, b);
    rows.push_back({k, r.min_diff, r.argmin, bending::totally_geodesic_residual(tm, b, metric::Method::Analytic)});
  }
  ctx.artifact("bending.csv", io::bending_csv(rows).str());
  ctx.artifact("buckets.json", table.dump(2) + "\n");
}

// ------------------------------------------------------------------ registry

struct Runner {
  std::function<void(Context&)> run;
  json defaults;
  std::function<void(const json&)> validate;
};

void positive(const json& p, const char* key) {
  require(p.at(key).get<double>() > 0.0, ErrorCode::Config, std::string(key) + " must be positive");
}

void cone_params(const json& p) {
  const int a = p.at("p"), b = p.at("q");
  require(a >= 1 && b >= 1, ErrorCode::Config, "p and q must be at least 1");
}

const std::map<std::string, Runner>& registry() {
  static const std::map<std::string, Runner> r = {
      {"metric",
       {run_metric,
        {{"factors", 50}, {"coarse", 16}, {"amplitude", 0.3}, {"wavenumber", 2.0}},
        [](const json& p) {
          require(p.at("factors").get<int>() >= 1, ErrorCode::Config, "factors must be at least 1");
          require(p.at("coarse").get<int>() >= 4, ErrorCode::Config, "coarse grid needs at least 4 cells");
          positive(p, "wavenumber");
        }}},
      {"cone", {run_cone, {{"r_min", 1e-3}, {"r_max", 1.0}}, [](const json& p) {
                  positive(p, "r_min");
                  require(p.at("r_max").get<double>() > p.at("r_min").get<double>(), ErrorCode::Config, "need r_min < r_max");
                }}},
      {"spectral",
       {run_spectral,
        {{"p", 3}, {"q", 3}, {"r_in", 0.5}, {"r_out", 1.0}, {"m_max", 4}, {"eps", {0.2, 0.1, 0.05}}, {"nodes", 2000}, {"tolerance", 1e-3}},
        [](const json& p) {
          cone_params(p);
          positive(p, "r_in");
          require(p.at("r_out").get<double>() > p.at("r_in").get<double>(), ErrorCode::Config, "need r_in < r_out");
          require(p.at("m_max").get<int>() >= 2, ErrorCode::Config, "m_max must be at least 2");
          require(p.at("nodes").get<int>() >= 10, ErrorCode::Config, "nodes must be at least 10");
          require(p.at("eps").size() >= 2, ErrorCode::Config, "need at least two eps values");
        }}},
      {"indicial", {run_indicial, {{"lambda_steps", 8}, {"r_in", 1e-2}}, [](const json& p) {
                      require(p.at("lambda_steps").get<int>() >= 1, ErrorCode::Config, "lambda_steps must be positive");
                      positive(p, "r_in");
                    }}},
      {"perron",
       {run_perron,
        {{"p", 3}, {"q", 3}, {"lambda_fraction", 0.5}, {"r_in", 1e-2}, {"r_out", 1.0}, {"nodes_per_unit", 1000.0}, {"seed_fractions", {0.5, 0.25}}},
        [](const json& p) {
          cone_params(p);
          const double f = p.at("lambda_fraction");
          require(f > 0.0 && f < 1.0, ErrorCode::Config, "lambda_fraction must lie in (0, 1)");
          positive(p, "r_in");
          require(p.at("r_out").get<double>() > p.at("r_in").get<double>(), ErrorCode::Config, "need r_in < r_out");
          require(!p.at("seed_fractions").empty(), ErrorCode::Config, "need at least one seed");
          for (double s : p.at("seed_fractions").get<std::vector<double>>())
            require(s > 0.0 && s < 1.0, ErrorCode::Config, "seed fractions must lie in (0, 1)");
        }}},
      {"crease",
       {run_crease,
        {{"p", 3}, {"q", 3}, {"lambda_fraction", 0.5}, {"r_in", 1e-2}, {"r_out", 1.0}, {"nodes_per_unit", 1000.0},
         {"outer_scale", 0.99}, {"K", {2.0, 5.0, 10.0}}, {"delta_fractions", {0.05, 0.1, 0.2}}, {"cutoff_probe_K", 50.0}},
        [](const json& p) {
          cone_params(p);
          const double s = p.at("outer_scale");
          require(s > 0.0 && s < 1.0, ErrorCode::Config, "outer_scale must lie in (0, 1)");
          for (double k : p.at("K").get<std::vector<double>>()) require(k > 0.0, ErrorCode::Config, "K must be positive");
          for (double f : p.at("delta_fractions").get<std::vector<double>>())
            require(f > 0.0 && f < 0.25, ErrorCode::Config, "delta fractions must lie in (0, 0.25)");
        }}},
      {"green", {run_green, {{"p", 3}, {"q", 3}, {"alpha_scale", 1.0}, {"stencil_h", 1e-2}, {"samples", 9}}, [](const json& p) {
                   cone_params(p);
                   positive(p, "stencil_h");
                   require(p.at("samples").get<int>() >= 2, ErrorCode::Config, "samples must be at least 2");
                 }}},
      {"truncation",
       {run_truncation,
        {{"p", 3}, {"q", 3}, {"alpha_scale", 1.0}, {"mu_min", 1e-4}, {"mu_max", 1e-2}, {"mu_points", 5}, {"mu_h_fractions", {0.1, 0.5, 0.9, 0.99}}},
        [](const json& p) {
          cone_params(p);
          positive(p, "mu_min");
          require(p.at("mu_max").get<double>() > p.at("mu_min").get<double>(), ErrorCode::Config, "need mu_min < mu_max");
          require(p.at("mu_points").get<int>() >= 2, ErrorCode::Config, "mu_points must be at least 2");
        }}},
      {"theta",
       {run_theta, {{"p", 3}, {"q", 3}, {"alpha_scale", 0.0}, {"mu_min", 1e-6}, {"mu_max", 1e-4}, {"mu_points", 5}},
        [](const json& p) {
          cone_params(p);
          positive(p, "mu_min");
          require(p.at("mu_max").get<double>() > p.at("mu_min").get<double>(), ErrorCode::Config, "need mu_min < mu_max");
          require(p.at("mu_points").get<int>() >= 2, ErrorCode::Config, "mu_points must be at least 2");
        }}},
      {"superposition",
       {run_superposition,
        {{"n", 7}, {"weight", 0.5}, {"levels", {64.0, 128.0}}, {"distances", {0.1, 0.2, 0.5, 1.0}}, {"slab", 0.25},
         {"tube_radius", 0.05}, {"fold", 12}, {"spacing", 0.6}},
        [](const json& p) {
          require(p.at("n").get<int>() >= 4, ErrorCode::Config, "n must be at least 4");
          require(p.at("levels").size() == 2, ErrorCode::Config, "levels must hold two discretization levels");
          for (double d : p.at("distances").get<std::vector<double>>())
            require(d >= 0.1, ErrorCode::Config, "distances must stay at least 0.1 from the axis");
          positive(p, "tube_radius");
          require(p.at("fold").get<int>() >= 1, ErrorCode::Config, "fold must be at least 1");
        }}},
      {"dimshift", {run_dimshift, {{"n_min", 5}, {"n_max", 12}, {"a2", 1.0}, {"c", 1.0}, {"lambda", 0.3}}, [](const json& p) {
                      require(p.at("n_min").get<int>() >= 4 && p.at("n_max").get<int>() >= p.at("n_min").get<int>(),
                              ErrorCode::Config, "need 4 <= n_min <= n_max");
                      positive(p, "a2");
                      positive(p, "c");
                    }}},
      {"covering",
       {run_covering,
        {{"instances", 100}, {"dims", {2.0, 3.0}}, {"balls", 1000}, {"targets", 100}, {"r_min", 1e-4}, {"r_max", 1e-2}, {"c_bound", 0}},
        [](const json& p) {
          require(p.at("instances").get<int>() >= 1, ErrorCode::Config, "instances must be positive");
          for (double d : p.at("dims").get<std::vector<double>>())
            require(d == 2.0 || d == 3.0, ErrorCode::Config, "dims must be 2 or 3");
          require(p.at("balls").get<int>() >= p.at("targets").get<int>() && p.at("targets").get<int>() >= 1,
                  ErrorCode::Config, "need at least one ball per target");
          positive(p, "r_min");
          require(p.at("r_max").get<double>() > p.at("r_min").get<double>(), ErrorCode::Config, "need r_min < r_max");
          require(p.at("c_bound").get<int>() >= 0, ErrorCode::Config, "c_bound must be nonnegative");
        }}},
      {"bending",
       {run_bending,
        {{"m", 2}, {"rho0", 1.2}, {"depth", 0.3}, {"delta", 0.1}, {"probe_k", 100.0}, {"k_cap", 1048576.0},
         {"rho0_family", {0.6, 0.8, 1.0, 1.2, 1.4}}, {"weak_k", 0.01}, {"bucket_nodes", 20}},
        [](const json& p) {
          require(p.at("m").get<int>() >= 1, ErrorCode::Config, "m must be positive");
          positive(p, "delta");
          require(p.at("delta").get<double>() < 0.5 * p.at("depth").get<double>(), ErrorCode::Config, "need delta < depth / 2");
          require(p.at("rho0").get<double>() < 0.5 * std::numbers::pi, ErrorCode::Config, "the core must be mean convex");
          for (double r : p.at("rho0_family").get<std::vector<double>>())
            require(r > p.at("depth").get<double>() && r < 0.5 * std::numbers::pi, ErrorCode::Config,
                    "rho0_family entries must lie in (depth, pi/2)");
          require(p.at("bucket_nodes").get<int>() >= 1, ErrorCode::Config, "bucket_nodes must be positive");
        }}},
  };
  return r;
}

}  // namespace

json module_defaults(const std::string& module) {
  auto it = registry().find(module);
  require(it != registry().end(), ErrorCode::Config, "unknown module \"" + module + "\"");
  return it->second.defaults;
}

void validate_parameters(const std::string& module, const json& params) {
  auto it = registry().find(module);
  require(it != registry().end(), ErrorCode::Config, "unknown module \"" + module + "\"");
  try {
    it->second.validate(params);
  } catch (const json::exception& e) {
    fail(ErrorCode::Config, std::string("invalid parameters: ") + e.what());
  }
}

RunReport run_scenario(const Scenario& s) {
  RunReport report;
  report.scenario = s;
  Context ctx(report);
  ctx.op("cli", "run");
  try {
    registry().at(s.module).run(ctx);
  } catch (const Error& e) {
    ctx.fail(s.module + "-error", e.what());
  } catch (const std::exception& e) {
    ctx.fail(s.module + "-error", e.what());
  }
  return report;
}

const std::vector<std::string>& operation_catalog() {
  static const std::vector<std::string> ops = {
      "metric:christoffel",         "metric:scalar_curvature",     "metric:conformal_scal",
      "metric:conformal_deform",    "metric:level_set_shape",      "metric:conformal_shape_shift",
      "cone:make_cone",             "cone:second_form_norm2",      "cone:cone_scal",
      "cone:deformed_metric",       "cone:deformed_distance",      "cone:distortion_bounds",
      "cone:link_diameter",         "spectral:weight",             "spectral:rayleigh",
      "spectral:dirichlet_eigen",   "spectral:lambda0",            "spectral:eigenfunction_below",
      "perron:local_solve",         "perron:is_supersolution",     "perron:lift",
      "perron:perron_minimal",      "perron:indicial_exponent",    "perron:make_cutoff",
      "perron:crease_smooth",       "barrier:green",               "barrier:green_laplacian_residual",
      "barrier:truncate",           "barrier:area_profile",        "barrier:deflection_radius",
      "barrier:line_barrier",       "barrier:stieltjes_superpose", "barrier:tube_barrier_check",
      "barrier:dimshift_scal_sign", "covering:assign_families",    "covering:verify_families",
      "covering:center_shift",      "bending:build_h",             "bending:bend_metric",
      "bending:scal_compare",       "bending:dominant_decomposition", "cli:run",
      "cli:report_table"};
  return ops;
}

}  // namespace conelab::cli
