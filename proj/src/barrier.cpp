#include "conelab/barrier.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "conelab/error.hpp"
#include "conelab/perron.hpp"

namespace conelab::barrier {

using metric::Mat;

double green(int n, double rho) {
  require(rho > 0.0, ErrorCode::Domain, "distance must be positive");
  return std::pow(rho, -(n - 2.0));
}

GreenResidual green_laplacian_residual(const cone::DeformedCone& d, metric::Method method, double h, int samples) {
  require(samples >= 2, ErrorCode::Domain, "need at least two samples");
  require(method != metric::Method::Auto, ErrorCode::Domain, "choose the analytic or the stencil path");
  if (method == metric::Method::Stencil) require(h > 0.0, ErrorCode::Domain, "stencil path needs h > 0");
  const int n = d.base.n;
  metric::AnalyticMetric am = cone::deformed_analytic(d);
  GreenResidual out;
  out.rho = log_grid(0.1, 10.0, static_cast<std::size_t>(samples));
  for (double rho : out.rho) {
    double lap;
    if (method == metric::Method::Analytic) {
      Vec x = Vec::Constant(n, 1.2);
      x[0] = rho;
      metric::ScalarJet f;
      f.value = green(n, rho);
      f.grad = Vec::Zero(n);
      f.hess = Mat::Zero(n, n);
      f.grad[0] = -(n - 2.0) * f.value / rho;
      f.hess(0, 0) = (n - 2.0) * (n - 1.0) * f.value / (rho * rho);
      lap = metric::laplacian_from_jets(am.jet(x), f);
    } else {
      metric::Chart chart = cone::link_chart(d.base, rho, h * rho, h);
      metric::MetricField m = metric::MetricField::sample(chart, am.value);
      metric::ScalarField f = metric::ScalarField::sample(chart, [n](const Vec& x) { return green(n, x[0]); });
      lap = metric::laplacian(m, f, chart.center_node(), metric::Method::Stencil);
    }
    const double res = rho * rho * std::abs(lap) / green(n, rho);
    out.residual.push_back(res);
    if (res >= out.sup) {
      out.sup = res;
      out.argmax = rho;
    }
  }
  return out;
}

std::array<double, 3> shell_cutoff(double x) {
  if (x <= 1.0) return {1.0, 0.0, 0.0};
  if (x >= 2.0) return {0.0, 0.0, 0.0};
  // psi = 1 / (1 + e^E), E = 1/(2-x) - 1/(x-1).
  const double y1 = 2.0 - x, y2 = x - 1.0;
  const double E = 1.0 / y1 - 1.0 / y2;
  const double dE = 1.0 / (y1 * y1) + 1.0 / (y2 * y2);
  const double ddE = 2.0 / (y1 * y1 * y1) - 2.0 / (y2 * y2 * y2);
  const double s = 1.0 / (1.0 + std::exp(E));
  const double w = s * (1.0 - s);
  const double d1 = -w * dE;
  const double d2 = -(1.0 - 2.0 * s) * d1 * dE - w * ddE;
  return {s, d1, d2};
}

RadialJet phi_plus(const BarrierSpec& b, double rho) {
  require(rho > 0.0, ErrorCode::Domain, "distance must be positive");
  const double n = b.deformed.base.n;
  const double g = b.mu * std::pow(rho, 2.0 - n);
  const double g1 = -(n - 2.0) * g / rho;
  const double g2 = (n - 2.0) * (n - 1.0) * g / (rho * rho);
  if (!b.truncated) return {g + 1.0, g1, g2};
  auto [p, p1, p2] = shell_cutoff(rho);
  return {g * p + 1.0, g1 * p + g * p1, g2 * p + 2.0 * g1 * p1 + g * p2};
}

double radial_laplacian(int n, const RadialJet& f, double rho) { return f.d2 + (n - 1.0) * f.d1 / rho; }

TruncationReport truncate(const BarrierSpec& b, std::size_t shell_samples) {
  require(b.mu >= 0.0, ErrorCode::Domain, "mu must be nonnegative");
  require(shell_samples >= 2, ErrorCode::Domain, "need shell samples");
  const int n = b.deformed.base.n;
  TruncationReport out;
  std::vector<double> r = log_grid(1e-3, 10.0, 801), u;
  for (double rho : r) u.push_back(phi_plus(b, rho).value);
  out.profile = RadialProfile(std::move(r), std::move(u), ProfileKind::ConformalFactor);
  const double c = 4.0 * (n - 1.0) / (n - 2.0);
  for (std::size_t i = 0; i < shell_samples; ++i) {
    const double rho = 1.0 + static_cast<double>(i) / static_cast<double>(shell_samples - 1);
    RadialJet f = phi_plus(b, rho);
    const double lap = std::abs(radial_laplacian(n, f, rho));
    if (lap > out.penalty) {
      out.penalty = lap;
      out.penalty_radius = rho;
    }
    out.scal_deficit = std::max(out.scal_deficit, c * lap / f.value);
  }
  return out;
}

double measure_iota(const cone::DeformedCone& d, double rho_min, double rho_max, int samples) {
  metric::AnalyticMetric am = cone::deformed_analytic(d);
  double iota = std::numeric_limits<double>::infinity();
  for (double rho : log_grid(rho_min, rho_max, static_cast<std::size_t>(samples))) {
    Vec x = Vec::Constant(d.base.n, 1.2);
    x[0] = rho;
    iota = std::min(iota, metric::scal_from_jet(am.jet(x)) * rho * rho);
  }
  return iota;
}

namespace {

std::vector<double> condition_samples(double rho_min, double rho_max) {
  std::vector<double> r = log_grid(rho_min, rho_max, 801);
  for (int i = 0; i <= 2000; ++i) {
    const double rho = 1.0 + i / 2000.0;
    if (rho >= rho_min && rho <= rho_max) r.push_back(rho);
  }
  return r;
}

}  // namespace

double scal_condition_margin(const BarrierSpec& b, double iota, double rho_min, double rho_max) {
  const int n = b.deformed.base.n;
  const double c = 4.0 * (n - 1.0) / (n - 2.0);
  double margin = std::numeric_limits<double>::infinity();
  for (double rho : condition_samples(rho_min, rho_max)) {
    RadialJet f = phi_plus(b, rho);
    const double scal = cone::deformed_scal(b.deformed, rho) - c * radial_laplacian(n, f, rho) / f.value;
    margin = std::min(margin, scal * rho * rho - 0.5 * iota);
  }
  return margin;
}

MuBisection bisect_mu(const cone::DeformedCone& d, double iota, double rho_min, double rho_max) {
  require(iota > 0.0, ErrorCode::Domain, "iota must be positive");
  auto ok = [&](double mu) { return scal_condition_margin({d, mu, true}, iota, rho_min, rho_max) >= 0.0; };
  MuBisection out;
  out.iota = iota;
  require(ok(0.0), ErrorCode::Domain, "the undeformed metric already violates the scal condition");
  double lo = 0.0, hi = 1.0;
  while (ok(hi)) {
    lo = hi;
    hi *= 2.0;
    require(hi < 1e12, ErrorCode::ConvergenceFailure, "scal condition holds for every mu tried");
  }
  for (; out.iterations < 200 && hi - lo > 1e-14 * hi; ++out.iterations) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? lo : hi) = mid;
  }
  out.mu_h = lo;
  return out;
}

double area_profile(const BarrierSpec& b, double rho) {
  require(rho > 0.0, ErrorCode::Domain, "distance must be positive");
  const double n = b.deformed.base.n;
  const double s = 1.0 + cone::gamma_of(b.deformed);
  return std::pow(phi_plus(b, rho).value, 2.0 * (n - 1.0) / (n - 2.0)) * std::pow(rho, n - 1.0) *
         cone::link_volume(b.deformed.base) * std::pow(s, n - 1.0);
}

double sphere_trace(const BarrierSpec& b, double rho) {
  const int n = b.deformed.base.n;
  RadialJet f = phi_plus(b, rho);
  Mat form = -(1.0 / rho) * Mat::Identity(n - 1, n - 1);
  Vec grad = Vec::Zero(n), normal = Vec::Zero(n);
  grad[0] = f.d1;
  normal[0] = 1.0;
  return metric::conformal_shape_shift(form, Mat::Identity(n - 1, n - 1), f.value, grad, normal, n).trace();
}

double deflection_radius(const BarrierSpec& b, double rho_min, double rho_max) {
  require(b.mu > 0.0, ErrorCode::Domain, "deflection radius needs mu > 0");
  std::vector<double> r = log_grid(rho_min, rho_max, 4001);
  double prev = sphere_trace(b, r[0]);
  for (std::size_t i = 1; i < r.size(); ++i) {
    const double cur = sphere_trace(b, r[i]);
    if (prev > 0.0 && cur <= 0.0) {
      if (cur == 0.0) return r[i];
      auto f = [&](double rho) { return sphere_trace(b, rho); };
      auto tol = [](double a, double c) { return std::abs(c - a) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(a); };
      std::uintmax_t iters = 200;
      auto [lo, hi] = boost::math::tools::toms748_solve(f, r[i - 1], r[i], prev, cur, tol, iters);
      return 0.5 * (lo + hi);
    }
    prev = cur;
  }
  std::ostringstream os;
  os << "no sign change of the sphere trace on [" << rho_min << ", " << rho_max << "]";
  fail(ErrorCode::NoBarrier, os.str());
}

// ---------------------------------------------------------------- superposition

RadialJet source_jet(const PointSource& s, double d, int n) {
  (void)n;
  const double g = s.weight * std::pow(d, -s.exponent);
  const double g1 = -s.exponent * g / d;
  const double g2 = s.exponent * (s.exponent + 1.0) * g / (d * d);
  if (s.cutoff <= 0.0) return {g, g1, g2};
  auto [p, p1, p2] = shell_cutoff(d / s.cutoff);
  p1 /= s.cutoff;
  p2 /= s.cutoff * s.cutoff;
  return {g * p, g1 * p + g * p1, g2 * p + 2.0 * g1 * p1 + g * p2};
}

ConformalFactor superpose(std::vector<PointSource> sources) {
  return [sources = std::move(sources)](const Vec& x) {
    FactorSample out{1.0, Vec::Zero(x.size())};
    for (const PointSource& s : sources) {
      Vec diff = x - s.center;
      const double d = diff.norm();
      require(d > 1e-12, ErrorCode::SingularPoint, "evaluation at a source point");
      RadialJet j = source_jet(s, d, static_cast<int>(x.size()));
      out.value += j.value;
      out.grad += (j.d1 / d) * diff;
    }
    return out;
  };
}

void validate(const LineBarrierSpec& ls) {
  require(ls.n >= 4, ErrorCode::Domain, "line barriers need n >= 4");
  require(ls.l >= 1, ErrorCode::Domain, "discretization level must be at least 1");
  double total = 0.0;
  for (const LinePoint& p : ls.points) {
    require(p.position.size() == ls.n - 1, ErrorCode::Domain, "axis point must lie in R^{n-1}");
    require(p.weight > 0.0, ErrorCode::Domain, "weights must be positive");
    require(line_exponent(ls.n, p.beta) > 0.0, ErrorCode::Domain, "line exponent must be positive");
    total += p.weight;
  }
  require(total <= ls.weight_cap, ErrorCode::Domain, "total weight exceeds the cap");
}

double line_exponent(int n, double beta) {
  require(n + beta - 2.0 != 0.0, ErrorCode::Domain, "exponent undefined for beta = 2 - n");
  return n - 3.0 - 2.0 * beta / (n + beta - 2.0);
}

double line_constant(double e) {
  require(e > 0.0, ErrorCode::Domain, "line constant needs e > 0");
  return std::sqrt(std::numbers::pi) * std::tgamma(0.5 * e) / std::tgamma(0.5 * (e + 1.0));
}

double line_barrier(const LineBarrierSpec& ls, const Vec& x) { return line_factor(ls)(x).value; }

ConformalFactor line_factor(const LineBarrierSpec& ls) {
  validate(ls);
  return [ls](const Vec& x) {
    require(x.size() == ls.n, ErrorCode::Domain, "point must lie in R^n");
    FactorSample out{1.0, Vec::Zero(ls.n)};
    for (const LinePoint& p : ls.points) {
      Vec diff = x.head(ls.n - 1) - p.position;
      const double d = diff.norm();
      require(d > 1e-12, ErrorCode::SingularPoint, "evaluation on a barrier axis");
      const double e = line_exponent(ls.n, p.beta);
      const double v = p.weight * std::pow(d, -e);
      out.value += v;
      out.grad.head(ls.n - 1) += (-e * v / (d * d)) * diff;
    }
    return out;
  };
}

std::vector<PointSource> stieltjes_sources(const LineBarrierSpec& ls, double t0, double t1) {
  validate(ls);
  require(t1 > t0, ErrorCode::Domain, "segment needs t0 < t1");
  std::vector<PointSource> out;
  const auto k0 = static_cast<long>(std::ceil(t0 * ls.l - 1e-12));
  for (long k = k0; static_cast<double>(k) / ls.l < t1; ++k) {
    const double t = static_cast<double>(k) / ls.l;
    for (const LinePoint& p : ls.points) {
      const double e = line_exponent(ls.n, p.beta);
      PointSource s;
      s.center = Vec(ls.n);
      s.center << p.position, t;
      s.weight = p.weight / (line_constant(e) * ls.l);
      s.exponent = e + 1.0;
      s.cutoff = ls.truncation;
      out.push_back(std::move(s));
    }
  }
  return out;
}

double stieltjes_superpose(const LineBarrierSpec& ls, double t0, double t1, const Vec& x) {
  return superpose(stieltjes_sources(ls, t0, t1))(x).value;
}

double stieltjes_limit(const LineBarrierSpec& ls, double t0, double t1, const Vec& x) {
  validate(ls);
  require(x.size() == ls.n, ErrorCode::Domain, "point must lie in R^n");
  double total = 1.0;
  for (const LinePoint& p : ls.points) {
    const double e = line_exponent(ls.n, p.beta);
    const double d = (x.head(ls.n - 1) - p.position).norm();
    require(d > 1e-12, ErrorCode::SingularPoint, "evaluation on a barrier axis");
    PointSource s{Vec(), p.weight / line_constant(e), e + 1.0, ls.truncation};
    auto integrand = [&](double t) {
      const double dist = std::hypot(d, x[ls.n - 1] - t);
      return source_jet(s, dist, ls.n).value;
    };
    total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, t0, t1, 20, 1e-15);
  }
  return total;
}

TubeCheck tube_barrier_check(const ConformalFactor& u, const Tube& tube, int n, int samples) {
  require(tube.radius > 0.0, ErrorCode::Domain, "tube radius must be positive");
  require(n >= 3 && tube.center.size() == n, ErrorCode::Domain, "tube centre must lie in R^n");
  const bool line = tube.axis.size() > 0;
  Vec e1, e2, e3;
  if (line) {
    require(tube.axis.size() == n && std::abs(tube.axis.norm() - 1.0) < 1e-12, ErrorCode::Domain,
            "tube axis must be a unit vector");
    std::vector<Vec> basis;
    for (int i = 0; i < n && basis.size() < 2; ++i) {
      Vec v = Vec::Unit(n, i);
      v -= v.dot(tube.axis) * tube.axis;
      for (const Vec& b : basis) v -= v.dot(b) * b;
      if (v.norm() > 1e-8) basis.push_back(v.normalized());
    }
    e1 = basis[0];
    e2 = basis[1];
  } else {
    e1 = Vec::Unit(n, 0);
    e2 = Vec::Unit(n, 1);
    e3 = Vec::Unit(n, 2);
  }
  // Principal curvatures of the tube for the outward normal.
  Vec kappa = Vec::Constant(n - 1, -1.0 / tube.radius);
  if (line) kappa[n - 2] = 0.0;
  Mat form = kappa.asDiagonal();
  Mat inner = Mat::Identity(n - 1, n - 1);

  auto run = [&](int s) {
    TubeCheck out;
    out.samples = s * s;
    out.margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < s; ++i) {
      for (int j = 0; j < s; ++j) {
        Vec x, normal;
        if (line) {
          const double t = s > 1 ? -tube.half_length + 2.0 * tube.half_length * i / (s - 1) : 0.0;
          const double phi = 2.0 * std::numbers::pi * j / s;
          normal = std::cos(phi) * e1 + std::sin(phi) * e2;
          x = tube.center + t * tube.axis + tube.radius * normal;
        } else {
          const double theta = std::numbers::pi * (i + 0.5) / s;
          const double phi = 2.0 * std::numbers::pi * j / s;
          normal = std::sin(theta) * std::cos(phi) * e1 + std::sin(theta) * std::sin(phi) * e2 + std::cos(theta) * e3;
          x = tube.center + tube.radius * normal;
        }
        FactorSample f;
        try {
          f = u(x);
        } catch (const Error& err) {
          if (err.code() == ErrorCode::SingularPoint)
            fail(ErrorCode::Resample, "tube sample hits a singular axis");
          throw;
        }
        const double trace = metric::conformal_shape_shift(form, inner, f.value, f.grad, normal, n).trace();
        if (trace < out.margin) {
          out.margin = trace;
          out.argmin = x;
        }
      }
    }
    out.ok = out.margin > 0.0;
    return out;
  };
  TubeCheck out = run(samples);
  if (!out.ok) {
    out = run(2 * samples);
    out.refined = true;
  }
  return out;
}

// ---------------------------------------------------------------- dimension shift

Rational kappa_rational(int n) {
  require(n >= 3, ErrorCode::Domain, "kappa needs n >= 3");
  return Rational(n - 2, 4LL * (n - 1));
}

DimshiftReport dimshift_scal_sign(int n, double a2, double c_mode, double lambda) {
  require(n >= 4, ErrorCode::Domain, "dimension shift needs n >= 4");
  require(a2 > 0.0 && c_mode > 0.0, ErrorCode::Domain, "weight and link mode must be positive");
  DimshiftReport out;
  out.n = n;
  out.kappa_n = kappa_rational(n);
  out.kappa_prev = kappa_rational(n - 1);
  out.coefficient = out.kappa_n - out.kappa_prev;
  const double coeff = boost::rational_cast<double>(out.coefficient);
  out.margin = coeff * a2 * c_mode;
  const double kn = boost::rational_cast<double>(out.kappa_n);
  const double kp = boost::rational_cast<double>(out.kappa_prev);
  const double alpha = perron::radial_power_roots(n, (kn + lambda) * a2).alpha;
  out.residual = (alpha * alpha + (n - 2.0) * alpha) * c_mode + (kp + lambda) * a2 * c_mode;
  out.residual_flip_error = std::abs(out.residual + out.margin);
  out.positive = out.coefficient > 0;
  return out;
}

}  // namespace conelab::barrier
