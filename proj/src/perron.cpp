#include "conelab/perron.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "conelab/error.hpp"
#include "conelab/tridiag.hpp"

namespace conelab::perron {

IndicialRoots radial_power_roots(int n, double c) {
  const double half = 0.5 * (n - 2.0);
  const double disc = half * half - c;
  if (disc < 0.0) {
    std::ostringstream os;
    os << "complex indicial roots: discriminant " << disc << " < 0 (coefficient " << c
       << " exceeds " << half * half << ")";
    fail(ErrorCode::ComplexIndicial, os.str());
  }
  const double root = std::sqrt(disc);
  return {-half + root, -half - root, disc};
}

IndicialRoots indicial_exponent(const cone::ConeSpec& c, double lambda) {
  const double k = cone::kappa(c.n) + lambda;
  require(k > 0.0, ErrorCode::Domain, "kappa + lambda must be positive");
  try {
    return radial_power_roots(c.n, k * (c.p + c.q));
  } catch (const Error&) {
    std::ostringstream os;
    os << "complex indicial roots for lambda " << lambda << "; real roots need lambda <= "
       << lambda_threshold(c);
    fail(ErrorCode::ComplexIndicial, os.str());
  }
}

double lambda_threshold(const cone::ConeSpec& c) {
  const double half = 0.5 * (c.n - 2.0);
  return half * half / (c.p + c.q) - cone::kappa(c.n);
}

void validate(const PerronProblem& pp) {
  require(pp.r_in > 0.0 && pp.r_out > pp.r_in, ErrorCode::Domain, "annulus needs 0 < r_in < r_out");
  require(pp.boundary_value > 0.0, ErrorCode::Domain, "boundary value must be positive");
  require(pp.truncation_depth > 0.0 && pp.truncation_depth < 1.0, ErrorCode::Domain,
          "truncation depth must lie in (0, 1)");
  require(pp.nodes_per_unit >= 10.0, ErrorCode::Domain, "grid density too low");
  // Exact cones have scal < 0 everywhere, so no positive part needs absorbing.
  require(cone::cone_scal(pp.cone, 1.0) <= 0.0, ErrorCode::Domain, "expected scal <= 0 on the cone");
}

double potential(const PerronProblem& pp) {
  return (pp.lambda + cone::kappa(pp.cone.n)) * (pp.cone.p + pp.cone.q);
}

std::vector<double> grid(const PerronProblem& pp) {
  validate(pp);
  const double width = std::log(pp.r_out / pp.r_in);
  const auto cells = static_cast<long>(std::ceil(width * pp.nodes_per_unit));
  const double ds = width / static_cast<double>(cells);
  long inner = 0;
  if (pp.inner == InnerEnd::Truncated)
    inner = std::lround(std::log(1.0 / pp.truncation_depth) / ds);
  std::vector<double> r(static_cast<std::size_t>(inner + cells + 1));
  const double s_in = std::log(pp.r_in);
  for (long i = 0; i < static_cast<long>(r.size()); ++i)
    r[static_cast<std::size_t>(i)] = std::exp(s_in + static_cast<double>(i - inner) * ds);
  r[static_cast<std::size_t>(inner)] = pp.r_in;
  r.back() = pp.r_out;
  return r;
}

namespace {

double log_spacing(const std::vector<double>& r) {
  require(r.size() >= 3, ErrorCode::Domain, "need at least three radii");
  const double ds = std::log(r.back() / r.front()) / static_cast<double>(r.size() - 1);
  for (std::size_t i = 1; i < r.size(); ++i)
    require(std::abs(std::log(r[i] / r[i - 1]) - ds) <= 1e-8 * ds, ErrorCode::Domain,
            "radii must be log-uniform");
  return ds;
}

// Three-term recurrence e^{-h} u_{i-1} - 2C u_i + e^{h} u_{i+1} = 0 with
// h = (n-2) ds / 2, exact for every solution of u_ss + (n-2) u_s + c u = 0.
struct Scheme {
  double lower, diag, upper;
};

Scheme make_scheme(int n, double c, double ds) {
  const double half = 0.5 * (n - 2.0);
  const double disc = half * half - c;
  double cc;
  if (disc > 0.0) cc = std::cosh(std::sqrt(disc) * ds);
  else if (disc < 0.0) cc = std::cos(std::sqrt(-disc) * ds);
  else cc = 1.0;
  return {std::exp(-half * ds), -2.0 * cc, std::exp(half * ds)};
}

std::vector<double> solve_interior(const Scheme& sc, std::size_t count, double ua, double ub) {
  const std::size_t m = count - 2;
  std::vector<double> lo(m, sc.lower), di(m, sc.diag), up(m, sc.upper), rhs(m, 0.0);
  rhs.front() -= sc.lower * ua;
  rhs.back() -= sc.upper * ub;
  std::vector<double> x = tridiag::solve(lo, di, up, std::move(rhs));
  std::vector<double> u(count);
  u.front() = ua;
  u.back() = ub;
  std::copy(x.begin(), x.end(), u.begin() + 1);
  return u;
}

double ratio_unit_annulus(int n, double c, double ratio) {
  if (c <= 0.0) return std::numeric_limits<double>::infinity();
  // -(P u_s)_s = μ e^{ns} u on [0, ln ratio], symmetrized by the mass e^{ns}.
  auto mu1 = [&](int nodes) {
    const double L = std::log(ratio);
    const double ds = L / (nodes + 1);
    const double ch = 2.0 * std::cosh(0.5 * (n - 2.0) * ds) / (ds * ds);
    std::vector<double> d(nodes), e(nodes - 1);
    for (int i = 0; i < nodes; ++i) {
      const double s = ds * (i + 1);
      d[i] = std::exp(-2.0 * s) * ch;
      if (i + 1 < nodes) e[i] = -std::exp(-2.0 * (s + 0.5 * ds)) / (ds * ds);
    }
    return tridiag::lowest(d, e).value;
  };
  const double coarse = mu1(200), fine = mu1(401);
  return (4.0 * fine - coarse) / 3.0 / c;
}

std::size_t window_nodes(double log_width, double ds) {
  return std::max<std::size_t>(2, static_cast<std::size_t>(std::lround(log_width / ds)));
}

}  // namespace

double admissibility_ratio(const PerronProblem& pp, double a, double b) {
  require(a > 0.0 && b > a, ErrorCode::Domain, "sub-annulus needs 0 < a < b");
  return ratio_unit_annulus(pp.cone.n, potential(pp), b / a);
}

RadialProfile local_solve(const PerronProblem& pp, const std::vector<double>& r, double ua, double ub) {
  const double ds = log_spacing(r);
  const double ratio = admissibility_ratio(pp, r.front(), r.back());
  if (ratio <= kAdmissibility) {
    std::ostringstream os;
    os << "sub-annulus [" << r.front() << ", " << r.back() << "] too large: eigenvalue ratio " << ratio
       << " <= " << kAdmissibility;
    fail(ErrorCode::BallTooLarge, os.str());
  }
  Scheme sc = make_scheme(pp.cone.n, potential(pp), ds);
  return RadialProfile(r, solve_interior(sc, r.size(), ua, ub));
}

SupersolutionReport is_supersolution(const PerronProblem& pp, const RadialProfile& f) {
  SupersolutionReport rep;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f.u(i) <= 0.0) {
      rep.ok = false;
      rep.witness = Witness{f.r(i), f.r(i), f.r(i), -f.u(i)};
      return rep;
    }
  }
  const double ds = log_spacing(f.r());
  const std::size_t last = f.size() - 1;
  Scheme sc = make_scheme(pp.cone.n, potential(pp), ds);
  for (int j = 0; j <= 3; ++j) {
    const std::size_t w = std::min(window_nodes(std::numbers::ln2 * std::ldexp(1.0, -j), ds), last);
    if (admissibility_ratio(pp, f.r(0), f.r(0) * std::exp(ds * w)) <= kAdmissibility) continue;
    const std::size_t step = std::max<std::size_t>(1, w / 2);
    std::vector<std::size_t> starts;
    for (std::size_t s = 0; s + w <= last; s += step) starts.push_back(s);
    if (starts.empty() || starts.back() + w != last) starts.push_back(last - w);
    for (std::size_t s : starts) {
      std::vector<double> u = solve_interior(sc, w + 1, f.u(s), f.u(s + w));
      ++rep.checked;
      for (std::size_t k = 1; k < w; ++k) {
        const double excess = u[k] - f.u(s + k);
        if (excess > 1e-7 * std::abs(f.u(s + k))) {
          rep.ok = false;
          rep.witness = Witness{f.r(s), f.r(s + w), f.r(s + k), excess};
          return rep;
        }
      }
    }
  }
  return rep;
}

RadialProfile lift(const PerronProblem& pp, const RadialProfile& f, std::size_t first, std::size_t last) {
  require(first < last && last < f.size() && last - first >= 2, ErrorCode::Domain, "bad sub-annulus");
  std::vector<double> sub(f.r().begin() + first, f.r().begin() + last + 1);
  RadialProfile local = local_solve(pp, sub, f.u(first), f.u(last));
  std::vector<double> u = f.u();
  for (std::size_t k = 0; k < local.size(); ++k) u[first + k] = local.u(k);
  return RadialProfile(f.r(), std::move(u), f.kind());
}

double operator_residual(const PerronProblem& pp, const RadialProfile& u) {
  const double ds = log_spacing(u.r());
  Scheme sc = make_scheme(pp.cone.n, potential(pp), ds);
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < u.size(); ++i) {
    const double res = sc.lower * u.u(i - 1) + sc.diag * u.u(i) + sc.upper * u.u(i + 1);
    worst = std::max(worst, std::abs(res) / (std::abs(sc.diag) * std::abs(u.u(i))));
  }
  return worst;
}

RadialProfile seed_supersolution(const PerronProblem& pp, double lambda_prime) {
  require(lambda_prime > pp.lambda, ErrorCode::Domain, "seed eigenvalue must exceed the problem's");
  const double alpha = indicial_exponent(pp.cone, lambda_prime).alpha;
  std::vector<double> r = grid(pp), u(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) u[i] = pp.boundary_value * std::pow(r[i] / pp.r_out, alpha);
  return RadialProfile(std::move(r), std::move(u), ProfileKind::ConformalFactor);
}

PerronResult perron_minimal(const PerronProblem& pp, const std::vector<RadialProfile>& seeds,
                            const PerronOptions& options) {
  require(!seeds.empty(), ErrorCode::Domain, "perron_minimal needs at least one supersolution");
  const std::vector<double> r = grid(pp);
  const double b = pp.boundary_value;
  std::vector<double> w(r.size(), std::numeric_limits<double>::infinity());
  for (const RadialProfile& s : seeds) {
    require(s.size() == r.size(), ErrorCode::Domain, "seed not on the problem grid");
    for (std::size_t i = 0; i < r.size(); ++i) {
      require(std::abs(s.r(i) / r[i] - 1.0) <= 1e-12, ErrorCode::Domain, "seed not on the problem grid");
      require(s.u(i) > 0.0, ErrorCode::Domain, "seeds must be positive");
      w[i] = std::min(w[i], s.u(i));
    }
    require(s.u(r.size() - 1) >= b * (1.0 - 1e-12), ErrorCode::Domain,
            "seed below the boundary value at r_out");
  }
  w.back() = b;
  if (pp.inner == InnerEnd::Truncated) w.front() = 0.0;

  const double ds = log_spacing(r);
  const double c = potential(pp);
  Scheme sc = make_scheme(pp.cone.n, c, ds);
  const std::size_t last = r.size() - 1;
  double width = std::numbers::ln2;
  while (ratio_unit_annulus(pp.cone.n, c, std::exp(width)) <= kAdmissibility) width *= 0.5;
  const std::size_t span = std::min(window_nodes(width, ds), last);
  const std::size_t step = std::max<std::size_t>(1, span / 2);
  std::vector<std::size_t> starts;
  for (std::size_t s = 0; s + span <= last; s += step) starts.push_back(s);
  if (starts.back() + span != last) starts.push_back(last - span);

  PerronResult out;
  auto residual_of = [&](const std::vector<double>& u) {
    double worst = 0.0;
    for (std::size_t i = 1; i < last; ++i) {
      const double res = sc.lower * u[i - 1] + sc.diag * u[i] + sc.upper * u[i + 1];
      worst = std::max(worst, std::abs(res) / (std::abs(sc.diag) * std::abs(u[i])));
    }
    return worst;
  };
  out.residual = residual_of(w);
  if (out.residual >= 1e-10) {
    for (;;) {
      double decrement = 0.0;
      for (std::size_t s : starts) {
        std::vector<double> local = solve_interior(sc, span + 1, w[s], w[s + span]);
        for (std::size_t k = 1; k < span; ++k) {
          const double next = std::min(w[s + k], local[k]);
          decrement = std::max(decrement, w[s + k] - next);
          w[s + k] = next;
        }
      }
      ++out.iterations;
      out.decrement = decrement;
      if (decrement < options.decrement_tolerance * b) {
        out.residual = residual_of(w);
        if (out.residual < options.residual_tolerance) break;
      }
      if (out.iterations >= options.max_sweeps) {
        std::ostringstream os;
        os << "no convergence after " << out.iterations << " sweeps (decrement " << decrement << ")";
        fail(ErrorCode::IterationLimit, os.str());
      }
    }
  }

  const std::size_t first = pp.inner == InnerEnd::Truncated
                                ? static_cast<std::size_t>(std::lower_bound(r.begin(), r.end(), pp.r_in) - r.begin())
                                : 0;
  RadialProfile full(r, w, ProfileKind::ConformalFactor);
  out.w = full.slice(first, last);
  out.alpha = indicial_exponent(pp.cone, pp.lambda).alpha;
  out.c = b * std::pow(pp.r_out, -out.alpha);
  for (std::size_t i = 0; i < out.w.size(); ++i)
    out.closed_form_error = std::max(out.closed_form_error, std::abs(out.w.u(i) - out.c * std::pow(out.w.r(i), out.alpha)));
  for (const RadialProfile& s : seeds) {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = first; i <= last; ++i) worst = std::max(worst, w[i] - s.u(i));
    out.minimality.push_back(worst);
  }
  return out;
}

RadialProfile continue_solution(const PerronProblem& pp, const RadialProfile& w, const std::vector<double>& r) {
  require(w.size() >= 2, ErrorCode::Domain, "need two samples to continue a solution");
  const std::size_t k = w.size() - 1;
  const double r1 = w.r(k), u1 = w.u(k), u0 = w.u(k - 1);
  const double x0 = std::log(w.r(k - 1) / r1);
  const double half = 0.5 * (pp.cone.n - 2.0);
  const double disc = half * half - potential(pp);
  // u = e^{-half x} (A f(x) + B g(x)) in x = ln(r / r1), f(0) = 1, g(0) = 0.
  auto basis = [&](double x) -> std::pair<double, double> {
    if (disc > 0.0) {
      const double q = std::sqrt(disc);
      return {std::cosh(q * x), std::sinh(q * x)};
    }
    if (disc < 0.0) {
      const double q = std::sqrt(-disc);
      return {std::cos(q * x), std::sin(q * x)};
    }
    return {1.0, x};
  };
  const double A = u1;
  auto [f0, g0] = basis(x0);
  require(g0 != 0.0, ErrorCode::Domain, "degenerate continuation");
  const double B = (u0 * std::exp(half * x0) - A * f0) / g0;
  std::vector<double> u(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double x = std::log(r[i] / r1);
    auto [f, g] = basis(x);
    u[i] = std::exp(-half * x) * (A * f + B * g);
  }
  return RadialProfile(r, std::move(u), w.kind());
}

// ---------------------------------------------------------------- cutoff

double CutoffSpec::value(double t) const {
  if (t >= 1.0) return 0.0;
  return std::exp(-A * t / (1.0 - t));
}

double CutoffSpec::d1(double t) const {
  if (t >= 1.0) return 0.0;
  const double y = 1.0 / (1.0 - t);
  return -A * y * y * value(t);
}

double CutoffSpec::d2(double t) const {
  if (t >= 1.0) return 0.0;
  const double y = 1.0 / (1.0 - t);
  const double p1 = A * y * y, p2 = 2.0 * A * y * y * y;
  return (p1 * p1 - p2) * value(t);
}

CutoffSpec make_cutoff(double K, double delta, int samples) {
  require(K > 0.0 && delta > 0.0, ErrorCode::Domain, "cutoff needs K > 0 and delta > 0");
  require(samples >= 100, ErrorCode::Domain, "cutoff needs at least 100 samples");
  CutoffSpec c;
  c.K = K;
  c.delta = delta;
  // On (-1, 1): chi''/chi = A^2 y^4 - 2 A y^3 and chi''/|chi'| = A y^2 - 2 y with
  // y = 1/(1-t) >= 1/2; both are increasing in y once A > 3.
  c.A = 1.05 * std::max(4.0 * K + 4.0, 2.0 + 2.0 * std::sqrt(1.0 + 4.0 * K));
  const double spacing = 2.0 / samples;
  if (spacing * 8.0 > 1.0 / c.A) {
    std::ostringstream os;
    os << "cutoff decay scale 1/" << c.A << " unresolved by " << samples << " samples";
    fail(ErrorCode::Resolution, os.str());
  }
  c.margin_k_chi = c.margin_k_dchi = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    const double t = -1.0 + spacing * (i + 0.5);
    const double y = 1.0 / (1.0 - t);
    const double p1 = c.A * y * y, p2 = 2.0 * c.A * y * y * y;
    c.t.push_back(t);
    c.chi.push_back(c.value(t));
    c.dchi.push_back(c.d1(t));
    c.ddchi.push_back(c.d2(t));
    c.margin_k_chi = std::min(c.margin_k_chi, p1 * p1 - p2 - K);
    c.margin_k_dchi = std::min(c.margin_k_dchi, (p1 * p1 - p2 - K * p1) / p1);
  }
  return c;
}

// ---------------------------------------------------------------- crease

double find_crossing(const RadialProfile& f1, const RadialProfile& f2) {
  require(f1.size() == f2.size(), ErrorCode::Domain, "profiles on different grids");
  // Zeros of f1 - f2 count only where the sign actually changes.
  std::size_t last = f1.size();
  for (std::size_t i = 0; i < f1.size(); ++i) {
    const double d = f1.u(i) - f2.u(i);
    if (d == 0.0) continue;
    if (last < f1.size()) {
      const double d0 = f1.u(last) - f2.u(last);
      if ((d0 > 0.0) != (d > 0.0)) {
        if (i > last + 1) return f1.r(last + 1);
        const double t = d0 / (d0 - d);
        return f1.r(last) * std::exp(t * std::log(f1.r(i) / f1.r(last)));
      }
    }
    last = i;
  }
  fail(ErrorCode::NoCrease, "profiles do not cross");
}

std::vector<double> conformal_margin(const cone::ConeSpec& c, const RadialProfile& f) {
  const double ds = log_spacing(f.r());
  const double n = c.n;
  const double k = cone::kappa(c.n) * (c.p + c.q);
  std::vector<double> m;
  m.reserve(f.size() - 2);
  for (std::size_t i = 1; i + 1 < f.size(); ++i) {
    const double fs = (f.u(i + 1) - f.u(i - 1)) / (2.0 * ds);
    const double fss = (f.u(i + 1) - 2.0 * f.u(i) + f.u(i - 1)) / (ds * ds);
    m.push_back((-(fss + (n - 2.0) * fs) - k * f.u(i)) / f.u(i));
  }
  return m;
}

namespace {

double smoothstep5(double x) {
  if (x <= -1.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double t = 0.5 * (x + 1.0);
  return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

// d/dr at radius rc from central differences at the two bracketing nodes.
double radial_derivative(const RadialProfile& f, double rc) {
  const std::size_t i = f.locate(rc);
  require(i >= 1 && i + 2 < f.size(), ErrorCode::Domain, "crossing too close to the grid end");
  auto d = [&](std::size_t j) { return (f.u(j + 1) - f.u(j - 1)) / (f.r(j + 1) - f.r(j - 1)); };
  const double t = std::log(rc / f.r(i)) / std::log(f.r(i + 1) / f.r(i));
  return (1.0 - t) * d(i) + t * d(i + 1);
}

}  // namespace

CreaseResult crease_smooth(const cone::ConeSpec& c, const RadialProfile& f1, const RadialProfile& f2,
                           double crossing, double eta, double K, const CreaseOptions& options) {
  require(f1.size() == f2.size(), ErrorCode::Domain, "profiles on different grids");
  for (std::size_t i = 0; i < f1.size(); ++i)
    require(std::abs(f1.r(i) / f2.r(i) - 1.0) <= 1e-12, ErrorCode::Domain, "profiles on different grids");
  const double ds = log_spacing(f1.r());
  require(eta > 0.0 && K > 0.0, ErrorCode::Parameter, "crease smoothing needs eta > 0 and K > 0");
  const double v1 = f1(crossing), v2 = f2(crossing);
  require(std::abs(v1 - v2) <= 1e-8 * std::abs(v1), ErrorCode::Domain, "profiles do not meet at the crossing");

  CreaseResult out;
  // x1 = r_c - r grows into the region where f2 is the smaller profile.
  out.gap = -(radial_derivative(f1, crossing) - radial_derivative(f2, crossing));
  if (!(out.gap > 1e-9 * std::abs(v1) / crossing)) {
    std::ostringstream os;
    os << "no crease: derivative gap " << out.gap << " is not positive";
    fail(ErrorCode::NoCrease, os.str());
  }
  CutoffSpec chi = make_cutoff(K, 1.0);
  out.A = chi.A;
  out.eta = eta;
  out.delta = 2.0 * chi.A * eta / out.gap;
  chi.delta = out.delta;
  out.merge_width = options.merge_fraction * out.delta / chi.A;
  const double cells = out.merge_width / (crossing * ds);
  if (cells < options.min_cells) {
    std::ostringstream os;
    os << "merge width " << out.merge_width << " spans only " << cells << " cells";
    fail(ErrorCode::Resolution, os.str());
  }
  require(crossing - out.delta - out.merge_width > f1.front() && crossing + out.delta + out.merge_width < f1.back(),
          ErrorCode::Domain, "smoothing window leaves the grid");

  const double delta = out.delta, w = out.merge_width;
  std::vector<double> u(f1.size());
  for (std::size_t i = 0; i < f1.size(); ++i) {
    const double x1 = crossing - f1.r(i);
    const double F2 = f2.u(i) - eta * chi.value(x1 / delta);
    const double F1 = f1.u(i) - eta * chi.value(-x1 / delta);
    if (x1 >= w) u[i] = x1 >= delta ? f2.u(i) : F2;
    else if (x1 <= -w) u[i] = x1 <= -delta ? f1.u(i) : F1;
    else u[i] = F1 + smoothstep5(x1 / w) * (F2 - F1);
  }
  out.smoothed = RadialProfile(f1.r(), std::move(u), ProfileKind::ConformalFactor);
  require(out.smoothed.min_value() > 0.0, ErrorCode::Parameter, "smoothed profile is not positive; try a smaller eta");
  std::vector<double> m = conformal_margin(c, out.smoothed);
  auto it = std::min_element(m.begin(), m.end());
  out.margin = *it;
  out.margin_radius = f1.r(static_cast<std::size_t>(it - m.begin()) + 1);
  if (!(out.margin > 0.0)) {
    std::ostringstream os;
    os << "operator inequality fails after blending (margin " << out.margin << " at r = " << out.margin_radius
       << "); try a larger K or a smaller eta";
    fail(ErrorCode::Parameter, os.str());
  }
  return out;
}

}  // namespace conelab::perron
