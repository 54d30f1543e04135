#include "conelab/spectral.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "conelab/error.hpp"
#include "conelab/perron.hpp"
#include "conelab/tridiag.hpp"

namespace conelab::spectral {

WeightedProblem make_problem(const cone::ConeSpec& c, double eps, double r_in, double r_out) {
  require(eps >= 0.0, ErrorCode::Domain, "eps must be nonnegative");
  require(r_in > 0.0 && r_out > r_in, ErrorCode::Domain, "annulus needs 0 < r_in < r_out");
  return {c, cone::kappa(c.n), eps, r_in, r_out};
}

double weight(const cone::ConeSpec& c, double eps, double r) {
  require(r > 0.0, ErrorCode::Domain, "radius must be positive");
  return eps * eps / (r * r) + cone::second_form_norm2(c, r);
}

double rayleigh(const cone::ConeSpec& c, const RadialProfile& f, double eps) {
  const double n = c.n;
  const double scale = std::max(std::abs(f.max_value()), std::abs(f.min_value()));
  require(scale > 0.0, ErrorCode::DegenerateTestFunction, "test function vanishes identically");
  require(std::abs(f.u(0)) <= 1e-14 * scale && std::abs(f.u(f.size() - 1)) <= 1e-14 * scale,
          ErrorCode::Domain, "test function must vanish at both ends");
  double gradient = 0.0, mass = 0.0;
  for (std::size_t i = 0; i + 1 < f.size(); ++i) {
    const double r0 = f.r(i), r1 = f.r(i + 1), u0 = f.u(i), u1 = f.u(i + 1);
    const double slope = (u1 - u0) / (r1 - r0);
    gradient += slope * slope * (std::pow(r1, n) - std::pow(r0, n)) / n;
    auto integrand = [&](double r) {
      const double u = u0 + slope * (r - r0);
      return u * u * std::pow(r, n - 3.0);
    };
    mass += boost::math::quadrature::gauss<double, 10>::integrate(integrand, r0, r1);
  }
  // scal r^2 = -(p+q) and weight r^2 = eps^2 + (p+q) on catalog cones.
  const double pq = c.p + c.q;
  const double denominator = (eps * eps + pq) * mass;
  require(denominator > 0.0, ErrorCode::DegenerateTestFunction, "zero Rayleigh denominator");
  return (gradient - cone::kappa(c.n) * pq * mass) / denominator;
}

std::pair<double, double> exhaustion_annulus(const WeightedProblem& w, int m) {
  require(m >= 1, ErrorCode::Domain, "exhaustion index starts at 1");
  return {w.r_in * std::pow(4.0, -(m - 1)), w.r_out};
}

namespace {

struct Discrete {
  double lambda;
  std::vector<double> v;  // symmetrized eigenvector, interior nodes
  double s0;
  double ds;
};

// -(P u_s)_s - κ(n-1) P u = λ ω P u with P = e^{(n-2)s}, symmetrized by v = P^{1/2} u.
Discrete solve_grid(const WeightedProblem& w, double s0, double s1, int nodes) {
  const double n = w.cone.n;
  const double pq = w.cone.p + w.cone.q;
  const double omega = w.eps * w.eps + pq;
  const double ds = (s1 - s0) / (nodes + 1);
  const double off = -1.0 / (omega * ds * ds);
  const double diag = (2.0 * std::cosh(0.5 * (n - 2.0) * ds) / (ds * ds) - w.kappa * pq) / omega;
  std::vector<double> d(nodes, diag), e(nodes - 1, off);
  auto pair = tridiag::lowest(d, e);
  return {pair.value, std::move(pair.vector), s0, ds};
}

}  // namespace

EigenResult dirichlet_eigen(const WeightedProblem& w, int m, const SolverOptions& options) {
  require(options.nodes >= 10, ErrorCode::Domain, "eigen solver needs at least 10 nodes");
  auto [a, b] = exhaustion_annulus(w, m);
  const double s0 = std::log(a), s1 = std::log(b);
  Discrete coarse = solve_grid(w, s0, s1, options.nodes);
  Discrete fine = options.richardson ? solve_grid(w, s0, s1, 2 * options.nodes + 1) : coarse;

  EigenResult out;
  out.m = m;
  out.r_in = a;
  out.r_out = b;
  out.lambda_coarse = coarse.lambda;
  out.lambda_fine = fine.lambda;
  out.lambda = options.richardson ? (4.0 * fine.lambda - coarse.lambda) / 3.0 : coarse.lambda;

  const double n = w.cone.n;
  const std::size_t count = fine.v.size() + 2;
  std::vector<double> r(count), v(count, 0.0);
  for (std::size_t i = 0; i < count; ++i) r[i] = std::exp(s0 + fine.ds * static_cast<double>(i));
  r.front() = a;
  r.back() = b;
  double sum = 0.0;
  for (std::size_t i = 0; i < fine.v.size(); ++i) {
    v[i + 1] = fine.v[i];
    sum += fine.v[i];
  }
  const double sign = sum < 0.0 ? -1.0 : 1.0;
  for (double& x : v) x *= sign;

  // Reference band B0 = [r_out/2, r_out]: ∫ weight u^2 r^{n-1} dr = ω ∫ v^2 ds.
  const double omega = w.eps * w.eps + w.cone.p + w.cone.q;
  const double band = std::log(0.5 * w.r_out);
  double norm = 0.0;
  for (std::size_t i = 0; i + 1 < count; ++i) {
    double sa = s0 + fine.ds * i, sb = sa + fine.ds;
    if (sb <= band) continue;
    double va = v[i], vb = v[i + 1];
    if (sa < band) {
      const double t = (band - sa) / fine.ds;
      va = (1.0 - t) * va + t * vb;
      sa = band;
    }
    norm += 0.5 * (sb - sa) * (va * va + vb * vb);
  }
  norm = std::sqrt(omega * norm);
  require(norm > 0.0, ErrorCode::Solver, "eigenfunction vanishes on the reference band");
  std::vector<double> u(count);
  for (std::size_t i = 0; i < count; ++i) u[i] = v[i] * std::exp(-0.5 * (n - 2.0) * std::log(r[i])) / norm;
  u.front() = 0.0;
  u.back() = 0.0;
  out.profile = RadialProfile(std::move(r), std::move(u), ProfileKind::Eigenfunction);

  if (options.shooting_check) out.lambda_shooting = shooting_eigen(w.cone, w.eps, a, b, options.shooting_steps);
  return out;
}

double shooting_eigen(const cone::ConeSpec& c, double eps, double a, double b, int steps) {
  require(a > 0.0 && b > a, ErrorCode::Domain, "shooting needs 0 < a < b");
  require(steps >= 100, ErrorCode::Domain, "shooting needs at least 100 steps");
  const double n = c.n;
  const double pq = c.p + c.q;
  const double omega = eps * eps + pq;
  const double kap = cone::kappa(c.n);
  const double s0 = std::log(a), s1 = std::log(b);
  const double ds = (s1 - s0) / steps;

  // u_ss + (n-2) u_s + (κ(n-1) + λω) u = 0, u(s0) = 0, u_s(s0) = 1.
  auto vanishes = [&](double lambda) {
    const double k = kap * pq + lambda * omega;
    auto f = [&](double u, double du) { return std::pair{du, -(n - 2.0) * du - k * u}; };
    double u = 0.0, du = 1.0;
    for (int i = 0; i < steps; ++i) {
      auto [k1u, k1d] = f(u, du);
      auto [k2u, k2d] = f(u + 0.5 * ds * k1u, du + 0.5 * ds * k1d);
      auto [k3u, k3d] = f(u + 0.5 * ds * k2u, du + 0.5 * ds * k2d);
      auto [k4u, k4d] = f(u + ds * k3u, du + ds * k3d);
      u += ds / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
      du += ds / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
      if (u <= 0.0) return true;
    }
    return false;
  };

  double lo = ((n - 2.0) * (n - 2.0) / 4.0 - kap * pq) / omega;
  const double L = s1 - s0;
  double step = std::numbers::pi * std::numbers::pi / (omega * L * L);
  double hi = lo + step;
  int expansions = 0;
  while (!vanishes(hi)) {
    lo = hi;
    step *= 2.0;
    hi += step;
    if (++expansions > 60) {
      std::ostringstream os;
      os << "no shooting bracket found on [" << a << ", " << b << "], last trial " << hi;
      fail(ErrorCode::Solver, os.str());
    }
  }
  require(!vanishes(lo), ErrorCode::Solver, "shooting bracket is not a bracket");
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::abs(hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    (vanishes(mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

double lambda0_closed_form(const cone::ConeSpec& c) {
  const double n = c.n;
  const double pq = c.p + c.q;
  return ((n - 2.0) * (n - 2.0) / 4.0 - cone::kappa(c.n) * pq) / pq;
}

namespace {

// Value at x = 0 of the polynomial through the points (x_i, y_i).
double extrapolate_to_zero(const std::vector<double>& x, const std::vector<double>& y) {
  double total = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double basis = 1.0;
    for (std::size_t j = 0; j < x.size(); ++j)
      if (j != i) basis *= (0.0 - x[j]) / (x[i] - x[j]);
    total += basis * y[i];
  }
  return total;
}

}  // namespace

Lambda0Result lambda0(const cone::ConeSpec& c, const Lambda0Options& options) {
  require(options.m_max >= 3, ErrorCode::Domain, "lambda0 needs at least three exhaustion steps");
  require(options.eps.size() >= 2, ErrorCode::Domain, "lambda0 needs at least two eps values");
  Lambda0Result out;
  out.eps = options.eps;
  for (int m = 1; m <= options.m_max; ++m) out.schedule.push_back(m);

  double exhaustion_error = 0.0;
  for (double eps : options.eps) {
    WeightedProblem w = make_problem(c, eps, options.r_in, options.r_out);
    std::vector<double> seq, inv_l2;
    for (int m : out.schedule) {
      seq.push_back(dirichlet_eigen(w, m, options.solver).lambda);
      auto [a, b] = exhaustion_annulus(w, m);
      const double L = std::log(b / a);
      inv_l2.push_back(1.0 / (L * L));
      if (seq.size() >= 2 && seq.back() > seq[seq.size() - 2] + options.monotone_tolerance) {
        std::ostringstream os;
        os << "exhaustion eigenvalues increase at m = " << m << " for eps = " << eps;
        fail(ErrorCode::ConvergenceFailure, os.str());
      }
    }
    const std::size_t k = seq.size();
    auto limit = [&](std::size_t i, std::size_t j) {
      return extrapolate_to_zero({inv_l2[i], inv_l2[j]}, {seq[i], seq[j]});
    };
    const double last = limit(k - 2, k - 1);
    exhaustion_error = std::max(exhaustion_error, std::abs(last - limit(k - 3, k - 2)));
    out.lambda_sequence.push_back(std::move(seq));
    out.lambda_eps.push_back(last);
  }
  std::vector<double> x;
  for (double e : options.eps) x.push_back(e * e);
  out.lambda0 = extrapolate_to_zero(x, out.lambda_eps);
  const std::size_t k = x.size();
  const double linear = extrapolate_to_zero({x[k - 2], x[k - 1]}, {out.lambda_eps[k - 2], out.lambda_eps[k - 1]});
  out.error_estimate = std::max(exhaustion_error, std::abs(out.lambda0 - linear));
  return out;
}

BelowResult eigenfunction_below(const cone::ConeSpec& c, double lambda, double r_in, double r_out,
                                std::size_t samples) {
  const double top = lambda0_closed_form(c);
  if (lambda < 0.125 || lambda >= top) {
    std::ostringstream os;
    os << "lambda " << lambda << " outside the working band [1/8, " << top << ")";
    fail(ErrorCode::OutOfBand, os.str());
  }
  perron::IndicialRoots roots = perron::indicial_exponent(c, lambda);
  BelowResult out;
  out.alpha = roots.alpha;
  std::vector<double> r = log_grid(r_in, r_out, samples), u(samples);
  const double n = c.n;
  const double k = (cone::kappa(c.n) + lambda) * (c.p + c.q);
  for (std::size_t i = 0; i < samples; ++i) {
    u[i] = std::pow(r[i], roots.alpha);
    // -Δu - (κ + λ)|A|^2 u for u = r^α, scaled by r^2 / u.
    const double lap = roots.alpha * (roots.alpha - 1.0) + (n - 1.0) * roots.alpha;
    out.residual = std::max(out.residual, std::abs(-lap - k));
  }
  out.profile = RadialProfile(std::move(r), std::move(u), ProfileKind::Eigenfunction);
  return out;
}

}  // namespace conelab::spectral
