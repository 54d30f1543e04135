#include "conelab/metric.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "conelab/error.hpp"

namespace conelab::metric {

namespace {

constexpr double kPivotTolerance = 1e-12;
constexpr int kStencilMargin = 1;

// Cholesky with a relative pivot floor; returns false on a bad pivot.
bool positive_definite(const Mat& g) {
  const int n = static_cast<int>(g.rows());
  double scale = 0.0;
  for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(g(i, i)));
  if (!(scale > 0.0) || !std::isfinite(scale)) return false;
  Mat l = Mat::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    double d = g(j, j);
    for (int k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > kPivotTolerance * scale)) return false;
    l(j, j) = std::sqrt(d);
    for (int i = j + 1; i < n; ++i) {
      double s = g(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return true;
}

void check_metric(const Mat& g, const std::string& where) {
  const int n = static_cast<int>(g.rows());
  double scale = g.cwiseAbs().maxCoeff();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      require(std::abs(g(i, j) - g(j, i)) <= 1e-12 * std::max(scale, 1e-300), ErrorCode::Domain,
              "metric not symmetric at " + where);
  require(positive_definite(g), ErrorCode::SingularMetric, "metric not positive definite at " + where);
}

std::string describe(const Node& p) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < p.size(); ++i) os << (i ? "," : "") << p[i];
  os << ")";
  return os.str();
}

Mat inverse_checked(const Mat& g) {
  require(positive_definite(g), ErrorCode::SingularMetric, "metric not invertible");
  return g.llt().solve(Mat::Identity(g.rows(), g.cols()));
}

}  // namespace

// ---------------------------------------------------------------- Chart

Chart::Chart(std::vector<Axis> axes) : axes_(std::move(axes)) {
  require(axes_.size() >= 2, ErrorCode::Domain, "chart dimension must be at least 2");
  spacing_.resize(axes_.size());
  stride_.resize(axes_.size());
  count_ = 1;
  for (std::size_t i = axes_.size(); i-- > 0;) {
    const Axis& a = axes_[i];
    require(a.samples >= 5, ErrorCode::Domain, "chart axes need at least 5 samples");
    require(a.max > a.min, ErrorCode::Domain, "chart spacing must be positive");
    spacing_[i] = a.spacing();
    stride_[i] = count_;
    count_ *= static_cast<std::size_t>(a.samples);
  }
}

Chart Chart::centered(const Vec& center, const Vec& h, int samples) {
  std::vector<Axis> axes;
  const double half = 0.5 * (samples - 1);
  for (int i = 0; i < center.size(); ++i)
    axes.push_back({center[i] - half * h[i], center[i] + half * h[i], samples});
  return Chart(std::move(axes));
}

std::size_t Chart::index(const Node& p) const {
  require(static_cast<int>(p.size()) == dim(), ErrorCode::Domain, "node rank mismatch");
  std::size_t idx = 0;
  for (int i = 0; i < dim(); ++i) {
    require(p[i] >= 0 && p[i] < axes_[i].samples, ErrorCode::Domain, "node outside chart");
    idx += stride_[i] * static_cast<std::size_t>(p[i]);
  }
  return idx;
}

Node Chart::node(std::size_t index) const {
  Node p(dim());
  for (int i = 0; i < dim(); ++i) {
    p[i] = static_cast<int>(index / stride_[i]);
    index %= stride_[i];
  }
  return p;
}

Node Chart::center_node() const {
  Node p(dim());
  for (int i = 0; i < dim(); ++i) p[i] = (axes_[i].samples - 1) / 2;
  return p;
}

Vec Chart::coords(const Node& p) const {
  Vec x(dim());
  for (int i = 0; i < dim(); ++i) x[i] = axes_[i].min + p[i] * spacing_[i];
  return x;
}

int Chart::margin(const Node& p) const {
  int m = axes_[0].samples;
  for (int i = 0; i < dim(); ++i) m = std::min({m, p[i], axes_[i].samples - 1 - p[i]});
  return m;
}

// ---------------------------------------------------------------- jets

MetricJet MetricJet::zero(int n) {
  MetricJet j;
  j.g = Mat::Zero(n, n);
  j.dg.assign(n, Mat::Zero(n, n));
  j.ddg.assign(n, std::vector<Mat>(n, Mat::Zero(n, n)));
  return j;
}

// ---------------------------------------------------------------- MetricField

MetricField::MetricField(Chart chart, std::vector<double> components,
                         std::optional<AnalyticMetric> analytic)
    : chart_(std::move(chart)), components_(std::move(components)), analytic_(std::move(analytic)) {
  const std::size_t nn = static_cast<std::size_t>(dim()) * dim();
  require(components_.size() == nn * chart_.node_count(), ErrorCode::Domain,
          "component array does not match chart");
  for (std::size_t i = 0; i < chart_.node_count(); ++i) check_metric(at(i), describe(chart_.node(i)));
}

MetricField MetricField::sample(const Chart& chart, const std::function<Mat(const Vec&)>& g) {
  const int n = chart.dim();
  std::vector<double> comps(chart.node_count() * n * n);
  for (std::size_t i = 0; i < chart.node_count(); ++i) {
    Mat gi = g(chart.coords(chart.node(i)));
    require(gi.rows() == n && gi.cols() == n, ErrorCode::Domain, "metric callback has wrong shape");
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) comps[(i * n + a) * n + b] = gi(a, b);
  }
  return MetricField(chart, std::move(comps));
}

MetricField MetricField::from_analytic(const Chart& chart, AnalyticMetric analytic) {
  MetricField sampled = sample(chart, analytic.value);
  return MetricField(chart, std::move(sampled.components_), std::move(analytic));
}

Mat MetricField::at(std::size_t index) const {
  const int n = dim();
  Mat g(n, n);
  const double* c = components_.data() + index * n * n;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) g(a, b) = c[a * n + b];
  return g;
}

Method MetricField::resolve(Method method) const {
  if (method == Method::Auto) return analytic_ ? Method::Analytic : Method::Stencil;
  if (method == Method::Analytic)
    require(analytic_.has_value(), ErrorCode::Domain, "no analytic callbacks on this metric");
  return method;
}

MetricJet MetricField::jet(const Node& p, Method method) const {
  method = resolve(method);
  if (method == Method::Analytic) {
    MetricJet j = analytic_->jet(chart_.coords(p));
    check_metric(j.g, describe(p));
    return j;
  }
  require(chart_.margin(p) >= kStencilMargin, ErrorCode::Domain,
          "stencil needs a one-node margin at " + describe(p));
  const int n = dim();
  MetricJet j = MetricJet::zero(n);
  j.g = at(p);
  Node q = p;
  auto val = [&](int k, int dk, int l, int dl) {
    q = p;
    q[k] += dk;
    q[l] += dl;
    return at(q);
  };
  for (int k = 0; k < n; ++k) {
    const double h = chart_.h(k);
    Mat plus = val(k, 1, k, 0), minus = val(k, -1, k, 0);
    j.dg[k] = (plus - minus) / (2.0 * h);
    j.ddg[k][k] = (plus - 2.0 * j.g + minus) / (h * h);
    for (int l = k + 1; l < n; ++l) {
      Mat m = (val(k, 1, l, 1) - val(k, 1, l, -1) - val(k, -1, l, 1) + val(k, -1, l, -1)) /
              (4.0 * h * chart_.h(l));
      j.ddg[k][l] = m;
      j.ddg[l][k] = m;
    }
  }
  return j;
}

// ---------------------------------------------------------------- curvature

Christoffel christoffel_from_jet(const MetricJet& jet) {
  const int n = static_cast<int>(jet.g.rows());
  Mat ginv = inverse_checked(jet.g);
  Christoffel gam(n);
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        double s = 0.0;
        for (int r = 0; r < n; ++r)
          s += ginv(c, r) * (jet.dg[b](a, r) + jet.dg[a](b, r) - jet.dg[r](a, b));
        gam(c, a, b) = 0.5 * s;
        gam(c, b, a) = 0.5 * s;
      }
  return gam;
}

double scal_from_jet(const MetricJet& jet) {
  const int n = static_cast<int>(jet.g.rows());
  Mat ginv = inverse_checked(jet.g);
  Christoffel gam = christoffel_from_jet(jet);
  // d_k g^{-1} = -g^{-1} (d_k g) g^{-1}
  std::vector<Mat> dginv(n);
  for (int k = 0; k < n; ++k) dginv[k] = -ginv * jet.dg[k] * ginv;

  // d_k Gamma^c_{ab}
  auto d_gamma = [&](int k, int c, int a, int b) {
    double s = 0.0;
    for (int r = 0; r < n; ++r) {
      const double first = jet.dg[b](a, r) + jet.dg[a](b, r) - jet.dg[r](a, b);
      const double second = jet.ddg[k][b](a, r) + jet.ddg[k][a](b, r) - jet.ddg[k][r](a, b);
      s += dginv[k](c, r) * first + ginv(c, r) * second;
    }
    return 0.5 * s;
  };

  double scal = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (ginv(i, j) == 0.0) continue;
      double ric = 0.0;
      for (int k = 0; k < n; ++k) {
        ric += d_gamma(k, k, i, j) - d_gamma(j, k, i, k);
        for (int l = 0; l < n; ++l)
          ric += gam(k, k, l) * gam(l, i, j) - gam(k, j, l) * gam(l, i, k);
      }
      scal += ginv(i, j) * ric;
    }
  return scal;
}

Christoffel christoffel(const MetricField& m, const Node& p, Method method) {
  return christoffel_from_jet(m.jet(p, method));
}

double scalar_curvature(const MetricField& m, const Node& p, Method method) {
  return scal_from_jet(m.jet(p, method));
}

CurvatureSample curvature_sample(const MetricField& m, const Node& p, Method method) {
  Method used = m.resolve(method);
  MetricJet j = m.jet(p, used);
  return {p, christoffel_from_jet(j), scal_from_jet(j), used};
}

double conformal_scal(double scal_g, double u, double lap_u, int n) {
  require(u > 0.0, ErrorCode::Domain, "conformal factor must be positive");
  require(n >= 3, ErrorCode::Domain, "conformal law needs n >= 3");
  const double nn = n;
  return std::pow(u, -(nn + 2.0) / (nn - 2.0)) * (-(4.0 * (nn - 1.0) / (nn - 2.0)) * lap_u + scal_g * u);
}

// ---------------------------------------------------------------- ScalarField

ScalarField::ScalarField(Chart chart, std::vector<double> values,
                         std::function<ScalarJet(const Vec&)> analytic)
    : chart_(std::move(chart)), values_(std::move(values)), analytic_(std::move(analytic)) {}

ScalarField ScalarField::sample(const Chart& chart, const std::function<double(const Vec&)>& f) {
  std::vector<double> v(chart.node_count());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(chart.coords(chart.node(i)));
  return ScalarField(chart, std::move(v), {});
}

ScalarField ScalarField::from_analytic(const Chart& chart, std::function<ScalarJet(const Vec&)> jet) {
  std::vector<double> v(chart.node_count());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = jet(chart.coords(chart.node(i))).value;
  return ScalarField(chart, std::move(v), std::move(jet));
}

ScalarJet ScalarField::jet(const Node& p, Method method) const {
  if (method == Method::Auto) method = analytic_ ? Method::Analytic : Method::Stencil;
  if (method == Method::Analytic) {
    require(static_cast<bool>(analytic_), ErrorCode::Domain, "no analytic callbacks on this field");
    return analytic_(chart_.coords(p));
  }
  require(chart_.margin(p) >= kStencilMargin, ErrorCode::Domain,
          "stencil needs a one-node margin at " + describe(p));
  const int n = chart_.dim();
  ScalarJet j;
  j.value = at(p);
  j.grad = Vec::Zero(n);
  j.hess = Mat::Zero(n, n);
  Node q = p;
  auto val = [&](int k, int dk, int l, int dl) {
    q = p;
    q[k] += dk;
    q[l] += dl;
    return at(q);
  };
  for (int k = 0; k < n; ++k) {
    const double h = chart_.h(k);
    double plus = val(k, 1, k, 0), minus = val(k, -1, k, 0);
    j.grad[k] = (plus - minus) / (2.0 * h);
    j.hess(k, k) = (plus - 2.0 * j.value + minus) / (h * h);
    for (int l = k + 1; l < n; ++l) {
      double m = (val(k, 1, l, 1) - val(k, 1, l, -1) - val(k, -1, l, 1) + val(k, -1, l, -1)) /
                 (4.0 * h * chart_.h(l));
      j.hess(k, l) = m;
      j.hess(l, k) = m;
    }
  }
  return j;
}

double laplacian_from_jets(const MetricJet& g, const ScalarJet& f) {
  const int n = static_cast<int>(g.g.rows());
  Mat ginv = inverse_checked(g.g);
  Christoffel gam = christoffel_from_jet(g);
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double h = f.hess(i, j);
      for (int k = 0; k < n; ++k) h -= gam(k, i, j) * f.grad[k];
      s += ginv(i, j) * h;
    }
  return s;
}

double laplacian(const MetricField& m, const ScalarField& f, const Node& p, Method method) {
  Method gm = m.resolve(method);
  Method fm = method;
  if (fm == Method::Auto) fm = f.has_analytic() ? Method::Analytic : Method::Stencil;
  return laplacian_from_jets(m.jet(p, gm), f.jet(p, fm));
}

MetricField conformal_deform(const MetricField& m, const ScalarField& u) {
  const Chart& chart = m.chart();
  const int n = chart.dim();
  require(n >= 3, ErrorCode::Domain, "conformal deformation needs n >= 3");
  require(u.chart().node_count() == chart.node_count(), ErrorCode::Domain, "factor chart mismatch");
  const double p = 4.0 / (n - 2.0);
  std::vector<double> comps(m.components().size());
  for (std::size_t i = 0; i < chart.node_count(); ++i) {
    const double ui = u.at(i);
    require(ui > 0.0, ErrorCode::Domain, "conformal factor must be positive at every node");
    const double w = std::pow(ui, p);
    for (int k = 0; k < n * n; ++k) comps[i * n * n + k] = w * m.components()[i * n * n + k];
  }
  std::optional<AnalyticMetric> analytic;
  if (m.has_analytic() && u.has_analytic()) {
    AnalyticMetric base = *m.analytic();
    auto ujet = u.analytic();
    AnalyticMetric out;
    out.value = [base, ujet, p](const Vec& x) {
      return (std::pow(ujet(x).value, p) * base.value(x)).eval();
    };
    out.jet = [base, ujet, p, n](const Vec& x) {
      MetricJet g = base.jet(x);
      ScalarJet s = ujet(x);
      const double w = std::pow(s.value, p);
      Vec dw = p * std::pow(s.value, p - 1.0) * s.grad;
      Mat ddw = p * (p - 1.0) * std::pow(s.value, p - 2.0) * s.grad * s.grad.transpose() +
                p * std::pow(s.value, p - 1.0) * s.hess;
      MetricJet r = MetricJet::zero(n);
      r.g = w * g.g;
      for (int k = 0; k < n; ++k) r.dg[k] = dw[k] * g.g + w * g.dg[k];
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          r.ddg[k][l] = ddw(k, l) * g.g + dw[k] * g.dg[l] + dw[l] * g.dg[k] + w * g.ddg[k][l];
      return r;
    };
    analytic = std::move(out);
  }
  return MetricField(chart, std::move(comps), std::move(analytic));
}

// ---------------------------------------------------------------- level sets

ShapeResult shape_from_jets(const MetricJet& g, const ScalarJet& f) {
  const int n = static_cast<int>(g.g.rows());
  Mat ginv = inverse_checked(g.g);
  Vec grad_up = ginv * f.grad;
  const double norm2 = f.grad.dot(grad_up);
  require(norm2 > 1e-24, ErrorCode::DegenerateLevelSet, "level function has vanishing gradient");
  const double norm = std::sqrt(norm2);

  Christoffel gam = christoffel_from_jet(g);
  Mat hess = f.hess;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) hess(i, j) -= gam(k, i, j) * f.grad[k];

  // Tangent frame: project coordinate vectors, then Gram-Schmidt in g.
  std::vector<Vec> basis;
  for (int i = 0; i < n && static_cast<int>(basis.size()) < n - 1; ++i) {
    Vec v = Vec::Unit(n, i);
    v -= (f.grad.dot(v) / norm2) * grad_up;
    for (const Vec& e : basis) v -= (e.dot(g.g * v)) * e;
    const double len2 = v.dot(g.g * v);
    if (len2 < 1e-20) continue;
    basis.push_back(v / std::sqrt(len2));
  }
  require(static_cast<int>(basis.size()) == n - 1, ErrorCode::DegenerateLevelSet,
          "could not build a tangent frame");
  Mat e(n, n - 1);
  for (int a = 0; a < n - 1; ++a) e.col(a) = basis[a];
  ShapeResult r;
  r.secondform = e.transpose() * hess * e / norm;
  r.secondform = 0.5 * (r.secondform + r.secondform.transpose()).eval();
  r.trace = r.secondform.trace();
  r.tangent_basis = e;
  r.normal = -grad_up / norm;
  return r;
}

ShapeResult level_set_shape(const MetricField& m, const ScalarField& f, const Node& p, Method method) {
  Method gm = m.resolve(method);
  Method fm = method;
  if (fm == Method::Auto) fm = f.has_analytic() ? Method::Analytic : Method::Stencil;
  return shape_from_jets(m.jet(p, gm), f.jet(p, fm));
}

Mat conformal_shape_shift(const Mat& secondform, const Mat& g_restriction, double u,
                          const Vec& grad_u, const Vec& normal, int n) {
  require(u > 0.0, ErrorCode::Domain, "conformal factor must be positive");
  require(n >= 3, ErrorCode::Domain, "shape shift needs n >= 3");
  const double normal_log_derivative = grad_u.dot(normal) / u;
  return secondform - (2.0 / (n - 2.0)) * normal_log_derivative * g_restriction;
}

double trace_relative(const Mat& form, const Mat& inner) {
  return inner.llt().solve(form).trace();
}

// ---------------------------------------------------------------- separable metrics

SeparableDiagonal::SeparableDiagonal(int n)
    : n_(n), factors_(n, std::vector<std::optional<Factor>>(n)) {}

void SeparableDiagonal::set_factor(int entry, int coord, Factor factor) {
  factors_[entry][coord] = std::move(factor);
}

AnalyticMetric SeparableDiagonal::analytic() const {
  const int n = n_;
  auto factors = factors_;
  auto evaluate = [n, factors](const Vec& x) {
    // f[i][k] = (value, d1, d2) of factor k of entry i
    std::vector<std::vector<std::array<double, 3>>> f(n, std::vector<std::array<double, 3>>(n));
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        f[i][k] = factors[i][k] ? factors[i][k]->eval(x[k]) : std::array<double, 3>{1.0, 0.0, 0.0};
    return f;
  };
  AnalyticMetric a;
  a.value = [n, evaluate](const Vec& x) {
    auto f = evaluate(x);
    Mat g = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      double v = 1.0;
      for (int k = 0; k < n; ++k) v *= f[i][k][0];
      g(i, i) = v;
    }
    return g;
  };
  a.jet = [n, evaluate](const Vec& x) {
    auto f = evaluate(x);
    MetricJet j = MetricJet::zero(n);
    for (int i = 0; i < n; ++i) {
      auto product = [&](int skip1, int order1, int skip2, int order2) {
        double v = 1.0;
        for (int k = 0; k < n; ++k) {
          if (k == skip1) v *= f[i][k][order1];
          else if (k == skip2) v *= f[i][k][order2];
          else v *= f[i][k][0];
        }
        return v;
      };
      j.g(i, i) = product(-1, 0, -1, 0);
      for (int k = 0; k < n; ++k) {
        j.dg[k](i, i) = product(k, 1, -1, 0);
        j.ddg[k][k](i, i) = product(k, 2, -1, 0);
        for (int l = k + 1; l < n; ++l) {
          const double v = product(k, 1, l, 1);
          j.ddg[k][l](i, i) = v;
          j.ddg[l][k](i, i) = v;
        }
      }
    }
    return j;
  };
  return a;
}

}  // namespace conelab::metric
