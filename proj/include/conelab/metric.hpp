#pragma once

// Finite-difference Riemannian calculus on structured coordinate grids.

#include <Eigen/Dense>
#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

namespace conelab::metric {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct Axis {
  double min = 0.0;
  double max = 1.0;
  int samples = 5;

  double spacing() const { return (max - min) / (samples - 1); }
};

using Node = std::vector<int>;

// Uniform tensor-product grid. Every axis carries at least five samples.
class Chart {
 public:
  explicit Chart(std::vector<Axis> axes);

  // Chart of `samples` nodes per axis centred on `center` with spacing `h[i]`.
  static Chart centered(const Vec& center, const Vec& h, int samples = 5);

  int dim() const { return static_cast<int>(axes_.size()); }
  const Axis& axis(int i) const { return axes_[i]; }
  double h(int i) const { return spacing_[i]; }
  std::size_t node_count() const { return count_; }

  std::size_t index(const Node& p) const;
  Node node(std::size_t index) const;
  Node center_node() const;
  Vec coords(const Node& p) const;
  // Smallest distance, in nodes, from p to the chart boundary.
  int margin(const Node& p) const;

 private:
  std::vector<Axis> axes_;
  std::vector<double> spacing_;
  std::vector<std::size_t> stride_;
  std::size_t count_ = 0;
};

// Value and first two coordinate derivatives of the metric at a point.
// dg[k] = d_k g, ddg[k][l] = d_k d_l g.
struct MetricJet {
  Mat g;
  std::vector<Mat> dg;
  std::vector<std::vector<Mat>> ddg;

  static MetricJet zero(int n);
};

struct AnalyticMetric {
  std::function<Mat(const Vec&)> value;
  std::function<MetricJet(const Vec&)> jet;
};

enum class Method { Auto, Stencil, Analytic };

class MetricField {
 public:
  // Samples g at every node. The analytic callbacks, if given, are used in
  // place of stencils whenever the caller asks for Method::Auto.
  static MetricField sample(const Chart& chart, const std::function<Mat(const Vec&)>& g);
  static MetricField from_analytic(const Chart& chart, AnalyticMetric analytic);
  MetricField(Chart chart, std::vector<double> components,
              std::optional<AnalyticMetric> analytic = std::nullopt);

  const Chart& chart() const { return chart_; }
  int dim() const { return chart_.dim(); }
  Mat at(std::size_t index) const;
  Mat at(const Node& p) const { return at(chart_.index(p)); }
  bool has_analytic() const { return analytic_.has_value(); }
  const std::optional<AnalyticMetric>& analytic() const { return analytic_; }
  const std::vector<double>& components() const { return components_; }

  // Jet at p. Stencil jets use second-order central differences and need a
  // one-node margin.
  MetricJet jet(const Node& p, Method method = Method::Auto) const;
  Method resolve(Method method) const;

 private:
  Chart chart_;
  std::vector<double> components_;
  std::optional<AnalyticMetric> analytic_;
};

// Gamma^c_{ab} stored as gamma[c][a][b].
class Christoffel {
 public:
  explicit Christoffel(int n) : n_(n), data_(static_cast<std::size_t>(n) * n * n, 0.0) {}
  int dim() const { return n_; }
  double& operator()(int c, int a, int b) { return data_[(c * n_ + a) * n_ + b]; }
  double operator()(int c, int a, int b) const { return data_[(c * n_ + a) * n_ + b]; }

 private:
  int n_;
  std::vector<double> data_;
};

struct CurvatureSample {
  Node point;
  Christoffel christoffel;
  double scal;
  Method method;
};

Christoffel christoffel_from_jet(const MetricJet& jet);
double scal_from_jet(const MetricJet& jet);

Christoffel christoffel(const MetricField& m, const Node& p, Method method = Method::Auto);
double scalar_curvature(const MetricField& m, const Node& p, Method method = Method::Auto);
CurvatureSample curvature_sample(const MetricField& m, const Node& p, Method method = Method::Auto);

// u^{-(n+2)/(n-2)} (-(4(n-1)/(n-2)) lap_u + scal_g u).
double conformal_scal(double scal_g, double u, double lap_u, int n);

struct ScalarJet {
  double value = 0.0;
  Vec grad;
  Mat hess;
};

class ScalarField {
 public:
  static ScalarField sample(const Chart& chart, const std::function<double(const Vec&)>& f);
  static ScalarField from_analytic(const Chart& chart, std::function<ScalarJet(const Vec&)> jet);

  const Chart& chart() const { return chart_; }
  double at(std::size_t index) const { return values_[index]; }
  double at(const Node& p) const { return values_[chart_.index(p)]; }
  const std::vector<double>& values() const { return values_; }
  bool has_analytic() const { return static_cast<bool>(analytic_); }
  const std::function<ScalarJet(const Vec&)>& analytic() const { return analytic_; }
  ScalarJet jet(const Node& p, Method method = Method::Auto) const;

 private:
  ScalarField(Chart chart, std::vector<double> values, std::function<ScalarJet(const Vec&)> analytic);
  Chart chart_;
  std::vector<double> values_;
  std::function<ScalarJet(const Vec&)> analytic_;
};

// Laplace-Beltrami g^{ij}(d_i d_j f - Gamma^k_{ij} d_k f).
double laplacian(const MetricField& m, const ScalarField& f, const Node& p,
                 Method method = Method::Auto);
double laplacian_from_jets(const MetricJet& g, const ScalarJet& f);

// g -> u^{4/(n-2)} g componentwise.
MetricField conformal_deform(const MetricField& m, const ScalarField& u);

struct ShapeResult {
  Mat secondform;  // in a g-orthonormal tangent basis
  double trace;
  Mat tangent_basis;  // columns: the orthonormal basis, coordinate components
  Vec normal;         // contravariant unit normal, -grad f / |grad f|
};

// Second fundamental form of the level set {f = f(p)} seen as the boundary of
// the sublevel set {f < f(p)}, i.e. with the normal -grad f/|grad f|.
// A(v, w) = g(nabla_v w, N). A round sphere |x| = r gets trace (n-1)/r.
ShapeResult level_set_shape(const MetricField& m, const ScalarField& f, const Node& p,
                            Method method = Method::Auto);
ShapeResult shape_from_jets(const MetricJet& g, const ScalarJet& f);

// A(u^{4/(n-2)} g)(v, w) = A(g)(v, w) - (2/(n-2)) N(u)/u g(v, w), up to the
// positive factor u^{2/(n-2)}. grad_u holds the partial derivatives of u and
// normal the contravariant components of the unit normal.
Mat conformal_shape_shift(const Mat& secondform, const Mat& g_restriction, double u,
                          const Vec& grad_u, const Vec& normal, int n);

// Trace of a bilinear form relative to an inner product on the same space.
double trace_relative(const Mat& form, const Mat& inner);

// Diagonal metric whose entries are products of one-variable factors,
// g_ii(x) = prod_k F_ik(x_k). Missing factors are identically one.
struct Factor {
  std::function<std::array<double, 3>(double)> eval;  // value, first, second derivative
};

class SeparableDiagonal {
 public:
  explicit SeparableDiagonal(int n);
  void set_factor(int entry, int coord, Factor factor);
  AnalyticMetric analytic() const;
  int dim() const { return n_; }

 private:
  int n_;
  std::vector<std::vector<std::optional<Factor>>> factors_;
};

}  // namespace conelab::metric
