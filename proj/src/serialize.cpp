#include "conelab/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "conelab/error.hpp"

namespace conelab::io {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json to_json(const metric::MetricField& m) {
  json axes = json::array();
  for (int i = 0; i < m.dim(); ++i) {
    const metric::Axis& a = m.chart().axis(i);
    axes.push_back({{"min", a.min}, {"max", a.max}, {"samples", a.samples}});
  }
  return {{"dim", m.dim()}, {"axes", axes}, {"layout", "node-major, row-major n x n"}, {"components", m.components()}};
}

metric::MetricField metric_from_json(const json& j) {
  try {
    std::vector<metric::Axis> axes;
    for (const auto& a : j.at("axes")) axes.push_back({a.at("min"), a.at("max"), a.at("samples")});
    require(static_cast<int>(axes.size()) == j.at("dim").get<int>(), ErrorCode::Config, "axis count differs from dim");
    return metric::MetricField(metric::Chart(std::move(axes)), j.at("components").get<std::vector<double>>());
  } catch (const json::exception& e) {
    fail(ErrorCode::Config, std::string("malformed metric field: ") + e.what());
  }
}

json catalog_json(const std::vector<cone::ConeSpec>& cones) {
  json out = json::array();
  for (const cone::ConeSpec& c : cones) {
    out.push_back({{"p", c.p},
                   {"q", c.q},
                   {"n", c.n},
                   {"a", c.a},
                   {"b", c.b},
                   {"A2_at_1", cone::second_form_norm2(c, 1.0)},
                   {"scal_at_1", cone::cone_scal(c, 1.0)},
                   {"link_diameter", cone::link_diameter(c)}});
  }
  return out;
}

json lambda0_json(const cone::ConeSpec& c, const spectral::Lambda0Result& r) {
  return {{"cone", {{"p", c.p}, {"q", c.q}, {"n", c.n}}},
          {"eps", r.eps},
          {"schedule", r.schedule},
          {"lambda_sequence", r.lambda_sequence},
          {"lambda0", r.lambda0},
          {"error_estimate", r.error_estimate}};
}

json perron_json(const perron::PerronResult& r) {
  return {{"alpha", r.alpha},
          {"c", r.c},
          {"iterations", r.iterations},
          {"residual", r.residual},
          {"closed_form_error", r.closed_form_error},
          {"minimality_checks", r.minimality}};
}

json balls_json(const covering::BallSet& bs, const covering::FamilyAssignment* fa) {
  auto vec = [](const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
  json balls = json::array();
  for (std::size_t i = 0; i < bs.balls.size(); ++i) {
    const covering::Ball& b = bs.balls[i];
    json e = {{"center", vec(b.center)}, {"radius", b.radius}, {"id", b.id}};
    if (fa) e["family"] = fa->family.at(i);
    balls.push_back(e);
  }
  json targets = json::array();
  for (const auto& t : bs.targets) targets.push_back(vec(t));
  json out = {{"dim", bs.dim}, {"balls", balls}, {"targets", targets}};
  if (!bs.sources.empty()) {
    json sources = json::array();
    for (const auto& s : bs.sources) sources.push_back({{"center", vec(s.center)}, {"radius", s.radius}, {"id", s.id}});
    out["sources"] = sources;
  }
  if (fa) out["families_used"] = fa->used;
  return out;
}

covering::BallSet balls_from_json(const json& j) {
  auto vec = [](const json& a) {
    std::vector<double> v = a.get<std::vector<double>>();
    return Eigen::VectorXd(Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
  };
  try {
    covering::BallSet bs;
    bs.dim = j.at("dim");
    for (const auto& b : j.at("balls")) bs.balls.push_back({vec(b.at("center")), b.at("radius"), b.at("id")});
    if (j.contains("targets"))
      for (const auto& t : j.at("targets")) bs.targets.push_back(vec(t));
    if (j.contains("sources"))
      for (const auto& s : j.at("sources")) bs.sources.push_back({vec(s.at("center")), s.at("radius"), s.at("id")});
    return bs;
  } catch (const json::exception& e) {
    fail(ErrorCode::Config, std::string("malformed ball set: ") + e.what());
  }
}

json verify_json(const covering::VerifyReport& r) {
  auto prop = [](const covering::PropertyCheck& p) {
    return json{{"pass", p.pass}, {"witness", p.witness}, {"detail", p.detail}};
  };
  return {{"separation", prop(r.separation)}, {"exclusion", prop(r.exclusion)}, {"cover", prop(r.cover)}, {"pass", r.pass()}};
}

json buckets_json(const bending::Buckets& b) {
  return {{"t", b.t},   {"I1", b.i1}, {"I2", b.i2},     {"I3", b.i3},
          {"I4", b.i4}, {"I5", b.i5}, {"I6", b.i6},     {"I5_diagonal", b.i5_diagonal},
          {"sum", b.sum}, {"difference", b.diff}};
}

Csv::Csv(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void Csv::add(const std::vector<double>& row) {
  std::vector<std::string> text;
  for (double x : row) text.push_back(format_number(x));
  add_text(text);
}

void Csv::add_text(const std::vector<std::string>& row) {
  require(row.size() == columns_.size(), ErrorCode::DataIntegrity, "row width differs from the header");
  rows_.push_back(row);
}

std::string Csv::str() const {
  std::ostringstream os;
  auto line = [&os](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const std::string& c = cells[i];
      const bool quote = c.find_first_of(",\"\n") != std::string::npos;
      if (i) os << ',';
      if (quote) {
        os << '"';
        for (char ch : c) os << (ch == '"' ? "\"\"" : std::string(1, ch));
        os << '"';
      } else {
        os << c;
      }
    }
    os << '\n';
  };
  line(columns_);
  for (const auto& r : rows_) line(r);
  return os.str();
}

Csv barrier_csv(const std::vector<BarrierRow>& rows) {
  Csv csv({"mu", "Theta_measured", "Theta_closed_form", "penalty", "scal_min_times_rho2", "tube_margin"});
  for (const auto& r : rows)
    csv.add({r.mu, r.theta_measured, r.theta_closed_form, r.penalty, r.scal_min_times_rho2, r.tube_margin});
  return csv;
}

Csv bending_csv(const std::vector<BendingRow>& rows) {
  Csv csv({"k", "min_scal_diff", "argmin_location", "totally_geodesic_residual"});
  for (const auto& r : rows) csv.add({r.k, r.min_scal_diff, r.argmin_location, r.totally_geodesic_residual});
  return csv;
}

}  // namespace conelab::io
