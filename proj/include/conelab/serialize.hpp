#pragma once

// JSON and CSV encodings of module results. Numbers are written with 17
// significant digits so that repeated runs produce identical bytes.

#include <json.hpp>
#include <string>
#include <vector>

#include "conelab/bending.hpp"
#include "conelab/cone.hpp"
#include "conelab/covering.hpp"
#include "conelab/metric.hpp"
#include "conelab/perron.hpp"
#include "conelab/spectral.hpp"

namespace conelab::io {

using json = nlohmann::ordered_json;

std::string format_number(double x);

json to_json(const metric::MetricField& m);
// Rebuilds a sampled field; analytic callbacks are not serialized.
metric::MetricField metric_from_json(const json& j);

json catalog_json(const std::vector<cone::ConeSpec>& cones);
json lambda0_json(const cone::ConeSpec& c, const spectral::Lambda0Result& r);
json perron_json(const perron::PerronResult& r);

json balls_json(const covering::BallSet& bs, const covering::FamilyAssignment* fa = nullptr);
covering::BallSet balls_from_json(const json& j);
json verify_json(const covering::VerifyReport& r);

json buckets_json(const bending::Buckets& b);

class Csv {
 public:
  explicit Csv(std::vector<std::string> columns);
  void add(const std::vector<double>& row);
  void add_text(const std::vector<std::string>& row);
  std::string str() const;
  std::size_t rows() const { return rows_.size(); }

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

struct BarrierRow {
  double mu, theta_measured, theta_closed_form, penalty, scal_min_times_rho2, tube_margin;
};
Csv barrier_csv(const std::vector<BarrierRow>& rows);

struct BendingRow {
  double k, min_scal_diff, argmin_location, totally_geodesic_residual;
};
Csv bending_csv(const std::vector<BendingRow>& rows);

}  // namespace conelab::io
