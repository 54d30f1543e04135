#include "conelab/radial.hpp"

#include <algorithm>
#include <cmath>

#include "conelab/error.hpp"

namespace conelab {

const char* to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::Generic: return "generic";
    case ProfileKind::ConformalFactor: return "conformal-factor";
    case ProfileKind::Eigenfunction: return "eigenfunction";
    case ProfileKind::Green: return "green";
  }
  return "generic";
}

RadialProfile::RadialProfile(std::vector<double> r, std::vector<double> u, ProfileKind kind)
    : r_(std::move(r)), u_(std::move(u)), kind_(kind) {
  require(r_.size() == u_.size(), ErrorCode::Domain, "radii and values differ in length");
  require(r_.size() >= 2, ErrorCode::Domain, "profile needs at least two samples");
  require(r_.front() > 0.0, ErrorCode::Domain, "profile radii must be positive");
  for (std::size_t i = 1; i < r_.size(); ++i)
    require(r_[i] > r_[i - 1], ErrorCode::Domain, "profile radii must increase strictly");
  for (double v : u_) require(std::isfinite(v), ErrorCode::Domain, "profile values must be finite");
}

std::size_t RadialProfile::locate(double radius) const {
  require(radius >= r_.front() && radius <= r_.back(), ErrorCode::Domain,
          "radius outside the profile grid");
  auto it = std::upper_bound(r_.begin(), r_.end(), radius);
  std::size_t i = static_cast<std::size_t>(it - r_.begin());
  return i == 0 ? 0 : std::min(i - 1, r_.size() - 2);
}

double RadialProfile::operator()(double radius) const {
  const std::size_t i = locate(radius);
  const double t = std::log(radius / r_[i]) / std::log(r_[i + 1] / r_[i]);
  return (1.0 - t) * u_[i] + t * u_[i + 1];
}

double RadialProfile::min_value() const { return *std::min_element(u_.begin(), u_.end()); }
double RadialProfile::max_value() const { return *std::max_element(u_.begin(), u_.end()); }

RadialProfile RadialProfile::slice(std::size_t i, std::size_t j) const {
  require(i < j && j < r_.size(), ErrorCode::Domain, "bad profile slice");
  return RadialProfile({r_.begin() + i, r_.begin() + j + 1}, {u_.begin() + i, u_.begin() + j + 1}, kind_);
}

std::vector<double> log_grid(double r_min, double r_max, std::size_t count) {
  require(r_min > 0.0 && r_max > r_min, ErrorCode::Domain, "log grid needs 0 < r_min < r_max");
  require(count >= 2, ErrorCode::Domain, "log grid needs two points");
  std::vector<double> r(count);
  const double a = std::log(r_min), b = std::log(r_max);
  for (std::size_t i = 0; i < count; ++i)
    r[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
  r.front() = r_min;
  r.back() = r_max;
  return r;
}

std::vector<double> log_grid_density(double r_min, double r_max, double nodes_per_unit) {
  const double width = std::log(r_max / r_min);
  const auto cells = static_cast<std::size_t>(std::max(1.0, std::ceil(width * nodes_per_unit)));
  return log_grid(r_min, r_max, cells + 1);
}

double max_abs_difference(const RadialProfile& a, const RadialProfile& b) {
  require(a.size() == b.size(), ErrorCode::Domain, "profiles on different grids");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.u(i) - b.u(i)));
  return m;
}

}  // namespace conelab
