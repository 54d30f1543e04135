#pragma once

#include <vector>

namespace conelab {

enum class ProfileKind { Generic, ConformalFactor, Eigenfunction, Green };

const char* to_string(ProfileKind kind);

// Scalar function of the radial coordinate sampled on strictly increasing
// radii r_i > 0.
class RadialProfile {
 public:
  RadialProfile() = default;
  RadialProfile(std::vector<double> r, std::vector<double> u, ProfileKind kind = ProfileKind::Generic);

  std::size_t size() const { return r_.size(); }
  const std::vector<double>& r() const { return r_; }
  const std::vector<double>& u() const { return u_; }
  double r(std::size_t i) const { return r_[i]; }
  double u(std::size_t i) const { return u_[i]; }
  double& u(std::size_t i) { return u_[i]; }
  ProfileKind kind() const { return kind_; }

  double front() const { return r_.front(); }
  double back() const { return r_.back(); }

  // Piecewise linear in log r; domain error outside [front, back].
  double operator()(double radius) const;
  // Index of the largest node <= radius.
  std::size_t locate(double radius) const;
  double min_value() const;
  double max_value() const;

  // Nodes i..j inclusive.
  RadialProfile slice(std::size_t i, std::size_t j) const;

 private:
  std::vector<double> r_;
  std::vector<double> u_;
  ProfileKind kind_ = ProfileKind::Generic;
};

// count radii with uniform spacing in log r, both ends included.
std::vector<double> log_grid(double r_min, double r_max, std::size_t count);

// log_grid with about nodes_per_unit samples per unit of log r.
std::vector<double> log_grid_density(double r_min, double r_max, double nodes_per_unit);

double max_abs_difference(const RadialProfile& a, const RadialProfile& b);

}  // namespace conelab
