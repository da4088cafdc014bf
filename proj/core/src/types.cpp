#include "clams/types.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <unordered_map>

#include "clams/errors.hpp"

namespace clams {

namespace {
constexpr double kPi = std::numbers::pi;
}

double canonical_angle(double radians) noexcept {
  double a = std::fmod(radians, kPi);
  if (a < 0.0) a += kPi;
  if (a >= kPi) a = 0.0;
  return a;
}

Eigen2 eigen_decompose(const Cov2& cov) noexcept {
  const double mean = 0.5 * (cov.xx + cov.yy);
  const double half_diff = 0.5 * (cov.xx - cov.yy);
  const double radius = std::hypot(half_diff, cov.xy);
  Eigen2 out;
  out.major = mean + radius;
  out.minor = mean - radius;
  // atan2 of the doubled angle gives the major direction; isotropic -> 0.
  out.angle = (radius == 0.0) ? 0.0 : canonical_angle(0.5 * std::atan2(cov.xy, half_diff));
  return out;
}

Cov2 compose_covariance(double major_var, double minor_var, double angle) noexcept {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {major_var * c * c + minor_var * s * s, (major_var - minor_var) * c * s,
          major_var * s * s + minor_var * c * c};
}

Scatterplot validate_scatterplot(std::vector<Point> points, std::string id) {
  if (points.size() < 2) {
    throw Error(ErrorCode::EmptyInput,
                "a scatterplot needs at least 2 points, got " + std::to_string(points.size()));
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!std::isfinite(points[i].x) || !std::isfinite(points[i].y)) {
      throw Error(ErrorCode::NonFinite, "point " + std::to_string(i) + " has a non-finite coordinate");
    }
  }
  return Scatterplot(std::move(points), std::move(id));
}

GaussianComponent GaussianComponent::from_axes(Point center, double major_sd, double minor_sd,
                                               double angle, double soft_count, double weight) {
  if (!std::isfinite(center.x) || !std::isfinite(center.y) || !std::isfinite(angle)) {
    throw Error(ErrorCode::NonFinite, "component center or angle is not finite");
  }
  if (!(major_sd > 0.0) || !(minor_sd > 0.0) || !std::isfinite(major_sd) ||
      !std::isfinite(minor_sd)) {
    throw Error(ErrorCode::DegenerateComponent, "component standard deviations must be positive");
  }
  if (!(soft_count >= 0.0) || !std::isfinite(soft_count)) {
    throw Error(ErrorCode::InvalidArgument, "component count must be finite and >= 0");
  }
  if (!(weight > 0.0) || weight > 1.0 + 1e-12) {
    throw Error(ErrorCode::InvalidArgument, "component weight must lie in (0, 1]");
  }
  if (minor_sd > major_sd) {
    std::swap(major_sd, minor_sd);
    angle += 0.5 * kPi;
  }
  GaussianComponent c;
  c.center_ = center;
  c.major_sd_ = major_sd;
  c.minor_sd_ = minor_sd;
  c.angle_ = canonical_angle(angle);
  c.soft_count_ = soft_count;
  c.weight_ = std::min(weight, 1.0);
  return c;
}

GaussianComponent GaussianComponent::from_covariance(Point center, const Cov2& cov,
                                                     double soft_count, double weight) {
  const Eigen2 e = eigen_decompose(cov);
  if (!(e.minor > 0.0)) {
    throw Error(ErrorCode::DegenerateComponent, "covariance is not positive definite");
  }
  return from_axes(center, std::sqrt(e.major), std::sqrt(e.minor), e.angle, soft_count, weight);
}

Cov2 GaussianComponent::covariance() const noexcept {
  return compose_covariance(major_sd_ * major_sd_, minor_sd_ * minor_sd_, angle_);
}

double GaussianComponent::log_density(Point p) const noexcept {
  // Evaluate in the principal frame: u along the major axis, v along minor.
  const double dx = p.x - center_.x;
  const double dy = p.y - center_.y;
  const double c = std::cos(angle_);
  const double s = std::sin(angle_);
  const double u = (c * dx + s * dy) / major_sd_;
  const double v = (-s * dx + c * dy) / minor_sd_;
  return -std::log(2.0 * kPi * major_sd_ * minor_sd_) - 0.5 * (u * u + v * v);
}

Clustering::Clustering(std::vector<int> labels) : labels_(std::move(labels)) {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] < -1) {
      throw Error(ErrorCode::InvalidArgument,
                  "label " + std::to_string(labels_[i]) + " at row " + std::to_string(i) +
                      " is below -1");
    }
  }
}

std::size_t Clustering::cluster_count() const {
  std::set<int> seen;
  for (int l : labels_) {
    if (l >= 0) seen.insert(l);
  }
  return seen.size();
}

Clustering canonical_labels(std::span<const int> labels) {
  std::unordered_map<int, int> remap;
  std::vector<int> out;
  out.reserve(labels.size());
  for (int l : labels) {
    if (l < 0) {
      out.push_back(-1);
      continue;
    }
    auto [it, inserted] = remap.try_emplace(l, static_cast<int>(remap.size()));
    out.push_back(it->second);
  }
  return Clustering(std::move(out));
}

}  // namespace clams
