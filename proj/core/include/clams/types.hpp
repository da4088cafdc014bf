#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace clams {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

// Symmetric 2x2 covariance [[xx, xy], [xy, yy]].
struct Cov2 {
  double xx = 1.0;
  double xy = 0.0;
  double yy = 1.0;
};

struct Eigen2 {
  double major = 0.0;  // larger eigenvalue
  double minor = 0.0;  // smaller eigenvalue
  double angle = 0.0;  // direction of the major eigenvector, in [0, pi)
};

Eigen2 eigen_decompose(const Cov2& cov) noexcept;
Cov2 compose_covariance(double major_var, double minor_var, double angle) noexcept;

// Folds an axis direction into [0, pi); an axis has no sign.
double canonical_angle(double radians) noexcept;

// An ordered, validated set of 2-D points. Point indices are the identity
// used by cluster labelings, so order is never changed here.
class Scatterplot {
 public:
  const std::vector<Point>& points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  const std::string& id() const noexcept { return id_; }
  const Point& operator[](std::size_t i) const noexcept { return points_[i]; }

  friend Scatterplot validate_scatterplot(std::vector<Point> points, std::string id);

 private:
  Scatterplot(std::vector<Point> points, std::string id)
      : points_(std::move(points)), id_(std::move(id)) {}

  std::vector<Point> points_;
  std::string id_;
};

// Throws EmptyInput for fewer than two points and NonFinite for NaN/Inf.
Scatterplot validate_scatterplot(std::vector<Point> points, std::string id = {});

class GaussianComponent {
 public:
  // major/minor are standard deviations. If minor > major the two are
  // swapped and the angle rotated by pi/2. Throws DegenerateComponent for a
  // non-positive or non-finite axis and InvalidArgument for a bad weight.
  static GaussianComponent from_axes(Point center, double major_sd, double minor_sd,
                                     double angle, double soft_count, double weight);
  static GaussianComponent from_covariance(Point center, const Cov2& cov,
                                           double soft_count, double weight);

  Point center() const noexcept { return center_; }
  double major_sd() const noexcept { return major_sd_; }
  double minor_sd() const noexcept { return minor_sd_; }
  double angle() const noexcept { return angle_; }
  double soft_count() const noexcept { return soft_count_; }
  double weight() const noexcept { return weight_; }

  Cov2 covariance() const noexcept;
  double log_density(Point p) const noexcept;

  friend bool operator==(const GaussianComponent&, const GaussianComponent&) = default;

 private:
  GaussianComponent() = default;

  Point center_;
  double major_sd_ = 1.0;
  double minor_sd_ = 1.0;
  double angle_ = 0.0;
  double soft_count_ = 0.0;
  double weight_ = 1.0;
};

struct BicEntry {
  int k = 0;
  double bic = 0.0;
};

struct Decomposition {
  std::vector<GaussianComponent> components;
  int k_opt = 0;
  std::vector<BicEntry> bic_curve;
  double log_likelihood = 0.0;
};

// The six pairwise features, in canonical order DC, DSR, DD, SD, ED, AC.
struct PairFeatures {
  double dc = 0.0;
  double dsr = 0.0;
  double dd = 0.0;
  double sd = 0.0;
  double ed = 0.0;
  double ac = 0.0;
  std::array<std::size_t, 2> pair{0, 0};

  friend bool operator==(const PairFeatures&, const PairFeatures&) = default;
};

struct PairAmbiguity {
  std::array<std::size_t, 2> pair{0, 0};
  double separability = 0.0;
  double ambiguity = 0.0;
  PairFeatures features;
};

struct AmbiguityReport {
  double score = 0.0;
  std::vector<PairAmbiguity> pairs;
  Decomposition decomposition;
};

// Cluster labels aligned to scatterplot point order; -1 marks a point that
// was left unassigned.
class Clustering {
 public:
  Clustering() = default;
  explicit Clustering(std::vector<int> labels);

  const std::vector<int>& labels() const noexcept { return labels_; }
  std::size_t size() const noexcept { return labels_.size(); }
  int operator[](std::size_t i) const noexcept { return labels_[i]; }

  // Number of distinct labels >= 0.
  std::size_t cluster_count() const;

 private:
  std::vector<int> labels_;
};

// Relabels clusters 0, 1, ... in order of first appearance; -1 is kept.
Clustering canonical_labels(std::span<const int> labels);

}  // namespace clams
