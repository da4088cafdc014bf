#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "clams/gmm.hpp"
#include "clams/search.hpp"
#include "clams/separability.hpp"
#include "clams/types.hpp"

namespace clams {

// Rows are points; at least 2 columns and 2 rows, all values finite.
class HighDimDataset {
 public:
  static HighDimDataset from_rows(const std::vector<std::vector<double>>& rows);
  static HighDimDataset from_matrix(Eigen::MatrixXd data);

  const Eigen::MatrixXd& data() const noexcept { return data_; }
  std::size_t rows() const noexcept { return static_cast<std::size_t>(data_.rows()); }
  std::size_t dims() const noexcept { return static_cast<std::size_t>(data_.cols()); }

 private:
  explicit HighDimDataset(Eigen::MatrixXd data) : data_(std::move(data)) {}
  Eigen::MatrixXd data_;
};

class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual std::string name() const = 0;
  virtual ParamSpace space() const = 0;
  // Same (z, h, seed) must give the same embedding.
  virtual Scatterplot embed(const HighDimDataset& z, const HyperParams& h, std::uint64_t seed) const = 0;
};

class AccuracyMetric {
 public:
  virtual ~AccuracyMetric() = default;
  virtual std::string name() const = 0;
  // Value in [0, 1], deterministic.
  virtual double evaluate(const HighDimDataset& z, const Scatterplot& embedding) const = 0;
};

// Linear stand-in for a nonlinear embedder. Projects onto the top two
// principal components (signs fixed so the largest-magnitude loading is
// positive), scales each axis, pulls each point a fraction gamma toward its
// k-means centroid (k = floor(sqrt(N))), then adds Gaussian jitter whose sd
// is `jitter` times the sd of the first component.
// Hyperparameters: scale1, scale2 in [0.5, 2]; jitter in [0, 0.5]; gamma in [0, 1].
class ToyEmbedder final : public Embedder {
 public:
  std::string name() const override { return "toy-pca"; }
  ParamSpace space() const override;
  Scatterplot embed(const HighDimDataset& z, const HyperParams& h, std::uint64_t seed) const override;
};

// F1 of k-nearest-neighbor sets between the original data and the
// embedding (ties broken by index). Throws KTooLarge when k >= N.
class NeighborhoodF1 final : public AccuracyMetric {
 public:
  explicit NeighborhoodF1(int k = 10) : k_(k) {}
  std::string name() const override { return "neighborhood-f1"; }
  double evaluate(const HighDimDataset& z, const Scatterplot& embedding) const override;

 private:
  int k_;
};

// Indices of the k nearest neighbors of every row, excluding the row itself.
std::vector<std::vector<std::size_t>> knn_sets(const Eigen::MatrixXd& points, int k);

struct ReducerConfig {
  double tau = 0.05;
  int budget_phase1 = 40;
  int budget_phase2 = 80;
  std::uint64_t seed = 0;
  GmmFitConfig gmm;

  void validate() const;
  // Seed handed to every embed() call of one optimization run.
  std::uint64_t embed_seed() const noexcept;
};

// CLAMS score of embed(z, h) when its accuracy lies within tau of the
// accuracy of embed(z, h1) (boundary accepted); +inf otherwise.
double constrained_loss(const HyperParams& h, const HyperParams& h1, const HighDimDataset& z,
                        const Embedder& embedder, const AccuracyMetric& metric,
                        const SeparabilityModel& model, const ReducerConfig& cfg);

struct ReducerCandidate {
  int phase = 1;
  std::size_t index = 0;
  HyperParams params;
  double accuracy = 0.0;
  double loss = 0.0;  // phase 2 only; +inf when rejected
};

struct ReducerReport {
  HyperParams h1;
  HyperParams h2;
  Scatterplot intermediate;
  Scatterplot final_embedding;
  double accuracy_intermediate = 0.0;
  double accuracy_final = 0.0;
  double clams_intermediate = 0.0;
  double clams_final = 0.0;
  std::vector<ReducerCandidate> candidates;
};

// Phase 1 maximizes the accuracy metric over budget_phase1 draws; phase 2
// minimizes constrained_loss over h1 plus budget_phase2 - 1 further draws,
// ties resolved by candidate index.
ReducerReport optimize(const HighDimDataset& z, const Embedder& embedder, const AccuracyMetric& metric,
                       const SeparabilityModel& model, const ReducerConfig& cfg,
                       SearchStrategy* strategy = nullptr);

}  // namespace clams
