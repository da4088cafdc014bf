#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "clams/boosting.hpp"
#include "clams/features.hpp"
#include "clams/types.hpp"

namespace clams {

inline constexpr int kModelFormatVersion = 1;

// Where training labels came from. Surrogate-trained models must never be
// presented as models of human perception.
enum class Provenance { ClustMe, SyntheticSurrogate, External };

const char* to_string(Provenance p) noexcept;
Provenance provenance_from_string(const std::string& s);

struct LabeledPair {
  PairFeatures features;
  double label = 0.0;  // separability in [0, 1]
};

struct TrainingSet {
  std::vector<LabeledPair> rows;
  Provenance provenance = Provenance::External;

  // Labels in [0, 1] (RangeError); at least 20 rows (TooFewRows).
  void validate() const;
};

struct TrainConfig {
  int n_trees = 300;
  int max_depth = 3;
  double learning_rate = 0.05;
  double subsample = 0.8;
  int min_leaf = 5;
  int cv_folds = 5;
  std::uint64_t seed = 0;

  void validate() const;
  BoostingParams boosting() const;
};

struct TrainingMeta {
  Provenance provenance = Provenance::External;
  double cv_r2 = 0.0;
  std::uint64_t seed = 0;
};

// Regressor from pair features to separability. Immutable once built.
class SeparabilityModel {
 public:
  // Throws InvalidArgument when a tree references a feature outside the mask.
  SeparabilityModel(TreeEnsemble ensemble, FeatureMask mask, TrainingMeta meta);

  // Separability in [0, 1].
  double predict(const PairFeatures& f) const;
  double predict_raw(std::span<const double> masked_features) const noexcept {
    return ensemble_.predict_raw(masked_features);
  }

  const TreeEnsemble& ensemble() const noexcept { return ensemble_; }
  const FeatureMask& mask() const noexcept { return mask_; }
  const TrainingMeta& meta() const noexcept { return meta_; }

 private:
  TreeEnsemble ensemble_;
  FeatureMask mask_;
  TrainingMeta meta_;
};

inline double predict(const SeparabilityModel& model, const PairFeatures& f) {
  return model.predict(f);
}

// Coefficient of determination; defined as 0 when the targets have zero variance.
double r_squared(std::span<const double> truth, std::span<const double> predicted);

// Mean R^2 over seeded, unstratified folds (out-of-fold predictions clamped to [0, 1]).
double cross_validate(const TrainingSet& data, const TrainConfig& cfg, const FeatureMask& mask);

// Fits on all rows; meta.cv_r2 comes from cross_validate with the same settings.
SeparabilityModel train(const TrainingSet& data, const TrainConfig& cfg,
                        const FeatureMask& mask = FeatureMask::standard());

// Picks n_trees in {100, 300} and max_depth in {2, 3, 4} by CV R^2.
TrainConfig select_by_cv(const TrainingSet& data, const TrainConfig& base, const FeatureMask& mask);

struct AblationRow {
  std::vector<Feature> removed;
  double r2 = 0.0;
  double change_percent = 0.0;  // relative to the full-mask R^2
};

struct AblationTable {
  double full_r2 = 0.0;
  std::vector<AblationRow> single;  // one per feature, canonical order
  std::vector<AblationRow> pairs;   // every unordered pair, canonical order
};

// Cross-validated R^2 with all six features, with each feature removed, and
// with each pair removed.
AblationTable ablate(const TrainingSet& data, const TrainConfig& cfg);

// Synthetic separability label: 1 - 2 * (Monte-Carlo misclassification rate
// of the two-component mixture under the count-weighted Bayes rule). Draws
// mc_samples points from each component; ties count as half an error.
double surrogate_separability(const GaussianComponent& c1, const GaussianComponent& c2,
                              int mc_samples, std::uint64_t seed);

std::string model_to_json(const SeparabilityModel& model);
SeparabilityModel model_from_json(const std::string& text);
void save_model(const SeparabilityModel& model, const std::filesystem::path& path);
SeparabilityModel load_model(const std::filesystem::path& path);

}  // namespace clams
