#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "clams/separability.hpp"
#include "clams/types.hpp"

namespace clams {

// Generating parameters of one Gaussian blob.
struct ComponentSpec {
  Point center;
  double major_sd = 1.0;
  double minor_sd = 1.0;
  double angle = 0.0;
  int count = 100;
};

struct PairSpec {
  ComponentSpec first;
  ComponentSpec second;

  // Counts >= 10 and positive standard deviations.
  void validate() const;
};

// Draws exactly first.count + second.count points; first component first.
Scatterplot sample_pair(const PairSpec& spec, std::uint64_t seed);

// Ranges for random pair specs. The first center sits at the origin and the
// second at a uniform distance in a uniform direction; features are
// invariant to rigid motion so nothing is lost.
struct PairRanges {
  double distance_min = 0.0;
  double distance_max = 8.0;
  double sd_min = 0.5;  // major-axis standard deviation
  double sd_max = 2.0;
  double ellipticity_min = 1.0;  // major / minor
  double ellipticity_max = 4.0;
  double angle_min = 0.0;
  double angle_max = 3.141592653589793;
  int count_min = 50;
  int count_max = 500;

  void validate() const;
};

std::vector<PairSpec> draw_pair_specs(int n_pairs, const PairRanges& ranges, std::uint64_t seed);

// Seed used for the Monte-Carlo label of pair i.
std::uint64_t pair_label_seed(std::uint64_t seed, std::size_t i) noexcept;

// Components with soft count = generating count and weight = count share.
std::pair<GaussianComponent, GaussianComponent> spec_components(const PairSpec& spec);

struct TrainingSetOptions {
  int mc_samples = 2000;
  // Compute features from a 2-component GMM refit of a sampled pair
  // instead of the generating parameters.
  bool refit = false;
};

// Surrogate-labeled training rows; provenance synthetic-surrogate.
TrainingSet generate_training_set(int n_pairs, const PairRanges& ranges,
                                  const TrainingSetOptions& options, std::uint64_t seed);

struct SceneSpec {
  int k = 3;
  double center_min = -20.0;  // center box, both axes
  double center_max = 20.0;
  double sd_min = 0.5;
  double sd_max = 2.0;
  double ellipticity_min = 1.0;
  double ellipticity_max = 3.0;
  int count_min = 100;
  int count_max = 300;
  // Optional fixed centers (size k) that override the center box.
  std::vector<Point> centers;
  std::uint64_t seed = 0;
  std::string id = "scene";

  void validate() const;
};

struct Scene {
  Scatterplot plot;
  Clustering labels;
  std::vector<ComponentSpec> components;
};

// Points of component i carry label i.
Scene generate_scene(const SceneSpec& spec);

// Samples the given components in order with per-point generating labels.
Scene sample_components(const std::vector<ComponentSpec>& components, std::uint64_t seed,
                        std::string id);

// Reads the ClustMe-style export:
//   params: id,mx1,my1,a1,b1,theta1,n1,mx2,my2,a2,b2,theta2,n2
//   scores: id,separability
// Rows are joined on id in params order. ParseError names file and line;
// a score outside [0, 1] raises RangeError naming the line.
TrainingSet ingest_clustme(const std::filesystem::path& params_csv,
                           const std::filesystem::path& scores_csv);

}  // namespace clams
