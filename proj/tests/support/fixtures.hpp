#pragma once

#include <atomic>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <string>
#include <vector>

#include <unistd.h>

#include "clams/datagen.hpp"
#include "clams/random.hpp"
#include "clams/separability.hpp"

namespace clams::testing {

// k isotropic blobs of unit-free sd `sd`, `count` points each, at the given centers.
inline Scene blobs(const std::vector<Point>& centers, double sd, int count, std::uint64_t seed,
                   const std::string& id = "blobs") {
  std::vector<ComponentSpec> comps;
  for (const Point& c : centers) comps.push_back({c, sd, sd, 0.0, count});
  return sample_components(comps, seed, id);
}

// Corners of a square with the given side, starting at the origin.
inline std::vector<Point> square_corners(double side) {
  return {{0.0, 0.0}, {side, 0.0}, {0.0, side}, {side, side}};
}

// k centers on a circle so that neighbors are `spacing` apart, rotated by phase.
inline std::vector<Point> ring(int k, double spacing, double phase = 0.0) {
  const double radius = spacing / (2.0 * std::sin(std::numbers::pi / k));
  std::vector<Point> out;
  for (int i = 0; i < k; ++i) {
    const double a = phase + 2.0 * std::numbers::pi * i / k;
    out.push_back({radius * std::cos(a), radius * std::sin(a)});
  }
  return out;
}

// Regressor trained on surrogate labels with default ranges.
inline SeparabilityModel surrogate_model(int n_pairs = 2000, std::uint64_t seed = 11,
                                         int mc_samples = 1000) {
  TrainingSetOptions opts;
  opts.mc_samples = mc_samples;
  const TrainingSet data = generate_training_set(n_pairs, PairRanges{}, opts, seed);
  TrainConfig cfg;
  cfg.seed = seed;
  return train(data, cfg);
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("clams_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace clams::testing
