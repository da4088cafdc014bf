#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "clams/types.hpp"

namespace clams {

enum class Feature : std::size_t { Dc = 0, Dsr, Dd, Sd, Ed, Ac };

inline constexpr std::array<Feature, 6> kAllFeatures{Feature::Dc, Feature::Dsr, Feature::Dd,
                                                     Feature::Sd, Feature::Ed, Feature::Ac};

// Short lowercase name ("dc", "dsr", ...); also the CSV column name.
const char* feature_name(Feature f) noexcept;
Feature feature_from_name(const std::string& name);

double feature_value(const PairFeatures& f, Feature which) noexcept;

// Which of the six features reach the regressor.
struct FeatureMask {
  std::array<bool, 6> enabled{true, true, false, true, true, true};

  // DC, DSR, SD, ED, AC; density difference is left out.
  static FeatureMask standard() { return {}; }
  static FeatureMask all() { return {{true, true, true, true, true, true}}; }
  static FeatureMask only(Feature f);

  bool has(Feature f) const noexcept { return enabled[static_cast<std::size_t>(f)]; }
  FeatureMask without(Feature f) const;
  std::size_t count() const noexcept;
  std::vector<Feature> features() const;
  std::string to_string() const;

  friend bool operator==(const FeatureMask&, const FeatureMask&) = default;
};

// Root sum square of the two axis standard deviations.
double size_of(const GaussianComponent& c) noexcept;

// Throws DegenerateComponent if either minor axis is zero.
PairFeatures pair_features(const GaussianComponent& c1, const GaussianComponent& c2);

// Enabled features in canonical order. Throws InvalidArgument for an empty mask.
std::vector<double> feature_vector(const PairFeatures& f, const FeatureMask& mask);

}  // namespace clams
