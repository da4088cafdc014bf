#include "clams/features.hpp"

#include <cmath>
#include <numbers>

#include "clams/errors.hpp"

namespace clams {

const char* feature_name(Feature f) noexcept {
  switch (f) {
    case Feature::Dc: return "dc";
    case Feature::Dsr: return "dsr";
    case Feature::Dd: return "dd";
    case Feature::Sd: return "sd";
    case Feature::Ed: return "ed";
    case Feature::Ac: return "ac";
  }
  return "?";
}

Feature feature_from_name(const std::string& name) {
  for (Feature f : kAllFeatures) {
    if (name == feature_name(f)) return f;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown feature '" + name + "'");
}

double feature_value(const PairFeatures& f, Feature which) noexcept {
  switch (which) {
    case Feature::Dc: return f.dc;
    case Feature::Dsr: return f.dsr;
    case Feature::Dd: return f.dd;
    case Feature::Sd: return f.sd;
    case Feature::Ed: return f.ed;
    case Feature::Ac: return f.ac;
  }
  return 0.0;
}

FeatureMask FeatureMask::only(Feature f) {
  FeatureMask m{{false, false, false, false, false, false}};
  m.enabled[static_cast<std::size_t>(f)] = true;
  return m;
}

FeatureMask FeatureMask::without(Feature f) const {
  FeatureMask m = *this;
  m.enabled[static_cast<std::size_t>(f)] = false;
  return m;
}

std::size_t FeatureMask::count() const noexcept {
  std::size_t n = 0;
  for (bool b : enabled) n += b ? 1 : 0;
  return n;
}

std::vector<Feature> FeatureMask::features() const {
  std::vector<Feature> out;
  for (Feature f : kAllFeatures) {
    if (has(f)) out.push_back(f);
  }
  return out;
}

std::string FeatureMask::to_string() const {
  std::string out;
  for (Feature f : features()) {
    if (!out.empty()) out += ',';
    out += feature_name(f);
  }
  return out;
}

double size_of(const GaussianComponent& c) noexcept {
  return std::hypot(c.major_sd(), c.minor_sd());
}

PairFeatures pair_features(const GaussianComponent& c1, const GaussianComponent& c2) {
  if (c1.minor_sd() == 0.0 || c2.minor_sd() == 0.0) {
    throw Error(ErrorCode::DegenerateComponent, "minor axis of zero length");
  }
  const double size1 = size_of(c1);
  const double size2 = size_of(c2);
  const double density1 = c1.soft_count() / (2.0 * c1.major_sd() * c1.minor_sd());
  const double density2 = c2.soft_count() / (2.0 * c2.major_sd() * c2.minor_sd());
  const double delta = std::abs(c1.angle() - c2.angle());

  PairFeatures f;
  f.dc = std::hypot(c1.center().x - c2.center().x, c1.center().y - c2.center().y);
  f.dsr = f.dc / (size1 + size2);
  f.dd = std::abs(density1 - density2);
  f.sd = std::abs(size1 - size2);
  f.ed = std::abs(c1.major_sd() / c1.minor_sd() - c2.major_sd() / c2.minor_sd());
  f.ac = std::min(delta, 2.0 * std::numbers::pi - delta);
  return f;
}

std::vector<double> feature_vector(const PairFeatures& f, const FeatureMask& mask) {
  if (mask.count() == 0) throw Error(ErrorCode::InvalidArgument, "feature mask enables nothing");
  std::vector<double> out;
  out.reserve(mask.count());
  for (Feature which : kAllFeatures) {
    if (mask.has(which)) out.push_back(feature_value(f, which));
  }
  return out;
}

}  // namespace clams
