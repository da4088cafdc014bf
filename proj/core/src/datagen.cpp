#include "clams/datagen.hpp"

#include <cmath>
#include <map>
#include <numbers>

#include "clams/errors.hpp"
#include "clams/features.hpp"
#include "clams/gmm.hpp"
#include "clams/io.hpp"
#include "clams/random.hpp"

namespace clams {

namespace {

void check_component(const ComponentSpec& c, int min_count) {
  if (!(c.major_sd > 0.0) || !(c.minor_sd > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "component standard deviations must be positive");
  }
  if (c.count < min_count) {
    throw Error(ErrorCode::InvalidArgument,
                "component count must be >= " + std::to_string(min_count));
  }
}

void append_samples(const ComponentSpec& c, Rng& rng, std::vector<Point>& out) {
  const double cs = std::cos(c.angle);
  const double sn = std::sin(c.angle);
  for (int i = 0; i < c.count; ++i) {
    const double u = c.major_sd * rng.normal();
    const double v = c.minor_sd * rng.normal();
    out.push_back({c.center.x + cs * u - sn * v, c.center.y + sn * u + cs * v});
  }
}

GaussianComponent to_component(const ComponentSpec& c, double weight) {
  return GaussianComponent::from_axes(c.center, c.major_sd, c.minor_sd, c.angle, c.count, weight);
}

}  // namespace

void PairSpec::validate() const {
  check_component(first, 10);
  check_component(second, 10);
}

Scatterplot sample_pair(const PairSpec& spec, std::uint64_t seed) {
  spec.validate();
  Rng rng(seed);
  std::vector<Point> points;
  points.reserve(spec.first.count + spec.second.count);
  append_samples(spec.first, rng, points);
  append_samples(spec.second, rng, points);
  return validate_scatterplot(std::move(points), "pair");
}

void PairRanges::validate() const {
  const bool ok = distance_min >= 0.0 && distance_max >= distance_min && sd_min > 0.0 &&
                  sd_max >= sd_min && ellipticity_min >= 1.0 &&
                  ellipticity_max >= ellipticity_min && angle_max >= angle_min &&
                  count_min >= 10 && count_max >= count_min;
  if (!ok) throw Error(ErrorCode::InvalidArgument, "pair ranges are empty or out of bounds");
}

std::vector<PairSpec> draw_pair_specs(int n_pairs, const PairRanges& ranges, std::uint64_t seed) {
  ranges.validate();
  if (n_pairs < 1) throw Error(ErrorCode::InvalidArgument, "n_pairs must be positive");
  std::vector<PairSpec> specs;
  specs.reserve(n_pairs);
  for (int i = 0; i < n_pairs; ++i) {
    Rng rng(derive_seed(seed, 2 * static_cast<std::uint64_t>(i)));
    auto component = [&](Point center) {
      ComponentSpec c;
      c.center = center;
      c.major_sd = rng.uniform(ranges.sd_min, ranges.sd_max);
      c.minor_sd = c.major_sd / rng.uniform(ranges.ellipticity_min, ranges.ellipticity_max);
      c.angle = rng.uniform(ranges.angle_min, ranges.angle_max);
      c.count = ranges.count_min +
                static_cast<int>(rng.below(static_cast<std::uint64_t>(ranges.count_max - ranges.count_min + 1)));
      return c;
    };
    PairSpec spec;
    spec.first = component({0.0, 0.0});
    const double distance = rng.uniform(ranges.distance_min, ranges.distance_max);
    const double direction = rng.uniform(0.0, 2.0 * std::numbers::pi);
    spec.second = component({distance * std::cos(direction), distance * std::sin(direction)});
    specs.push_back(spec);
  }
  return specs;
}

std::uint64_t pair_label_seed(std::uint64_t seed, std::size_t i) noexcept {
  return derive_seed(seed, 2 * static_cast<std::uint64_t>(i) + 1);
}

std::pair<GaussianComponent, GaussianComponent> spec_components(const PairSpec& spec) {
  spec.validate();
  const double total = spec.first.count + spec.second.count;
  return {to_component(spec.first, spec.first.count / total),
          to_component(spec.second, spec.second.count / total)};
}

TrainingSet generate_training_set(int n_pairs, const PairRanges& ranges,
                                  const TrainingSetOptions& options, std::uint64_t seed) {
  if (n_pairs < 20) throw Error(ErrorCode::TooFewRows, "n_pairs must be >= 20");
  const std::vector<PairSpec> specs = draw_pair_specs(n_pairs, ranges, seed);
  TrainingSet data;
  data.provenance = Provenance::SyntheticSurrogate;
  data.rows.reserve(specs.size());
  GmmFitConfig refit_cfg;
  refit_cfg.restarts = 3;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const auto [c1, c2] = spec_components(specs[i]);
    LabeledPair row;
    row.label = surrogate_separability(c1, c2, options.mc_samples, pair_label_seed(seed, i));
    if (options.refit) {
      refit_cfg.seed = derive_seed(seed, 0x5eed0000 + i);
      const Scatterplot plot = sample_pair(specs[i], refit_cfg.seed);
      const GmmFit fit = fit_gmm(plot, 2, refit_cfg);
      row.features = pair_features(fit.components[0], fit.components[1]);
    } else {
      row.features = pair_features(c1, c2);
    }
    row.features.pair = {0, 1};
    data.rows.push_back(row);
  }
  return data;
}

void SceneSpec::validate() const {
  const bool ok = k >= 1 && center_max >= center_min && sd_min > 0.0 && sd_max >= sd_min &&
                  ellipticity_min >= 1.0 && ellipticity_max >= ellipticity_min && count_min >= 1 &&
                  count_max >= count_min &&
                  (centers.empty() || centers.size() == static_cast<std::size_t>(k));
  if (!ok) throw Error(ErrorCode::InvalidArgument, "scene spec ranges are empty or inconsistent");
}

Scene generate_scene(const SceneSpec& spec) {
  spec.validate();
  Rng rng(derive_seed(spec.seed, 0));
  std::vector<ComponentSpec> comps;
  comps.reserve(spec.k);
  for (int j = 0; j < spec.k; ++j) {
    ComponentSpec c;
    if (spec.centers.empty()) {
      c.center = {rng.uniform(spec.center_min, spec.center_max),
                  rng.uniform(spec.center_min, spec.center_max)};
    } else {
      c.center = spec.centers[j];
    }
    c.major_sd = rng.uniform(spec.sd_min, spec.sd_max);
    c.minor_sd = c.major_sd / rng.uniform(spec.ellipticity_min, spec.ellipticity_max);
    c.angle = rng.uniform(0.0, std::numbers::pi);
    c.count = spec.count_min +
              static_cast<int>(rng.below(static_cast<std::uint64_t>(spec.count_max - spec.count_min + 1)));
    comps.push_back(c);
  }
  return sample_components(comps, derive_seed(spec.seed, 1), spec.id);
}

Scene sample_components(const std::vector<ComponentSpec>& components, std::uint64_t seed,
                        std::string id) {
  if (components.empty()) throw Error(ErrorCode::InvalidArgument, "no components to sample");
  Rng rng(seed);
  std::vector<Point> points;
  std::vector<int> labels;
  for (std::size_t j = 0; j < components.size(); ++j) {
    check_component(components[j], 1);
    append_samples(components[j], rng, points);
    labels.insert(labels.end(), components[j].count, static_cast<int>(j));
  }
  return Scene{validate_scatterplot(std::move(points), std::move(id)), Clustering(std::move(labels)),
               components};
}

TrainingSet ingest_clustme(const std::filesystem::path& params_csv,
                           const std::filesystem::path& scores_csv) {
  std::map<std::string, std::pair<double, std::size_t>> scores;
  {
    CsvReader csv(scores_csv);
    csv.expect_header({"id", "separability"});
    std::vector<std::string> f;
    while (csv.next(f)) {
      if (f.size() != 2) csv.fail("expected 2 fields, got " + std::to_string(f.size()));
      const double s = csv.number(f[1]);
      if (!(s >= 0.0 && s <= 1.0)) {
        throw Error(ErrorCode::RangeError, scores_csv.string() + ":" + std::to_string(csv.line()) +
                                               ": separability " + f[1] + " outside [0, 1]");
      }
      if (!scores.emplace(f[0], std::make_pair(s, csv.line())).second) {
        csv.fail("duplicate id '" + f[0] + "'");
      }
    }
  }

  TrainingSet data;
  data.provenance = Provenance::ClustMe;
  CsvReader csv(params_csv);
  csv.expect_header({"id", "mx1", "my1", "a1", "b1", "theta1", "n1", "mx2", "my2", "a2", "b2",
                     "theta2", "n2"});
  std::vector<std::string> f;
  while (csv.next(f)) {
    if (f.size() != 13) csv.fail("expected 13 fields, got " + std::to_string(f.size()));
    const auto it = scores.find(f[0]);
    if (it == scores.end()) csv.fail("id '" + f[0] + "' has no separability score");
    auto component = [&](std::size_t at) {
      const double n1 = csv.number(f[at + 5]);
      try {
        return GaussianComponent::from_axes({csv.number(f[at]), csv.number(f[at + 1])},
                                            csv.number(f[at + 2]), csv.number(f[at + 3]),
                                            csv.number(f[at + 4]), n1, 1.0);
      } catch (const Error& e) {
        csv.fail(e.what());
      }
    };
    LabeledPair row;
    row.features = pair_features(component(1), component(7));
    row.features.pair = {0, 1};
    row.label = it->second.first;
    data.rows.push_back(row);
  }
  return data;
}

}  // namespace clams
