#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "clams/ambiguity.hpp"
#include "clams/errors.hpp"
#include "clams/random.hpp"
#include "support/fixtures.hpp"

namespace clams {
namespace {

using testing::blobs;

const SeparabilityModel& model() {
  static const SeparabilityModel m = testing::surrogate_model();
  return m;
}

SeparabilityModel constant_model(double value) {
  TreeEnsemble e;
  e.base_score = value;
  return SeparabilityModel(e, FeatureMask::standard(), {});
}

GmmFitConfig quick_cfg(std::uint64_t seed = 3) {
  GmmFitConfig cfg;
  cfg.k_max = 10;
  cfg.restarts = 3;
  cfg.seed = seed;
  return cfg;
}

TEST(EntropyAmbiguity, Examples) {
  EXPECT_EQ(entropy_ambiguity(0.0), 0.0);
  EXPECT_EQ(entropy_ambiguity(1.0), 0.0);
  EXPECT_DOUBLE_EQ(entropy_ambiguity(0.5), 1.0);
  const double oracle = -0.25 * std::log2(0.25) - 0.75 * std::log2(0.75);
  EXPECT_NEAR(entropy_ambiguity(0.25), oracle, 1e-15);
  EXPECT_NEAR(entropy_ambiguity(0.25), 0.811278, 1e-6);
}

TEST(EntropyAmbiguity, RejectsOutOfRange) {
  for (double s : {-1e-9, 1.0 + 1e-9, std::nan("")}) {
    try {
      entropy_ambiguity(s);
      FAIL() << s;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::OutOfRange);
    }
  }
}

TEST(EntropyAmbiguity, SymmetricBoundedAndConcave) {
  Rng rng(1);
  for (int i = 0; i < 5000; ++i) {
    const double s = rng.uniform();
    const double t = rng.uniform();
    const double a = entropy_ambiguity(s);
    EXPECT_NEAR(a, entropy_ambiguity(1.0 - s), 1e-12);
    EXPECT_GE(a, 0.0);
    EXPECT_LE(a, 1.0);
    EXPECT_GE(entropy_ambiguity(0.5 * (s + t)), 0.5 * (a + entropy_ambiguity(t)) - 1e-12);
  }
}

TEST(ScoreDecomposition, SingleComponentScoresZero) {
  Decomposition d;
  d.k_opt = 1;
  d.components.push_back(GaussianComponent::from_axes({0, 0}, 1, 1, 0, 100, 1));
  const AmbiguityReport r = score_decomposition(d, model());
  EXPECT_EQ(r.score, 0.0);
  EXPECT_TRUE(r.pairs.empty());
}

TEST(ScoreDecomposition, TwoComponentsScoreTheirPair) {
  Decomposition d;
  d.k_opt = 2;
  d.components.push_back(GaussianComponent::from_axes({0, 0}, 1, 1, 0, 100, 0.5));
  d.components.push_back(GaussianComponent::from_axes({2.5, 0}, 1, 1, 0, 100, 0.5));
  const AmbiguityReport r = score_decomposition(d, model());
  ASSERT_EQ(r.pairs.size(), 1u);
  const double s = model().predict(pair_features(d.components[0], d.components[1]));
  EXPECT_EQ(r.pairs[0].separability, s);
  EXPECT_EQ(r.score, entropy_ambiguity(s));
}

TEST(ScoreDecomposition, ScoreIsTheMeanOfPairs) {
  Decomposition d;
  Rng rng(2);
  for (int i = 0; i < 5; ++i) {
    d.components.push_back(GaussianComponent::from_axes({rng.uniform(-6, 6), rng.uniform(-6, 6)},
                                                        rng.uniform(0.5, 2), rng.uniform(0.3, 0.5),
                                                        rng.uniform(0, 3), 100, 0.2));
  }
  d.k_opt = 5;
  const AmbiguityReport r = score_decomposition(d, model());
  ASSERT_EQ(r.pairs.size(), 10u);
  double sum = 0.0;
  for (const auto& p : r.pairs) {
    sum += p.ambiguity;
    EXPECT_LT(p.pair[0], p.pair[1]);
    EXPECT_EQ(p.ambiguity, entropy_ambiguity(p.separability));
  }
  EXPECT_NEAR(r.score, sum / 10.0, 1e-12);
  EXPECT_GE(r.score, 0.0);
  EXPECT_LE(r.score, 1.0);
}

TEST(ScoreDecomposition, ConstantHalfModelGivesMaximalAmbiguity) {
  Decomposition d;
  d.components.push_back(GaussianComponent::from_axes({0, 0}, 1, 1, 0, 100, 0.5));
  d.components.push_back(GaussianComponent::from_axes({9, 0}, 1, 1, 0, 100, 0.5));
  d.components.push_back(GaussianComponent::from_axes({0, 9}, 1, 1, 0, 100, 0.5));
  EXPECT_DOUBLE_EQ(score_decomposition(d, constant_model(0.5)).score, 1.0);
  EXPECT_EQ(score_decomposition(d, constant_model(1.0)).score, 0.0);
}

TEST(CanonicalOrder, SortsByCoordinatesThenIndex) {
  const Scatterplot p = validate_scatterplot({{1, 2}, {0, 5}, {1, 1}, {0, 5}}, "p");
  const Scatterplot c = canonical_order(p);
  EXPECT_EQ(c.points(), (std::vector<Point>{{0, 5}, {0, 5}, {1, 1}, {1, 2}}));
  EXPECT_EQ(c.id(), "p");
}

TEST(ClamsScore, InvariantToRowOrder) {
  const Scene s = blobs({{0, 0}, {3, 0}, {1.5, 2.5}}, 1.0, 120, 4);
  std::vector<Point> shuffled = s.plot.points();
  Rng rng(5);
  rng.shuffle(shuffled);
  const AmbiguityReport a = clams_score(s.plot, model(), quick_cfg());
  const AmbiguityReport b = clams_score(validate_scatterplot(shuffled), model(), quick_cfg());
  EXPECT_EQ(a.score, b.score);
  EXPECT_EQ(a.decomposition.k_opt, b.decomposition.k_opt);
}

TEST(ClamsScore, SeparatedBlobsScoreLowerThanOverlapping) {
  auto line = [](double spacing) {
    return std::vector<Point>{{0, 0}, {spacing, 0}, {2 * spacing, 0}};
  };
  const Scene far = blobs(line(20.0), 1.0, 800, 6);
  const Scene near = blobs(line(2.0), 1.0, 800, 6);
  const AmbiguityReport a = clams_score(far.plot, model(), quick_cfg(6));
  const AmbiguityReport b = clams_score(near.plot, model(), quick_cfg(6));
  EXPECT_EQ(a.decomposition.k_opt, 3);
  EXPECT_LT(a.score, b.score);
  for (const AmbiguityReport* r : {&a, &b}) {
    double sum = 0.0;
    for (const auto& p : r->pairs) sum += p.ambiguity;
    const double mean = r->pairs.empty() ? 0.0 : sum / static_cast<double>(r->pairs.size());
    EXPECT_NEAR(r->score, mean, 1e-12);
  }
}

}  // namespace
}  // namespace clams
