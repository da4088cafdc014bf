#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <map>

#include "clams/datagen.hpp"
#include "clams/errors.hpp"
#include "support/fixtures.hpp"

namespace clams {
namespace {

using testing::TempDir;

PairSpec unit_pair(int n1, int n2, Point second = {0, 0}) {
  return {{{0, 0}, 1, 1, 0, n1}, {second, 1, 1, 0, n2}};
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no clams::Error thrown";
  return ErrorCode::InvalidArgument;
}

TEST(SamplePair, MeanWithinThreeStandardErrors) {
  const Scatterplot p = sample_pair(unit_pair(100, 100), 1);
  ASSERT_EQ(p.size(), 200u);
  double mx = 0, my = 0;
  for (const Point& q : p.points()) {
    mx += q.x;
    my += q.y;
  }
  EXPECT_LT(std::hypot(mx / 200, my / 200), 0.35);
}

TEST(SamplePair, ExactCountsAndDeterminism) {
  EXPECT_EQ(sample_pair(unit_pair(10, 10), 2).size(), 20u);
  EXPECT_EQ(sample_pair(unit_pair(37, 12), 3).points(), sample_pair(unit_pair(37, 12), 3).points());
  EXPECT_NE(sample_pair(unit_pair(37, 12), 3).points(), sample_pair(unit_pair(37, 12), 4).points());
  EXPECT_THROW(sample_pair(unit_pair(9, 10), 1), Error);
}

TEST(SamplePair, ComponentsKeepTheirShape) {
  PairSpec spec{{{0, 0}, 3.0, 1.0, 0.0, 4000}, {{50, 0}, 1, 1, 0, 10}};
  const Scatterplot p = sample_pair(spec, 5);
  double sxx = 0, syy = 0;
  for (int i = 0; i < 4000; ++i) {
    sxx += p[i].x * p[i].x;
    syy += p[i].y * p[i].y;
  }
  EXPECT_NEAR(std::sqrt(sxx / 4000), 3.0, 0.1);
  EXPECT_NEAR(std::sqrt(syy / 4000), 1.0, 0.05);
}

TEST(TrainingSet, RowsAndLabelsInRange) {
  TrainingSetOptions opts;
  opts.mc_samples = 200;
  const TrainingSet t = generate_training_set(1000, PairRanges{}, opts, 6);
  ASSERT_EQ(t.rows.size(), 1000u);
  EXPECT_EQ(t.provenance, Provenance::SyntheticSurrogate);
  for (const auto& r : t.rows) {
    EXPECT_GE(r.label, 0.0);
    EXPECT_LE(r.label, 1.0);
  }
}

TEST(TrainingSet, IdenticalOverlappingComponentsLabelNearZero) {
  PairRanges r;
  r.distance_min = r.distance_max = 0.0;
  r.sd_min = r.sd_max = 1.0;
  r.ellipticity_min = r.ellipticity_max = 1.0;
  r.angle_min = r.angle_max = 0.0;
  r.count_min = r.count_max = 100;
  TrainingSetOptions opts;
  opts.mc_samples = 2000;
  for (const auto& row : generate_training_set(30, r, opts, 7).rows) EXPECT_NEAR(row.label, 0.0, 0.05);
}

TEST(TrainingSet, DistantComponentsLabelNearOne) {
  PairRanges r;
  r.sd_min = 0.5;
  r.sd_max = 1.0;
  r.distance_min = 20.0;
  r.distance_max = 30.0;
  TrainingSetOptions opts;
  opts.mc_samples = 500;
  for (const auto& row : generate_training_set(30, r, opts, 8).rows) EXPECT_GE(row.label, 0.99);
}

TEST(TrainingSet, LabelsMatchRecomputedSurrogate) {
  TrainingSetOptions opts;
  opts.mc_samples = 300;
  const std::uint64_t seed = 9;
  const TrainingSet t = generate_training_set(25, PairRanges{}, opts, seed);
  const auto specs = draw_pair_specs(25, PairRanges{}, seed);
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const auto [c1, c2] = spec_components(specs[i]);
    EXPECT_EQ(t.rows[i].label, surrogate_separability(c1, c2, opts.mc_samples, pair_label_seed(seed, i)));
    PairFeatures f = pair_features(c1, c2);
    f.pair = {0, 1};
    EXPECT_EQ(t.rows[i].features, f);
  }
}

TEST(TrainingSet, RefitPathProducesFeaturesNearTruth) {
  TrainingSetOptions opts;
  opts.mc_samples = 200;
  opts.refit = true;
  PairRanges r;
  r.distance_min = 15;
  r.distance_max = 20;
  r.count_min = 300;
  r.count_max = 400;
  const TrainingSet t = generate_training_set(20, r, opts, 10);
  const auto specs = draw_pair_specs(20, r, 10);
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const auto [c1, c2] = spec_components(specs[i]);
    EXPECT_NEAR(t.rows[i].features.dc, pair_features(c1, c2).dc, 0.5);
  }
}

TEST(TrainingSet, TooFewPairs) {
  EXPECT_EQ(code_of([] { generate_training_set(19, PairRanges{}, {}, 1); }), ErrorCode::TooFewRows);
}

TEST(Scene, SingleComponentHasOneLabel) {
  SceneSpec spec;
  spec.k = 1;
  const Scene s = generate_scene(spec);
  EXPECT_EQ(s.labels.cluster_count(), 1u);
  for (int l : s.labels.labels()) EXPECT_EQ(l, 0);
}

TEST(Scene, CornersWithExactCounts) {
  SceneSpec spec;
  spec.k = 4;
  spec.centers = testing::square_corners(20);
  spec.count_min = 150;
  spec.count_max = 150;
  spec.seed = 11;
  const Scene s = generate_scene(spec);
  EXPECT_EQ(s.labels.cluster_count(), 4u);
  std::map<int, int> counts;
  for (int l : s.labels.labels()) ++counts[l];
  for (const auto& [label, n] : counts) EXPECT_EQ(n, 150) << label;
  EXPECT_EQ(s.plot.size(), s.labels.size());
  for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(s.components[j].center, spec.centers[j]);
}

TEST(Scene, DeterministicAndCountsSumToSize) {
  SceneSpec spec;
  spec.k = 5;
  spec.seed = 12;
  const Scene a = generate_scene(spec);
  const Scene b = generate_scene(spec);
  EXPECT_EQ(a.plot.points(), b.plot.points());
  EXPECT_EQ(a.labels.labels(), b.labels.labels());
  int total = 0;
  for (const auto& c : a.components) total += c.count;
  EXPECT_EQ(static_cast<std::size_t>(total), a.plot.size());
  spec.k = 0;
  EXPECT_THROW(generate_scene(spec), Error);
}

class Ingest : public ::testing::Test {
 protected:
  void write(const std::string& name, const std::string& text) { std::ofstream(dir_ / name) << text; }
  TempDir dir_{"ingest"};
};

TEST_F(Ingest, ReadsRowsInParamsOrder) {
  write("p.csv",
        "id,mx1,my1,a1,b1,theta1,n1,mx2,my2,a2,b2,theta2,n2\n"
        "b,0,0,1,1,0,100,3,4,1,1,0,100\n"
        "a,0,0,2,1,0,50,0,0,2,1,0,50\n");
  write("s.csv", "id,separability\na,0.1\nb,0.9\n");
  const TrainingSet t = ingest_clustme(dir_ / "p.csv", dir_ / "s.csv");
  EXPECT_EQ(t.provenance, Provenance::ClustMe);
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[0].label, 0.9);
  EXPECT_DOUBLE_EQ(t.rows[0].features.dc, 5.0);
  EXPECT_EQ(t.rows[1].label, 0.1);
  EXPECT_EQ(t.rows[1].features.dc, 0.0);
}

TEST_F(Ingest, ThousandRows) {
  std::string p = "id,mx1,my1,a1,b1,theta1,n1,mx2,my2,a2,b2,theta2,n2\n";
  std::string s = "id,separability\n";
  for (int i = 0; i < 1000; ++i) {
    p += "r" + std::to_string(i) + ",0,0,1,0.5,0.3,100," + std::to_string(i % 7) + ",1,1.5,1,1.2,80\n";
    s += "r" + std::to_string(i) + "," + std::to_string((i % 11) / 10.0) + "\n";
  }
  write("p.csv", p);
  write("s.csv", s);
  EXPECT_EQ(ingest_clustme(dir_ / "p.csv", dir_ / "s.csv").rows.size(), 1000u);
}

TEST_F(Ingest, ScoreOutOfRangeNamesTheLine) {
  write("p.csv", "id,mx1,my1,a1,b1,theta1,n1,mx2,my2,a2,b2,theta2,n2\na,0,0,1,1,0,10,1,1,1,1,0,10\n");
  write("s.csv", "id,separability\na,0.5\nb,1.2\n");
  try {
    ingest_clustme(dir_ / "p.csv", dir_ / "s.csv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::RangeError);
    EXPECT_NE(std::string(e.what()).find(":3"), std::string::npos) << e.what();
  }
}

TEST_F(Ingest, HeaderMismatchIsAParseError) {
  write("p.csv", "id,x,y\n");
  write("s.csv", "id,separability\n");
  EXPECT_EQ(code_of([&] { ingest_clustme(dir_ / "p.csv", dir_ / "s.csv"); }), ErrorCode::ParseError);
  write("s.csv", "name,score\n");
  EXPECT_EQ(code_of([&] { ingest_clustme(dir_ / "p.csv", dir_ / "s.csv"); }), ErrorCode::ParseError);
}

TEST_F(Ingest, BadRowsAreParseErrors) {
  write("s.csv", "id,separability\na,0.5\n");
  write("p.csv", "id,mx1,my1,a1,b1,theta1,n1,mx2,my2,a2,b2,theta2,n2\na,0,0,1,1,0,10,1,1,1,1,0\n");
  EXPECT_EQ(code_of([&] { ingest_clustme(dir_ / "p.csv", dir_ / "s.csv"); }), ErrorCode::ParseError);
  write("p.csv", "id,mx1,my1,a1,b1,theta1,n1,mx2,my2,a2,b2,theta2,n2\na,0,0,1,x,0,10,1,1,1,1,0,10\n");
  EXPECT_EQ(code_of([&] { ingest_clustme(dir_ / "p.csv", dir_ / "s.csv"); }), ErrorCode::ParseError);
  write("p.csv", "id,mx1,my1,a1,b1,theta1,n1,mx2,my2,a2,b2,theta2,n2\nzz,0,0,1,1,0,10,1,1,1,1,0,10\n");
  EXPECT_EQ(code_of([&] { ingest_clustme(dir_ / "p.csv", dir_ / "s.csv"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([&] { ingest_clustme(dir_ / "none.csv", dir_ / "s.csv"); }), ErrorCode::IoError);
}

}  // namespace
}  // namespace clams
