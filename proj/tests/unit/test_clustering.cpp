#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "clams/clustering.hpp"
#include "clams/errors.hpp"
#include "clams/evm.hpp"
#include "support/fixtures.hpp"

namespace clams {
namespace {

using testing::blobs;

double dist(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

// Textbook agglomeration: merge the closest pair of clusters until k remain,
// with cluster distance recomputed from scratch over all member pairs.
Clustering naive_agglomerative(const std::vector<Point>& pts, std::size_t k, Linkage linkage) {
  std::vector<std::vector<std::size_t>> clusters;
  for (std::size_t i = 0; i < pts.size(); ++i) clusters.push_back({i});
  auto linkage_distance = [&](const auto& a, const auto& b) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0, sum = 0;
    for (std::size_t i : a) {
      for (std::size_t j : b) {
        const double d = dist(pts[i], pts[j]);
        lo = std::min(lo, d);
        hi = std::max(hi, d);
        sum += d;
      }
    }
    switch (linkage) {
      case Linkage::Single: return lo;
      case Linkage::Complete: return hi;
      case Linkage::Average: return sum / static_cast<double>(a.size() * b.size());
    }
    return lo;
  };
  while (clusters.size() > k) {
    std::size_t bi = 0, bj = 1;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < clusters.size(); ++i) {
      for (std::size_t j = i + 1; j < clusters.size(); ++j) {
        const double d = linkage_distance(clusters[i], clusters[j]);
        if (d < best) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    }
    clusters[bi].insert(clusters[bi].end(), clusters[bj].begin(), clusters[bj].end());
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(bj));
  }
  std::vector<int> labels(pts.size());
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    for (std::size_t i : clusters[c]) labels[i] = static_cast<int>(c);
  }
  return canonical_labels(labels);
}

Scatterplot random_plot(std::uint64_t seed, std::size_t n) {
  Rng rng(seed);
  std::vector<Point> pts;
  for (std::size_t i = 0; i < n; ++i) pts.push_back({rng.uniform(0, 10), rng.uniform(0, 10)});
  return validate_scatterplot(pts);
}

double within_ss(const Scatterplot& plot, const KMeansResult& r) {
  double s = 0;
  for (std::size_t i = 0; i < plot.size(); ++i) {
    const Point& c = r.centroids[r.labels[i]];
    s += (plot[i].x - c.x) * (plot[i].x - c.x) + (plot[i].y - c.y) * (plot[i].y - c.y);
  }
  return s;
}

TEST(KMeans, RecoversSeparatedBlobs) {
  const Scene s = blobs({{0, 0}, {20, 0}}, 1.0, 100, 1);
  EXPECT_EQ(adjusted_rand(kmeans(s.plot, 2, 3), s.labels), 1.0);
}

TEST(KMeans, ObjectiveIsNonIncreasing) {
  const Scene s = blobs({{0, 0}, {3, 0}, {0, 3}, {3, 3}}, 1.0, 80, 2);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const KMeansResult r = kmeans_fit(s.plot.points(), 5, seed);
    for (std::size_t i = 1; i < r.objective_trace.size(); ++i) {
      EXPECT_LE(r.objective_trace[i], r.objective_trace[i - 1] * (1 + 1e-12));
    }
    EXPECT_NEAR(r.objective_trace.back(), within_ss(s.plot, r), 1e-6 * r.objective_trace.back());
  }
}

TEST(KMeans, DeterministicAndValidated) {
  const Scene s = blobs({{0, 0}, {5, 5}}, 1.0, 50, 3);
  EXPECT_EQ(kmeans(s.plot, 3, 7).labels(), kmeans(s.plot, 3, 7).labels());
  EXPECT_THROW(kmeans(s.plot, 1, 7), Error);
  EXPECT_THROW(kmeans(s.plot, 101, 7), Error);
}

TEST(KMeansPlusPlus, PicksDistinctFarCenters) {
  const Scene s = blobs({{0, 0}, {100, 0}, {0, 100}}, 0.1, 30, 4);
  Rng rng(5);
  const auto centers = kmeanspp_init(s.plot.points(), 3, rng);
  ASSERT_EQ(centers.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = i + 1; j < 3; ++j) EXPECT_GT(dist(centers[i], centers[j]), 50.0);
  }
}

TEST(Agglomerative, MatchesNaiveMergeForEveryLinkage) {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const Scatterplot plot = random_plot(seed, 40);
    for (Linkage l : {Linkage::Single, Linkage::Average, Linkage::Complete}) {
      for (std::size_t k : {1u, 2u, 3u, 5u, 9u}) {
        EXPECT_EQ(agglomerative(plot, static_cast<int>(k), l).labels(),
                  naive_agglomerative(plot.points(), k, l).labels())
            << to_string(l) << " k=" << k << " seed=" << seed;
      }
    }
  }
}

TEST(Agglomerative, ChainingSeparatesSingleFromComplete) {
  std::vector<Point> pts;
  std::vector<int> truth;
  Rng rng(6);
  for (int b = 0; b < 2; ++b) {
    for (int i = 0; i < 60; ++i) {
      pts.push_back({b * 12.0 + rng.normal(), rng.normal()});
      truth.push_back(b);
    }
  }
  // A dense bridge joins the blobs, so single linkage cuts off a stray tail
  // point instead of splitting the two blobs.
  for (double x = 1.5; x <= 10.5; x += 0.3) {
    pts.push_back({x, 0.0});
    truth.push_back(x < 6.0 ? 0 : 1);
  }
  const Scatterplot plot = validate_scatterplot(pts);
  const double single = adjusted_rand(agglomerative(plot, 2, Linkage::Single), Clustering(truth));
  const double complete = adjusted_rand(agglomerative(plot, 2, Linkage::Complete), Clustering(truth));
  EXPECT_LT(single, 0.1);
  EXPECT_GT(complete, 0.6);
}

TEST(Agglomerative, KEqualsNGivesSingletonsAndOneGivesOneCluster) {
  const Scatterplot plot = random_plot(7, 15);
  for (Linkage l : {Linkage::Single, Linkage::Average, Linkage::Complete}) {
    EXPECT_EQ(agglomerative(plot, 15, l).cluster_count(), 15u);
    EXPECT_EQ(agglomerative(plot, 1, l).cluster_count(), 1u);
  }
  EXPECT_THROW(agglomerative(plot, 16, Linkage::Single), Error);
}

TEST(Agglomerative, SuccessiveCutsRefine) {
  const Scatterplot plot = random_plot(8, 60);
  for (Linkage l : {Linkage::Single, Linkage::Average, Linkage::Complete}) {
    const Dendrogram tree = build_dendrogram(plot.points(), l);
    ASSERT_EQ(tree.merges.size(), 59u);
    for (std::size_t i = 1; i < tree.merges.size(); ++i) {
      EXPECT_LE(tree.merges[i - 1].height, tree.merges[i].height);
    }
    for (std::size_t k = 1; k < 60; ++k) {
      const Clustering coarse = tree.cut(k);
      const Clustering fine = tree.cut(k + 1);
      EXPECT_EQ(fine.cluster_count(), k + 1);
      // Every fine cluster lies inside one coarse cluster.
      std::vector<int> parent(k + 1, -1);
      for (std::size_t i = 0; i < 60; ++i) {
        int& p = parent[fine[i]];
        if (p < 0) p = coarse[i];
        EXPECT_EQ(p, coarse[i]);
      }
    }
  }
}

TEST(Silhouette, SeparatedBlobsScoreHigh) {
  const Scene s = blobs({{0, 0}, {20, 0}}, 1.0, 100, 9);
  EXPECT_GE(silhouette(s.plot, s.labels), 0.9);
}

TEST(Silhouette, RandomLabelsOnOneBlobScoreNearZero) {
  const Scene s = blobs({{0, 0}}, 1.0, 300, 10);
  Rng rng(11);
  std::vector<int> labels(300);
  for (int& l : labels) l = static_cast<int>(rng.below(3));
  EXPECT_LE(std::abs(silhouette(s.plot, Clustering(labels))), 0.1);
}

TEST(Silhouette, HandComputedAndRangeChecks) {
  const Scatterplot plot = validate_scatterplot({{0, 0}, {1, 0}, {0, 1}, {5, 5}, {6, 5}, {5, 7}, {2, 2}});
  EXPECT_NEAR(silhouette(plot, Clustering({0, 0, 0, 1, 1, 1, 0})), 0.7299829165062623, 1e-12);
  EXPECT_NEAR(silhouette(plot, Clustering({0, 0, 1, 1, 1, 2, 0})), -0.005252431822013348, 1e-12);
  try {
    silhouette(plot, Clustering({0, 0, 0, 0, 0, 0, 0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SingleCluster);
  }
  EXPECT_THROW(silhouette(plot, Clustering({0, 1})), Error);
  Rng rng(12);
  for (int t = 0; t < 20; ++t) {
    std::vector<int> labels(7);
    for (int& l : labels) l = static_cast<int>(rng.below(3));
    if (Clustering(labels).cluster_count() < 2) continue;
    const double s = silhouette(plot, Clustering(labels));
    EXPECT_GE(s, -1.0);
    EXPECT_LE(s, 1.0);
  }
}

TEST(CalinskiHarabasz, HandComputedAndSentinel) {
  const Scatterplot plot = validate_scatterplot({{0, 0}, {1, 0}, {0, 1}, {5, 5}, {6, 5}, {5, 7}, {2, 2}});
  EXPECT_NEAR(calinski_harabasz(plot, Clustering({0, 0, 0, 1, 1, 1, 0})), 43.84097035040432, 1e-9);
  EXPECT_NEAR(calinski_harabasz(plot, Clustering({0, 0, 1, 1, 1, 2, 0})), 2.793650793650793, 1e-9);
  const Scatterplot coincident = validate_scatterplot({{0, 0}, {0, 0}, {3, 3}, {3, 3}});
  EXPECT_EQ(calinski_harabasz(coincident, Clustering({0, 0, 1, 1})), std::numeric_limits<double>::infinity());
  EXPECT_THROW(calinski_harabasz(plot, Clustering(std::vector<int>(7, 0))), Error);
}

TEST(CalinskiHarabasz, TrueLabelsBeatShuffled) {
  const Scene s = blobs({{0, 0}, {8, 0}, {4, 7}}, 1.0, 100, 13);
  std::vector<int> shuffled = s.labels.labels();
  Rng rng(14);
  rng.shuffle(shuffled);
  EXPECT_GT(calinski_harabasz(s.plot, s.labels), calinski_harabasz(s.plot, Clustering(shuffled)));
}

TEST(InternalMetrics, RigidMotionInvariant) {
  const Scene s = blobs({{0, 0}, {5, 1}, {2, 6}}, 1.0, 60, 15);
  const double t = 2.2;
  std::vector<Point> moved;
  for (const Point& p : s.plot.points()) {
    moved.push_back({std::cos(t) * p.x - std::sin(t) * p.y - 40, std::sin(t) * p.x + std::cos(t) * p.y + 7});
  }
  const Scatterplot m = validate_scatterplot(moved);
  EXPECT_NEAR(silhouette(m, s.labels), silhouette(s.plot, s.labels), 1e-9);
  EXPECT_NEAR(calinski_harabasz(m, s.labels), calinski_harabasz(s.plot, s.labels),
              1e-9 * calinski_harabasz(s.plot, s.labels));
}

}  // namespace
}  // namespace clams
