#pragma once

#include <cstdint>
#include <vector>

#include "clams/random.hpp"
#include "clams/types.hpp"

namespace clams {

// k-means++ seeding: first center uniform, then proportional to squared
// distance from the nearest chosen center (uniform if all distances are 0).
std::vector<Point> kmeanspp_init(std::span<const Point> points, int k, Rng& rng);

struct KMeansResult {
  Clustering labels;
  std::vector<Point> centroids;
  // Within-cluster sum of squares after each assignment step.
  std::vector<double> objective_trace;
};

// k-means++ seeding followed by Lloyd iterations until the objective
// improves by less than tol (relative) or max_iters is reached.
// Requires 1 <= k <= N.
KMeansResult kmeans_fit(std::span<const Point> points, int k, std::uint64_t seed,
                        int max_iters = 300, double tol = 1e-6);

// Requires 2 <= k <= N.
Clustering kmeans(const Scatterplot& plot, int k, std::uint64_t seed);

enum class Linkage { Single, Average, Complete };

const char* to_string(Linkage l) noexcept;

// Merge history of an exact agglomerative clustering, in merge order.
struct Dendrogram {
  std::size_t leaves = 0;
  struct Merge {
    std::size_t a = 0;  // representative leaf of one side
    std::size_t b = 0;  // representative leaf of the other
    double height = 0.0;
  };
  std::vector<Merge> merges;

  // Applies the first N - k merges; clusters are numbered by first point.
  Clustering cut(std::size_t k) const;
};

// Exact hierarchical clustering by the nearest-neighbor chain algorithm
// (valid for all three reducible linkages); O(N^2) memory.
Dendrogram build_dendrogram(std::span<const Point> points, Linkage linkage);

// Requires 1 <= k <= N.
Clustering agglomerative(const Scatterplot& plot, int k, Linkage linkage);

// Mean silhouette; points in singleton clusters contribute 0. Unassigned
// (-1) points are ignored. Throws SingleCluster for fewer than 2 clusters.
double silhouette(const Scatterplot& plot, const Clustering& labels);

// Between-cluster dispersion over within-cluster dispersion, each divided
// by its degrees of freedom. Returns +inf when the within-cluster sum of
// squares is zero. Throws SingleCluster for k < 2 and InvalidArgument for k >= N.
double calinski_harabasz(const Scatterplot& plot, const Clustering& labels);

}  // namespace clams
