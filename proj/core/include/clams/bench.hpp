#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "clams/clustering.hpp"
#include "clams/search.hpp"
#include "clams/types.hpp"

namespace clams {

class ClusteringTechnique {
 public:
  virtual ~ClusteringTechnique() = default;
  virtual std::string name() const = 0;
  // Default: k in [2, floor(sqrt(N))].
  virtual ParamSpace space_for(const Scatterplot& plot) const;
  virtual Clustering run(const Scatterplot& plot, const HyperParams& h, std::uint64_t seed) const = 0;
};

class KMeansTechnique final : public ClusteringTechnique {
 public:
  std::string name() const override { return "kmeans"; }
  Clustering run(const Scatterplot& plot, const HyperParams& h, std::uint64_t seed) const override;
};

class AgglomerativeTechnique final : public ClusteringTechnique {
 public:
  explicit AgglomerativeTechnique(Linkage linkage) : linkage_(linkage) {}
  std::string name() const override;
  Clustering run(const Scatterplot& plot, const HyperParams& h, std::uint64_t seed) const override;

 private:
  Linkage linkage_;
};

using TechniqueList = std::vector<std::shared_ptr<const ClusteringTechnique>>;

// K-Means plus single, average and complete linkage.
TechniqueList default_techniques();

enum class Metric { Silhouette, CalinskiHarabasz };

const char* to_string(Metric m) noexcept;
Metric metric_from_string(const std::string& name);  // "silhouette" or "ch"

double internal_metric(Metric m, const Scatterplot& plot, const Clustering& labels);

// Best metric value over `budget` proposals of the strategy (default:
// seeded random search). Runs that throw are skipped; AllRunsFailed when
// none succeeds.
double best_metric_score(const ClusteringTechnique& technique, const Scatterplot& plot, Metric metric,
                         int budget, std::uint64_t seed, SearchStrategy* strategy = nullptr);

// Technique indices sorted by descending score, ties by name.
std::vector<std::size_t> rank_order(const std::vector<double>& scores,
                                    const std::vector<std::string>& names);

// Rank (1 = best) of every technique, aligned with the technique list.
std::vector<double> rank_positions(const std::vector<double>& scores,
                                   const std::vector<std::string>& names);

// Mean Spearman correlation over all unordered pairs of rank vectors.
double mean_pairwise_spearman(const std::vector<std::vector<double>>& ranks);

struct DatasetRanking {
  std::string dataset;
  std::vector<double> scores;  // aligned with BenchReport::techniques
  std::vector<double> ranks;   // 1 = best
};

struct BenchReport {
  Metric metric = Metric::Silhouette;
  int budget = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> techniques;
  std::vector<DatasetRanking> datasets;
  double mean_rho = 0.0;
};

// Ranks techniques on every dataset and averages the pairwise Spearman
// correlation of the rankings. Needs >= 2 datasets and >= 3 techniques.
BenchReport rank_stability(const std::vector<Scatterplot>& datasets, const TechniqueList& techniques,
                           Metric metric, int budget, std::uint64_t seed);

}  // namespace clams
