#include "clams/bench.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "clams/errors.hpp"
#include "clams/evm.hpp"
#include "clams/random.hpp"

namespace clams {

ParamSpace ClusteringTechnique::space_for(const Scatterplot& plot) const {
  const double hi = std::max(2.0, std::floor(std::sqrt(static_cast<double>(plot.size()))));
  return {{"k", 2.0, hi, true}};
}

Clustering KMeansTechnique::run(const Scatterplot& plot, const HyperParams& h,
                                std::uint64_t seed) const {
  return kmeans(plot, h.get_int("k"), seed);
}

std::string AgglomerativeTechnique::name() const {
  return std::string("agglomerative-") + to_string(linkage_);
}

Clustering AgglomerativeTechnique::run(const Scatterplot& plot, const HyperParams& h,
                                       std::uint64_t) const {
  return agglomerative(plot, h.get_int("k"), linkage_);
}

TechniqueList default_techniques() {
  return {std::make_shared<KMeansTechnique>(),
          std::make_shared<AgglomerativeTechnique>(Linkage::Single),
          std::make_shared<AgglomerativeTechnique>(Linkage::Average),
          std::make_shared<AgglomerativeTechnique>(Linkage::Complete)};
}

const char* to_string(Metric m) noexcept {
  return m == Metric::Silhouette ? "silhouette" : "ch";
}

Metric metric_from_string(const std::string& name) {
  if (name == "silhouette") return Metric::Silhouette;
  if (name == "ch" || name == "calinski-harabasz") return Metric::CalinskiHarabasz;
  throw Error(ErrorCode::InvalidArgument, "unknown metric '" + name + "'");
}

double internal_metric(Metric m, const Scatterplot& plot, const Clustering& labels) {
  return m == Metric::Silhouette ? silhouette(plot, labels) : calinski_harabasz(plot, labels);
}

double best_metric_score(const ClusteringTechnique& technique, const Scatterplot& plot, Metric metric,
                         int budget, std::uint64_t seed, SearchStrategy* strategy) {
  if (budget < 1) throw Error(ErrorCode::InvalidArgument, "budget must be >= 1");
  RandomSearch fallback;
  SearchStrategy& search = strategy ? *strategy : fallback;
  const ParamSpace space = technique.space_for(plot);
  const std::uint64_t run_seeds = derive_seed(seed, 0x52554e);
  double best = -std::numeric_limits<double>::infinity();
  bool any = false;
  std::string last_error;
  for (int i = 0; i < budget; ++i) {
    try {
      const HyperParams h = search.propose(space, static_cast<std::size_t>(i), seed);
      const Clustering labels = technique.run(plot, h, derive_seed(run_seeds, static_cast<std::uint64_t>(i)));
      const double v = internal_metric(metric, plot, labels);
      if (std::isnan(v)) continue;
      best = any ? std::max(best, v) : v;
      any = true;
    } catch (const Error& e) {
      last_error = e.what();
    }
  }
  if (!any) {
    throw Error(ErrorCode::AllRunsFailed,
                technique.name() + ": every run failed" + (last_error.empty() ? "" : " (" + last_error + ")"));
  }
  return best;
}

std::vector<std::size_t> rank_order(const std::vector<double>& scores,
                                    const std::vector<std::string>& names) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return names[a] < names[b];
  });
  return order;
}

std::vector<double> rank_positions(const std::vector<double>& scores,
                                   const std::vector<std::string>& names) {
  const std::vector<std::size_t> order = rank_order(scores, names);
  std::vector<double> ranks(scores.size());
  for (std::size_t r = 0; r < order.size(); ++r) ranks[order[r]] = static_cast<double>(r + 1);
  return ranks;
}

double mean_pairwise_spearman(const std::vector<std::vector<double>>& ranks) {
  if (ranks.size() < 2) throw Error(ErrorCode::InvalidArgument, "need at least two rankings");
  double total = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    for (std::size_t j = i + 1; j < ranks.size(); ++j) {
      total += spearman_rho(ranks[i], ranks[j]);
      ++pairs;
    }
  }
  return total / static_cast<double>(pairs);
}

BenchReport rank_stability(const std::vector<Scatterplot>& datasets, const TechniqueList& techniques,
                           Metric metric, int budget, std::uint64_t seed) {
  if (datasets.size() < 2) throw Error(ErrorCode::InvalidArgument, "need at least two datasets");
  if (techniques.size() < 3) throw Error(ErrorCode::InvalidArgument, "need at least three techniques");
  BenchReport report;
  report.metric = metric;
  report.budget = budget;
  report.seed = seed;
  for (const auto& t : techniques) report.techniques.push_back(t->name());

  std::vector<std::vector<double>> all_ranks;
  for (std::size_t d = 0; d < datasets.size(); ++d) {
    DatasetRanking row;
    row.dataset = datasets[d].id();
    const std::uint64_t dataset_seed = derive_seed(seed, d);
    for (const auto& t : techniques) {
      row.scores.push_back(best_metric_score(*t, datasets[d], metric, budget, dataset_seed));
    }
    row.ranks = rank_positions(row.scores, report.techniques);
    all_ranks.push_back(row.ranks);
    report.datasets.push_back(std::move(row));
  }
  report.mean_rho = mean_pairwise_spearman(all_ranks);
  return report;
}

}  // namespace clams
