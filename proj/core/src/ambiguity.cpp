#include "clams/ambiguity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "clams/errors.hpp"
#include "clams/features.hpp"

namespace clams {

double entropy_ambiguity(double s) {
  if (!(s >= 0.0 && s <= 1.0)) {
    throw Error(ErrorCode::OutOfRange, "separability must lie in [0, 1]");
  }
  auto term = [](double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; };
  return std::min(1.0, term(s) + term(1.0 - s));
}

AmbiguityReport score_decomposition(Decomposition decomposition, const SeparabilityModel& model) {
  AmbiguityReport report;
  const auto& comps = decomposition.components;
  double total = 0.0;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    for (std::size_t j = i + 1; j < comps.size(); ++j) {
      PairAmbiguity pa;
      pa.pair = {i, j};
      pa.features = pair_features(comps[i], comps[j]);
      pa.features.pair = {i, j};
      pa.separability = model.predict(pa.features);
      pa.ambiguity = entropy_ambiguity(pa.separability);
      total += pa.ambiguity;
      report.pairs.push_back(pa);
    }
  }
  report.score = report.pairs.empty() ? 0.0 : total / static_cast<double>(report.pairs.size());
  report.decomposition = std::move(decomposition);
  return report;
}

Scatterplot canonical_order(const Scatterplot& plot) {
  std::vector<std::size_t> order(plot.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto& pts = plot.points();
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (pts[a].x != pts[b].x) return pts[a].x < pts[b].x;
    if (pts[a].y != pts[b].y) return pts[a].y < pts[b].y;
    return a < b;
  });
  std::vector<Point> sorted;
  sorted.reserve(order.size());
  for (std::size_t i : order) sorted.push_back(pts[i]);
  return validate_scatterplot(std::move(sorted), plot.id());
}

AmbiguityReport clams_score(const Scatterplot& plot, const SeparabilityModel& model,
                            const GmmFitConfig& gmm_cfg) {
  return score_decomposition(decompose(canonical_order(plot), gmm_cfg), model);
}

}  // namespace clams
