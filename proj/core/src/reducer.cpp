#include "clams/reducer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "clams/ambiguity.hpp"
#include "clams/clustering.hpp"
#include "clams/errors.hpp"
#include "clams/random.hpp"

namespace clams {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

HighDimDataset HighDimDataset::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.size() < 2) throw Error(ErrorCode::EmptyInput, "dataset needs at least two rows");
  const std::size_t d = rows.front().size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != d) {
      throw Error(ErrorCode::InvalidArgument, "row " + std::to_string(i) + " has " +
                                                  std::to_string(rows[i].size()) + " values, expected " +
                                                  std::to_string(d));
    }
    for (std::size_t j = 0; j < d; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  return from_matrix(std::move(m));
}

HighDimDataset HighDimDataset::from_matrix(Eigen::MatrixXd data) {
  if (data.rows() < 2) throw Error(ErrorCode::EmptyInput, "dataset needs at least two rows");
  if (data.cols() < 2) throw Error(ErrorCode::InvalidArgument, "dataset needs at least two dimensions");
  if (!data.allFinite()) throw Error(ErrorCode::NonFinite, "dataset contains NaN or Inf");
  return HighDimDataset(std::move(data));
}

ParamSpace ToyEmbedder::space() const {
  return {{"scale1", 0.5, 2.0, false},
          {"scale2", 0.5, 2.0, false},
          {"jitter", 0.0, 0.5, false},
          {"gamma", 0.0, 1.0, false}};
}

Scatterplot ToyEmbedder::embed(const HighDimDataset& z, const HyperParams& h, std::uint64_t seed) const {
  const Eigen::MatrixXd& x = z.data();
  const Eigen::Index n = x.rows();
  const Eigen::MatrixXd centered = x.rowwise() - x.colwise().mean();
  const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(n);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  const Eigen::Index d = cov.rows();
  Eigen::MatrixXd axes(d, 2);
  axes.col(0) = solver.eigenvectors().col(d - 1);
  axes.col(1) = solver.eigenvectors().col(d - 2);
  for (Eigen::Index c = 0; c < 2; ++c) {
    Eigen::Index arg = 0;
    for (Eigen::Index r = 1; r < d; ++r) {
      if (std::abs(axes(r, c)) > std::abs(axes(arg, c))) arg = r;
    }
    if (axes(arg, c) < 0.0) axes.col(c) = -axes.col(c);
  }
  const Eigen::MatrixXd proj = centered * axes;

  const double s1 = h.get("scale1");
  const double s2 = h.get("scale2");
  const double jitter = h.get("jitter");
  const double gamma = h.get("gamma");
  std::vector<Point> pts(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) pts[i] = {s1 * proj(i, 0), s2 * proj(i, 1)};

  if (gamma > 0.0) {
    const int k = std::max(1, static_cast<int>(std::floor(std::sqrt(static_cast<double>(n)))));
    const KMeansResult km = kmeans_fit(pts, k, derive_seed(seed, 1));
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const Point& c = km.centroids[km.labels[i]];
      pts[i].x += gamma * (c.x - pts[i].x);
      pts[i].y += gamma * (c.y - pts[i].y);
    }
  }
  if (jitter > 0.0) {
    const double sd = jitter * std::sqrt(std::max(solver.eigenvalues()(d - 1), 0.0));
    Rng rng(derive_seed(seed, 2));
    for (Point& p : pts) {
      p.x += sd * rng.normal();
      p.y += sd * rng.normal();
    }
  }
  return validate_scatterplot(std::move(pts), "embedding");
}

std::vector<std::vector<std::size_t>> knn_sets(const Eigen::MatrixXd& points, int k) {
  const auto n = static_cast<std::size_t>(points.rows());
  const auto d = static_cast<std::size_t>(points.cols());
  if (k < 1 || static_cast<std::size_t>(k) >= n) {
    throw Error(ErrorCode::KTooLarge, "k=" + std::to_string(k) + " needs to be in [1, N-1] for N=" +
                                          std::to_string(n));
  }
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rows = points;
  const double* base = rows.data();
  std::vector<std::vector<std::size_t>> out(n);
  std::vector<std::pair<double, std::size_t>> dist(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double* a = base + i * d;
    std::size_t m = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double* b = base + j * d;
      double d2 = 0.0;
      for (std::size_t c = 0; c < d; ++c) d2 += (a[c] - b[c]) * (a[c] - b[c]);
      dist[m++] = {d2, j};
    }
    std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
    out[i].resize(static_cast<std::size_t>(k));
    for (int r = 0; r < k; ++r) out[i][r] = dist[r].second;
    std::sort(out[i].begin(), out[i].end());
  }
  return out;
}

double NeighborhoodF1::evaluate(const HighDimDataset& z, const Scatterplot& embedding) const {
  if (embedding.size() != z.rows()) {
    throw Error(ErrorCode::LengthMismatch, "embedding and dataset differ in point count");
  }
  Eigen::MatrixXd e(static_cast<Eigen::Index>(embedding.size()), 2);
  for (std::size_t i = 0; i < embedding.size(); ++i) {
    e(static_cast<Eigen::Index>(i), 0) = embedding[i].x;
    e(static_cast<Eigen::Index>(i), 1) = embedding[i].y;
  }
  const auto original = knn_sets(z.data(), k_);
  const auto embedded = knn_sets(e, k_);
  std::size_t shared = 0;
  std::vector<std::size_t> common;
  for (std::size_t i = 0; i < original.size(); ++i) {
    common.clear();
    std::set_intersection(original[i].begin(), original[i].end(), embedded[i].begin(),
                          embedded[i].end(), std::back_inserter(common));
    shared += common.size();
  }
  // Both neighbor sets have size k, so mean precision equals mean recall and
  // their harmonic mean is the mean overlap fraction.
  const double precision = static_cast<double>(shared) / static_cast<double>(original.size() * k_);
  const double recall = precision;
  return precision + recall == 0.0 ? 0.0 : 2.0 * precision * recall / (precision + recall);
}

void ReducerConfig::validate() const {
  if (!(tau > 0.0)) throw Error(ErrorCode::InvalidArgument, "tau must be positive");
  if (budget_phase1 < 1 || budget_phase2 < 1) {
    throw Error(ErrorCode::InvalidArgument, "budgets must be >= 1");
  }
  gmm.validate();
}

std::uint64_t ReducerConfig::embed_seed() const noexcept { return derive_seed(seed, 0xE3BE); }

double constrained_loss(const HyperParams& h, const HyperParams& h1, const HighDimDataset& z,
                        const Embedder& embedder, const AccuracyMetric& metric,
                        const SeparabilityModel& model, const ReducerConfig& cfg) {
  cfg.validate();
  const double acc1 = metric.evaluate(z, embedder.embed(z, h1, cfg.embed_seed()));
  const Scatterplot plot = embedder.embed(z, h, cfg.embed_seed());
  const double acc = metric.evaluate(z, plot);
  if (!(std::abs(acc1 - acc) <= cfg.tau)) return kInf;
  return clams_score(plot, model, cfg.gmm).score;
}

ReducerReport optimize(const HighDimDataset& z, const Embedder& embedder, const AccuracyMetric& metric,
                       const SeparabilityModel& model, const ReducerConfig& cfg,
                       SearchStrategy* strategy) {
  cfg.validate();
  RandomSearch fallback;
  SearchStrategy& search = strategy ? *strategy : fallback;
  const ParamSpace space = embedder.space();
  const std::uint64_t embed_seed = cfg.embed_seed();
  std::vector<ReducerCandidate> candidates;

  std::optional<Scatterplot> intermediate;
  std::size_t best1 = 0;
  double best_acc = -kInf;
  for (int i = 0; i < cfg.budget_phase1; ++i) {
    ReducerCandidate c;
    c.phase = 1;
    c.index = static_cast<std::size_t>(i);
    c.params = search.propose(space, c.index, derive_seed(cfg.seed, 1));
    Scatterplot plot = embedder.embed(z, c.params, embed_seed);
    c.accuracy = metric.evaluate(z, plot);
    c.loss = 0.0;
    if (c.accuracy > best_acc) {
      best_acc = c.accuracy;
      best1 = candidates.size();
      intermediate = std::move(plot);
    }
    candidates.push_back(std::move(c));
  }
  const HyperParams h1 = candidates[best1].params;
  const double clams1 = clams_score(*intermediate, model, cfg.gmm).score;

  std::optional<Scatterplot> final_plot = intermediate;
  HyperParams h2 = h1;
  double best_loss = clams1;
  double acc2 = best_acc;
  candidates.push_back({2, 0, h1, best_acc, clams1});
  for (int i = 1; i < cfg.budget_phase2; ++i) {
    ReducerCandidate c;
    c.phase = 2;
    c.index = static_cast<std::size_t>(i);
    c.params = search.propose(space, c.index, derive_seed(cfg.seed, 2));
    Scatterplot plot = embedder.embed(z, c.params, embed_seed);
    c.accuracy = metric.evaluate(z, plot);
    c.loss = std::abs(best_acc - c.accuracy) <= cfg.tau ? clams_score(plot, model, cfg.gmm).score : kInf;
    if (c.loss < best_loss) {
      best_loss = c.loss;
      h2 = c.params;
      acc2 = c.accuracy;
      final_plot = std::move(plot);
    }
    candidates.push_back(std::move(c));
  }

  return ReducerReport{h1,       h2,     std::move(*intermediate), std::move(*final_plot), best_acc,
                       acc2,     clams1, best_loss,                std::move(candidates)};
}

}  // namespace clams
