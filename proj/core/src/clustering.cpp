#include "clams/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "clams/errors.hpp"

namespace clams {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sq_dist(const Point& a, const Point& b) noexcept {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t i) {
  while (parent[i] != i) {
    parent[i] = parent[parent[i]];
    i = parent[i];
  }
  return i;
}

// Dense labels 0..k-1 for the assigned points; returns the cluster count.
std::size_t dense_labels(const Clustering& labels, std::vector<int>& out) {
  out.assign(labels.size(), -1);
  std::vector<int> map;
  std::size_t k = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int l = labels[i];
    if (l < 0) continue;
    if (static_cast<std::size_t>(l) >= map.size()) map.resize(l + 1, -1);
    if (map[l] < 0) map[l] = static_cast<int>(k++);
    out[i] = map[l];
  }
  return k;
}

void check_labels(const Scatterplot& plot, const Clustering& labels) {
  if (labels.size() != plot.size()) {
    throw Error(ErrorCode::LengthMismatch, "clustering has " + std::to_string(labels.size()) +
                                               " labels for " + std::to_string(plot.size()) +
                                               " points");
  }
}

}  // namespace

std::vector<Point> kmeanspp_init(std::span<const Point> points, int k, Rng& rng) {
  const std::size_t n = points.size();
  std::vector<Point> centers;
  centers.reserve(k);
  centers.push_back(points[rng.below(n)]);
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = sq_dist(points[i], centers[0]);
  while (centers.size() < static_cast<std::size_t>(k)) {
    const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
    std::size_t pick = n - 1;
    if (total > 0.0) {
      double target = rng.uniform() * total;
      for (std::size_t i = 0; i < n; ++i) {
        target -= d2[i];
        if (target < 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = rng.below(n);
    }
    centers.push_back(points[pick]);
    for (std::size_t i = 0; i < n; ++i) d2[i] = std::min(d2[i], sq_dist(points[i], centers.back()));
  }
  return centers;
}

KMeansResult kmeans_fit(std::span<const Point> points, int k, std::uint64_t seed, int max_iters,
                        double tol) {
  const std::size_t n = points.size();
  if (k < 1 || static_cast<std::size_t>(k) > n) {
    throw Error(ErrorCode::InvalidArgument, "kmeans: k=" + std::to_string(k) + " must lie in [1, " +
                                                std::to_string(n) + "]");
  }
  Rng rng(seed);
  KMeansResult out;
  out.centroids = kmeanspp_init(points, k, rng);
  std::vector<int> labels(n, 0);
  std::vector<double> sx(k), sy(k);
  std::vector<std::size_t> count(k);
  for (int iter = 0; iter < max_iters; ++iter) {
    double objective = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double best = kInf;
      int arg = 0;
      for (int j = 0; j < k; ++j) {
        const double d = sq_dist(points[i], out.centroids[j]);
        if (d < best) {
          best = d;
          arg = j;
        }
      }
      labels[i] = arg;
      objective += best;
    }
    const bool converged =
        !out.objective_trace.empty() && out.objective_trace.back() - objective <= tol * out.objective_trace.back();
    out.objective_trace.push_back(objective);
    if (converged || objective == 0.0) break;

    std::fill(sx.begin(), sx.end(), 0.0);
    std::fill(sy.begin(), sy.end(), 0.0);
    std::fill(count.begin(), count.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      sx[labels[i]] += points[i].x;
      sy[labels[i]] += points[i].y;
      ++count[labels[i]];
    }
    for (int j = 0; j < k; ++j) {
      if (count[j] > 0) {
        out.centroids[j] = {sx[j] / static_cast<double>(count[j]), sy[j] / static_cast<double>(count[j])};
      }
    }
  }
  out.labels = Clustering(std::move(labels));
  return out;
}

Clustering kmeans(const Scatterplot& plot, int k, std::uint64_t seed) {
  if (k < 2) throw Error(ErrorCode::InvalidArgument, "kmeans: k must be >= 2");
  return kmeans_fit(plot.points(), k, seed).labels;
}

const char* to_string(Linkage l) noexcept {
  switch (l) {
    case Linkage::Single: return "single";
    case Linkage::Average: return "average";
    case Linkage::Complete: return "complete";
  }
  return "single";
}

Clustering Dendrogram::cut(std::size_t k) const {
  if (k < 1 || k > leaves) {
    throw Error(ErrorCode::InvalidArgument, "cut: k=" + std::to_string(k) + " must lie in [1, " +
                                                std::to_string(leaves) + "]");
  }
  std::vector<std::size_t> parent(leaves);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  const std::size_t applied = leaves - k;
  for (std::size_t m = 0; m < applied; ++m) {
    const std::size_t ra = find_root(parent, merges[m].a);
    const std::size_t rb = find_root(parent, merges[m].b);
    parent[std::max(ra, rb)] = std::min(ra, rb);
  }
  std::vector<int> labels(leaves);
  for (std::size_t i = 0; i < leaves; ++i) labels[i] = static_cast<int>(find_root(parent, i));
  return canonical_labels(labels);
}

Dendrogram build_dendrogram(std::span<const Point> points, Linkage linkage) {
  const std::size_t n = points.size();
  Dendrogram tree;
  tree.leaves = n;
  if (n < 2) return tree;

  std::vector<double> d(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    d[i * n + i] = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = std::sqrt(sq_dist(points[i], points[j]));
      d[i * n + j] = v;
      d[j * n + i] = v;
    }
  }
  std::vector<char> active(n, 1);
  std::vector<double> size(n, 1.0);
  std::vector<std::size_t> chain;
  chain.reserve(n);
  tree.merges.reserve(n - 1);

  std::size_t first_active = 0;
  for (std::size_t remaining = n; remaining > 1;) {
    if (chain.empty()) {
      while (!active[first_active]) ++first_active;
      chain.push_back(first_active);
    }
    const std::size_t a = chain.back();
    const std::size_t prev = chain.size() > 1 ? chain[chain.size() - 2] : n;
    // Nearest active neighbor; the previous chain element wins ties so the
    // chain cannot cycle.
    std::size_t b = prev;
    double best = prev < n ? d[a * n + prev] : kInf;
    const double* row = &d[a * n];
    for (std::size_t j = 0; j < n; ++j) {
      if (j == a || !active[j]) continue;
      if (row[j] < best) {
        best = row[j];
        b = j;
      }
    }
    if (b != prev) {
      chain.push_back(b);
      continue;
    }

    chain.pop_back();
    chain.pop_back();
    const std::size_t keep = std::min(a, b);
    const std::size_t drop = std::max(a, b);
    tree.merges.push_back({keep, drop, best});
    const double na = size[keep];
    const double nb = size[drop];
    for (std::size_t j = 0; j < n; ++j) {
      if (!active[j] || j == keep || j == drop) continue;
      const double x = d[keep * n + j];
      const double y = d[drop * n + j];
      double v = 0.0;
      switch (linkage) {
        case Linkage::Single: v = std::min(x, y); break;
        case Linkage::Complete: v = std::max(x, y); break;
        case Linkage::Average: v = (na * x + nb * y) / (na + nb); break;
      }
      d[keep * n + j] = v;
      d[j * n + keep] = v;
    }
    size[keep] = na + nb;
    active[drop] = 0;
    --remaining;
  }
  std::stable_sort(tree.merges.begin(), tree.merges.end(),
                   [](const Dendrogram::Merge& x, const Dendrogram::Merge& y) {
                     return x.height < y.height;
                   });
  return tree;
}

Clustering agglomerative(const Scatterplot& plot, int k, Linkage linkage) {
  if (k < 1 || static_cast<std::size_t>(k) > plot.size()) {
    throw Error(ErrorCode::InvalidArgument, "agglomerative: k=" + std::to_string(k) +
                                                " must lie in [1, " + std::to_string(plot.size()) + "]");
  }
  return build_dendrogram(plot.points(), linkage).cut(static_cast<std::size_t>(k));
}

double silhouette(const Scatterplot& plot, const Clustering& labels) {
  check_labels(plot, labels);
  std::vector<int> dense;
  const std::size_t k = dense_labels(labels, dense);
  if (k < 2) throw Error(ErrorCode::SingleCluster, "silhouette needs at least two clusters");

  std::vector<std::size_t> count(k, 0);
  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < dense.size(); ++i) {
    if (dense[i] >= 0) {
      ++count[dense[i]];
      members.push_back(i);
    }
  }
  const auto& pts = plot.points();
  std::vector<double> sums(k);
  double total = 0.0;
  for (std::size_t i : members) {
    const std::size_t own = static_cast<std::size_t>(dense[i]);
    if (count[own] == 1) continue;
    std::fill(sums.begin(), sums.end(), 0.0);
    for (std::size_t j : members) {
      if (j != i) sums[dense[j]] += std::sqrt(sq_dist(pts[i], pts[j]));
    }
    const double a = sums[own] / static_cast<double>(count[own] - 1);
    double b = kInf;
    for (std::size_t c = 0; c < k; ++c) {
      if (c != own) b = std::min(b, sums[c] / static_cast<double>(count[c]));
    }
    const double denom = std::max(a, b);
    if (denom > 0.0) total += (b - a) / denom;
  }
  return total / static_cast<double>(members.size());
}

double calinski_harabasz(const Scatterplot& plot, const Clustering& labels) {
  check_labels(plot, labels);
  std::vector<int> dense;
  const std::size_t k = dense_labels(labels, dense);
  if (k < 2) throw Error(ErrorCode::SingleCluster, "calinski_harabasz needs at least two clusters");

  std::vector<double> sx(k, 0.0), sy(k, 0.0), count(k, 0.0);
  double mx = 0.0;
  double my = 0.0;
  std::size_t n = 0;
  const auto& pts = plot.points();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (dense[i] < 0) continue;
    sx[dense[i]] += pts[i].x;
    sy[dense[i]] += pts[i].y;
    count[dense[i]] += 1.0;
    mx += pts[i].x;
    my += pts[i].y;
    ++n;
  }
  if (k >= n) {
    throw Error(ErrorCode::InvalidArgument, "calinski_harabasz needs fewer clusters than points");
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double between = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    sx[c] /= count[c];
    sy[c] /= count[c];
    between += count[c] * sq_dist({sx[c], sy[c]}, {mx, my});
  }
  double within = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (dense[i] >= 0) within += sq_dist(pts[i], {sx[dense[i]], sy[dense[i]]});
  }
  if (within == 0.0) return kInf;
  return (between / static_cast<double>(k - 1)) / (within / static_cast<double>(n - k));
}

}  // namespace clams
