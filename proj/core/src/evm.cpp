#include "clams/evm.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "clams/errors.hpp"

namespace clams {

namespace {

double comb2(std::int64_t n) { return 0.5 * static_cast<double>(n) * static_cast<double>(n - 1); }

double entropy_of(std::span<const std::int64_t> counts, std::int64_t total) {
  double h = 0.0;
  for (std::int64_t c : counts) {
    if (c > 0) {
      const double p = static_cast<double>(c) / static_cast<double>(total);
      h -= p * std::log(p);
    }
  }
  return h;
}

// True when every row and every column holds exactly one nonzero cell,
// i.e. the two partitions agree up to relabeling.
bool is_relabeling(const Contingency& t) {
  if (t.rows != t.cols) return false;
  for (std::size_t i = 0; i < t.rows; ++i) {
    std::size_t nonzero = 0;
    for (std::size_t j = 0; j < t.cols; ++j) nonzero += t.at(i, j) > 0 ? 1 : 0;
    if (nonzero != 1) return false;
  }
  for (std::size_t j = 0; j < t.cols; ++j) {
    std::size_t nonzero = 0;
    for (std::size_t i = 0; i < t.rows; ++i) nonzero += t.at(i, j) > 0 ? 1 : 0;
    if (nonzero != 1) return false;
  }
  return true;
}

}  // namespace

Contingency contingency(const Clustering& c1, const Clustering& c2, UnassignedPolicy policy) {
  if (c1.size() != c2.size()) {
    throw Error(ErrorCode::LengthMismatch, "clusterings have " + std::to_string(c1.size()) +
                                               " and " + std::to_string(c2.size()) + " labels");
  }
  // Singleton policy: unassigned point i becomes cluster (max_label + 1 + i).
  auto max_label = [](const Clustering& c) {
    int m = -1;
    for (int l : c.labels()) m = std::max(m, l);
    return m;
  };
  const long base1 = max_label(c1) + 1;
  const long base2 = max_label(c2) + 1;

  std::map<long, std::size_t> rows;
  std::map<long, std::size_t> cols;
  std::vector<std::pair<long, long>> kept;
  for (std::size_t i = 0; i < c1.size(); ++i) {
    long a = c1[i];
    long b = c2[i];
    if (a < 0 || b < 0) {
      if (policy == UnassignedPolicy::Exclude) continue;
      if (a < 0) a = base1 + static_cast<long>(i);
      if (b < 0) b = base2 + static_cast<long>(i);
    }
    rows.emplace(a, 0);
    cols.emplace(b, 0);
    kept.emplace_back(a, b);
  }
  if (kept.empty()) throw Error(ErrorCode::EmptyOverlap, "no point is assigned in both clusterings");

  std::size_t next = 0;
  for (auto& [label, index] : rows) index = next++;
  next = 0;
  for (auto& [label, index] : cols) index = next++;

  Contingency t;
  t.rows = rows.size();
  t.cols = cols.size();
  t.counts.assign(t.rows * t.cols, 0);
  t.row_sums.assign(t.rows, 0);
  t.col_sums.assign(t.cols, 0);
  for (const auto& [a, b] : kept) {
    const std::size_t i = rows[a];
    const std::size_t j = cols[b];
    ++t.counts[i * t.cols + j];
    ++t.row_sums[i];
    ++t.col_sums[j];
  }
  t.total = static_cast<std::int64_t>(kept.size());
  return t;
}

double adjusted_rand(const Clustering& c1, const Clustering& c2, UnassignedPolicy policy) {
  const Contingency t = contingency(c1, c2, policy);
  if ((t.rows == 1 && t.cols == 1) ||
      (t.rows == t.cols && static_cast<std::int64_t>(t.rows) == t.total)) {
    return 1.0;
  }
  double index = 0.0;
  for (std::int64_t c : t.counts) index += comb2(c);
  double sum_rows = 0.0;
  for (std::int64_t c : t.row_sums) sum_rows += comb2(c);
  double sum_cols = 0.0;
  for (std::int64_t c : t.col_sums) sum_cols += comb2(c);
  const double expected = sum_rows * sum_cols / comb2(t.total);
  const double maximum = 0.5 * (sum_rows + sum_cols);
  const double denominator = maximum - expected;
  if (denominator == 0.0) return index == expected ? 1.0 : 0.0;
  return (index - expected) / denominator;
}

double mutual_information(const Contingency& t) {
  const double n = static_cast<double>(t.total);
  double mi = 0.0;
  for (std::size_t i = 0; i < t.rows; ++i) {
    for (std::size_t j = 0; j < t.cols; ++j) {
      const std::int64_t c = t.at(i, j);
      if (c == 0) continue;
      const double nij = static_cast<double>(c);
      mi += nij / n *
            std::log(n * nij / (static_cast<double>(t.row_sums[i]) * static_cast<double>(t.col_sums[j])));
    }
  }
  return std::max(mi, 0.0);
}

double expected_mutual_information(const Contingency& t) {
  const std::int64_t n = t.total;
  const double nd = static_cast<double>(n);
  const double lg_n = std::lgamma(nd + 1.0);
  double emi = 0.0;
  for (std::int64_t a : t.row_sums) {
    for (std::int64_t b : t.col_sums) {
      const std::int64_t lo = std::max<std::int64_t>(1, a + b - n);
      const std::int64_t hi = std::min(a, b);
      const double ad = static_cast<double>(a);
      const double bd = static_cast<double>(b);
      const double fixed = std::lgamma(ad + 1.0) + std::lgamma(bd + 1.0) +
                           std::lgamma(nd - ad + 1.0) + std::lgamma(nd - bd + 1.0) - lg_n;
      for (std::int64_t nij = lo; nij <= hi; ++nij) {
        const double x = static_cast<double>(nij);
        const double log_p = fixed - std::lgamma(x + 1.0) - std::lgamma(ad - x + 1.0) -
                             std::lgamma(bd - x + 1.0) - std::lgamma(nd - ad - bd + x + 1.0);
        emi += x / nd * std::log(nd * x / (ad * bd)) * std::exp(log_p);
      }
    }
  }
  return emi;
}

double adjusted_mutual_info(const Clustering& c1, const Clustering& c2, UnassignedPolicy policy) {
  const Contingency t = contingency(c1, c2, policy);
  if (t.rows == 1 && t.cols == 1) return 1.0;
  const double mi = mutual_information(t);
  const double emi = expected_mutual_information(t);
  const double h1 = entropy_of(t.row_sums, t.total);
  const double h2 = entropy_of(t.col_sums, t.total);
  const double denominator = 0.5 * (h1 + h2) - emi;
  if (denominator == 0.0) return 0.0;
  if (is_relabeling(t)) return 1.0;
  return (mi - emi) / denominator;
}

HomogeneityCompleteness homogeneity_completeness_v(const Clustering& c1, const Clustering& c2,
                                                   UnassignedPolicy policy) {
  const Contingency t = contingency(c1, c2, policy);
  const double n = static_cast<double>(t.total);
  const double h_classes = entropy_of(t.row_sums, t.total);
  const double h_clusters = entropy_of(t.col_sums, t.total);
  double h_c_given_k = 0.0;
  double h_k_given_c = 0.0;
  for (std::size_t i = 0; i < t.rows; ++i) {
    for (std::size_t j = 0; j < t.cols; ++j) {
      const std::int64_t c = t.at(i, j);
      if (c == 0) continue;
      const double p = static_cast<double>(c) / n;
      h_c_given_k -= p * std::log(static_cast<double>(c) / static_cast<double>(t.col_sums[j]));
      h_k_given_c -= p * std::log(static_cast<double>(c) / static_cast<double>(t.row_sums[i]));
    }
  }
  HomogeneityCompleteness out;
  out.homogeneity = h_classes == 0.0 ? 1.0 : std::clamp(1.0 - h_c_given_k / h_classes, 0.0, 1.0);
  out.completeness = h_clusters == 0.0 ? 1.0 : std::clamp(1.0 - h_k_given_c / h_clusters, 0.0, 1.0);
  const double sum = out.homogeneity + out.completeness;
  out.v_measure = sum == 0.0 ? 0.0 : 2.0 * out.homogeneity * out.completeness / sum;
  return out;
}

const char* to_string(Evm evm) noexcept {
  switch (evm) {
    case Evm::Ami: return "ami";
    case Evm::Arand: return "arand";
    case Evm::Vm: return "vm";
    case Evm::Homo: return "homo";
    case Evm::Comp: return "comp";
  }
  return "ami";
}

Evm evm_from_string(const std::string& name) {
  for (Evm e : {Evm::Ami, Evm::Arand, Evm::Vm, Evm::Homo, Evm::Comp}) {
    if (name == to_string(e)) return e;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown EVM '" + name + "'");
}

double evm_score(Evm evm, const Clustering& c1, const Clustering& c2, UnassignedPolicy policy) {
  switch (evm) {
    case Evm::Ami: return adjusted_mutual_info(c1, c2, policy);
    case Evm::Arand: return adjusted_rand(c1, c2, policy);
    case Evm::Vm: return homogeneity_completeness_v(c1, c2, policy).v_measure;
    case Evm::Homo: return homogeneity_completeness_v(c1, c2, policy).homogeneity;
    case Evm::Comp: return homogeneity_completeness_v(c1, c2, policy).completeness;
  }
  return 0.0;
}

double ground_truth_ambiguity(std::span<const Clustering> clusterings, Evm evm,
                              UnassignedPolicy policy) {
  if (clusterings.size() < 2) {
    throw Error(ErrorCode::TooFewClusterings, "need at least two clusterings");
  }
  double total = 0.0;
  std::size_t used = 0;
  for (std::size_t i = 0; i < clusterings.size(); ++i) {
    for (std::size_t j = i + 1; j < clusterings.size(); ++j) {
      try {
        total += evm_score(evm, clusterings[i], clusterings[j], policy);
        ++used;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::EmptyOverlap) throw;
      }
    }
  }
  if (used == 0) throw Error(ErrorCode::EmptyOverlap, "no clustering pair shares an assigned point");
  return std::clamp(1.0 - total / static_cast<double>(used), 0.0, 1.0);
}

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t m = i; m <= j; ++m) ranks[order[m]] = rank;
    i = j + 1;
  }
  return ranks;
}

double spearman_rho(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::LengthMismatch, "sequences differ in length");
  if (a.size() < 3) throw Error(ErrorCode::LengthMismatch, "spearman_rho needs at least 3 values");
  const std::vector<double> ra = average_ranks(a);
  const std::vector<double> rb = average_ranks(b);
  const double mean = 0.5 * static_cast<double>(a.size() + 1);
  double num = 0.0;
  double da = 0.0;
  double db = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    const double x = ra[i] - mean;
    const double y = rb[i] - mean;
    num += x * y;
    da += x * x;
    db += y * y;
  }
  if (da == 0.0 || db == 0.0) throw Error(ErrorCode::ZeroVariance, "input is constant");
  return std::clamp(num / std::sqrt(da * db), -1.0, 1.0);
}

}  // namespace clams
