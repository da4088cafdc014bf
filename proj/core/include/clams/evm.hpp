#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "clams/types.hpp"

namespace clams {

// How points labeled -1 enter a comparison.
enum class UnassignedPolicy {
  Exclude,    // dropped from the comparison when -1 in either clustering
  Singleton,  // each such point becomes its own cluster
};

struct Contingency {
  std::size_t rows = 0;  // clusters of the first clustering
  std::size_t cols = 0;  // clusters of the second clustering
  std::vector<std::int64_t> counts;  // row-major rows x cols
  std::vector<std::int64_t> row_sums;
  std::vector<std::int64_t> col_sums;
  std::int64_t total = 0;

  std::int64_t at(std::size_t i, std::size_t j) const noexcept { return counts[i * cols + j]; }
};

// Throws LengthMismatch and EmptyOverlap (no point assigned in both).
Contingency contingency(const Clustering& c1, const Clustering& c2,
                        UnassignedPolicy policy = UnassignedPolicy::Exclude);

double adjusted_rand(const Clustering& c1, const Clustering& c2,
                     UnassignedPolicy policy = UnassignedPolicy::Exclude);

// Arithmetic-mean normalization, hypergeometric expected mutual information,
// natural logarithms.
double adjusted_mutual_info(const Clustering& c1, const Clustering& c2,
                            UnassignedPolicy policy = UnassignedPolicy::Exclude);

double mutual_information(const Contingency& table);
double expected_mutual_information(const Contingency& table);

struct HomogeneityCompleteness {
  double homogeneity = 1.0;
  double completeness = 1.0;
  double v_measure = 1.0;
};

// c1 holds the reference classes, c2 the predicted clusters.
HomogeneityCompleteness homogeneity_completeness_v(
    const Clustering& c1, const Clustering& c2,
    UnassignedPolicy policy = UnassignedPolicy::Exclude);

enum class Evm { Ami, Arand, Vm, Homo, Comp };

const char* to_string(Evm evm) noexcept;
Evm evm_from_string(const std::string& name);

double evm_score(Evm evm, const Clustering& c1, const Clustering& c2,
                 UnassignedPolicy policy = UnassignedPolicy::Exclude);

// 1 - (mean agreement over unordered clustering pairs), clipped to [0, 1].
// Pairs without overlap are skipped. Throws TooFewClusterings for fewer
// than two inputs and EmptyOverlap when every pair was skipped.
double ground_truth_ambiguity(std::span<const Clustering> clusterings, Evm evm,
                              UnassignedPolicy policy = UnassignedPolicy::Exclude);

// Pearson correlation of average ranks. Throws LengthMismatch (also for
// fewer than 3 values) and ZeroVariance when either input is all ties.
double spearman_rho(std::span<const double> a, std::span<const double> b);

// 1-based ranks with ties sharing their average rank.
std::vector<double> average_ranks(std::span<const double> values);

}  // namespace clams
