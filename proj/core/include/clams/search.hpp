#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace clams {

struct ParamRange {
  std::string name;
  double lo = 0.0;
  double hi = 1.0;
  bool integer = false;  // inclusive integer range when set
};

using ParamSpace = std::vector<ParamRange>;

class HyperParams {
 public:
  void set(const std::string& name, double value) { values_[name] = value; }
  // Throws InvalidArgument for an unknown name.
  double get(const std::string& name) const;
  int get_int(const std::string& name) const;
  const std::map<std::string, double>& values() const noexcept { return values_; }

  bool operator==(const HyperParams&) const = default;

 private:
  std::map<std::string, double> values_;
};

// Proposes the index-th candidate of a search. A strategy may keep state
// between calls; candidates must be reproducible from (space, index, seed)
// when the strategy is used fresh.
class SearchStrategy {
 public:
  virtual ~SearchStrategy() = default;
  virtual HyperParams propose(const ParamSpace& space, std::size_t index, std::uint64_t seed) = 0;
};

// Seeded uniform draws; draw i depends only on (seed, i), so a larger
// budget extends a smaller one. When every parameter is an integer and the
// grid has at most kMaxGrid cells, draws walk a seeded permutation of the
// grid (no repeats until it is exhausted); otherwise draws are independent.
class RandomSearch final : public SearchStrategy {
 public:
  static constexpr std::size_t kMaxGrid = 4096;

  HyperParams propose(const ParamSpace& space, std::size_t index, std::uint64_t seed) override;
};

std::unique_ptr<SearchStrategy> default_search();

}  // namespace clams
