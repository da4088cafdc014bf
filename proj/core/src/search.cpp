#include "clams/search.hpp"

#include <cmath>
#include <vector>

#include "clams/errors.hpp"
#include "clams/random.hpp"

namespace clams {

double HyperParams::get(const std::string& name) const {
  const auto it = values_.find(name);
  if (it == values_.end()) throw Error(ErrorCode::InvalidArgument, "no hyperparameter '" + name + "'");
  return it->second;
}

int HyperParams::get_int(const std::string& name) const {
  return static_cast<int>(std::llround(get(name)));
}

HyperParams RandomSearch::propose(const ParamSpace& space, std::size_t index, std::uint64_t seed) {
  struct Bounds {
    long long lo = 0;
    long long hi = 0;
  };
  std::vector<Bounds> grid;
  std::size_t cells = 1;
  bool all_integer = true;
  for (const ParamRange& r : space) {
    if (!(r.hi >= r.lo)) throw Error(ErrorCode::InvalidArgument, "empty range for '" + r.name + "'");
    if (!r.integer) {
      all_integer = false;
      grid.push_back({});
      continue;
    }
    const auto lo = static_cast<long long>(std::ceil(r.lo));
    const auto hi = static_cast<long long>(std::floor(r.hi));
    if (hi < lo) throw Error(ErrorCode::InvalidArgument, "empty range for '" + r.name + "'");
    grid.push_back({lo, hi});
    const auto width = static_cast<std::size_t>(hi - lo + 1);
    cells = cells > kMaxGrid / width ? kMaxGrid + 1 : cells * width;
  }

  HyperParams h;
  if (all_integer && cells <= kMaxGrid) {
    std::vector<std::size_t> order(cells);
    for (std::size_t i = 0; i < cells; ++i) order[i] = i;
    Rng perm(derive_seed(seed, index / cells));
    perm.shuffle(order);
    std::size_t cell = order[index % cells];
    for (std::size_t p = 0; p < space.size(); ++p) {
      const auto width = static_cast<std::size_t>(grid[p].hi - grid[p].lo + 1);
      h.set(space[p].name, static_cast<double>(grid[p].lo + static_cast<long long>(cell % width)));
      cell /= width;
    }
    return h;
  }

  Rng rng(derive_seed(seed, index));
  for (std::size_t p = 0; p < space.size(); ++p) {
    const ParamRange& r = space[p];
    if (r.integer) {
      const auto width = static_cast<std::uint64_t>(grid[p].hi - grid[p].lo + 1);
      h.set(r.name, static_cast<double>(grid[p].lo + static_cast<long long>(rng.below(width))));
    } else {
      h.set(r.name, rng.uniform(r.lo, r.hi));
    }
  }
  return h;
}

std::unique_ptr<SearchStrategy> default_search() { return std::make_unique<RandomSearch>(); }

}  // namespace clams
