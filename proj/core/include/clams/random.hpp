#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace clams {

// splitmix64 finalizer; combines a base seed with a stream index so that
// every (k, restart), fold, or draw gets an independent reproducible stream.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept;

// Seeded generator whose outputs are identical across standard libraries.
// The engine is std::mt19937_64 (fully specified by the standard); the
// distributions are implemented here because the std:: ones are not.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n); n must be > 0.
  std::uint64_t below(std::uint64_t n) noexcept;

  // Standard normal via Box-Muller; caches the second variate.
  double normal() noexcept;

  template <typename T>
  void shuffle(std::vector<T>& values) noexcept {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::swap(values[i - 1], values[below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace clams
