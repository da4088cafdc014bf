#include "clams/kneedle.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "clams/errors.hpp"

namespace clams {

namespace {

std::vector<double> min_max_normalize(std::span<const double> v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  const double range = *hi - *lo;
  std::vector<double> out(v.size(), 0.0);
  if (range > 0.0) {
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = (v[i] - *lo) / range;
  }
  return out;
}

}  // namespace

std::optional<std::size_t> kneedle_knee(std::span<const double> x, std::span<const double> y,
                                        double sensitivity) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::LengthMismatch, "kneedle: x and y differ in length");
  }
  const std::size_t n = x.size();
  if (n < 3) throw Error(ErrorCode::TooShort, "kneedle needs at least 3 points");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(x[i] > x[i - 1])) {
      throw Error(ErrorCode::InvalidArgument, "kneedle: x must be strictly increasing");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(y[i])) throw Error(ErrorCode::NonFinite, "kneedle: non-finite y value");
  }

  const std::vector<double> xn = min_max_normalize(x);
  const std::vector<double> yn = min_max_normalize(y);
  const double y_top = *std::max_element(yn.begin(), yn.end());

  std::vector<double> diff(n);
  for (std::size_t i = 0; i < n; ++i) diff[i] = (y_top - yn[i]) - xn[i];

  // Local maxima with edge clipping (an endpoint compares against itself).
  std::vector<std::size_t> maxima;
  for (std::size_t i = 0; i < n; ++i) {
    const double left = diff[i == 0 ? 0 : i - 1];
    const double right = diff[i + 1 == n ? i : i + 1];
    if (diff[i] >= left && diff[i] >= right) maxima.push_back(i);
  }
  if (maxima.empty()) return std::nullopt;

  const double mean_spacing = (xn.back() - xn.front()) / static_cast<double>(n - 1);

  std::size_t next_max = 0;
  std::size_t threshold_index = maxima.front();
  double threshold = 0.0;
  for (std::size_t i = maxima.front(); i + 1 < n; ++i) {
    if (next_max < maxima.size() && maxima[next_max] == i) {
      threshold = diff[i] - sensitivity * mean_spacing;
      threshold_index = i;
      ++next_max;
    }
    if (diff[i + 1] < threshold) return threshold_index;
  }
  return std::nullopt;
}

}  // namespace clams
