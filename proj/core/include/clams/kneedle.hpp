#pragma once

#include <cstddef>
#include <optional>
#include <span>

namespace clams {

// Knee of a curve assumed decreasing and convex (Kneedle).
//
// Both axes are min-max normalized, the y axis is flipped so the curve
// rises, and the difference curve y_norm - x_norm is scanned. Each local
// maximum of the difference curve sets a threshold of its value minus
// sensitivity times the mean x spacing; if the difference curve falls
// below the current threshold before the next local maximum, the knee is
// the index of that maximum.
//
// Requires at least 3 points (TooShort) with strictly increasing x
// (InvalidArgument). Returns nullopt when no knee qualifies.
std::optional<std::size_t> kneedle_knee(std::span<const double> x, std::span<const double> y,
                                        double sensitivity = 1.0);

}  // namespace clams
