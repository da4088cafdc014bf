#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "clams/types.hpp"

namespace clams {

struct GmmFitConfig {
  int k_max = 20;
  int restarts = 5;
  int max_iters = 200;
  // Convergence when the mean per-point log-likelihood gain drops below this.
  double loglik_tol = 1e-4;
  // Minimum eigenvalue of every component covariance.
  double covariance_floor = 1e-6;
  double kneedle_sensitivity = 1.0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct GmmFit {
  std::vector<GaussianComponent> components;
  double log_likelihood = 0.0;
  // Log-likelihood after every E-step of the winning restart.
  std::vector<double> loglik_trace;
  int restart = 0;
};

// Best of cfg.restarts k-means++-seeded EM runs with full covariances.
// Throws InvalidArgument when k is outside [1, N] and DegenerateFit when
// every restart leaves a component with weight below 1/(10N).
GmmFit fit_gmm(const Scatterplot& plot, int k, const GmmFitConfig& cfg);

// Posterior responsibilities, one row per point.
std::vector<std::vector<double>> responsibilities(std::span<const Point> points,
                                                  std::span<const GaussianComponent> components);

// Mixture log-likelihood of the points under the given components.
double mixture_log_likelihood(std::span<const Point> points,
                              std::span<const GaussianComponent> components);

// Bayesian information criterion for a 2-D full-covariance mixture:
// (6k - 1) ln(n) - 2 log L.
double bic(double log_likelihood, int k, std::size_t n);

// Knee of a BIC curve treated as decreasing-convex, k strictly increasing.
// Returns nullopt when Kneedle finds no knee.
std::optional<int> kneedle_elbow(std::span<const BicEntry> curve, double sensitivity = 1.0);

// Fits k = 1..min(k_max, N), records the BIC curve and selects K_opt by
// the Kneedle elbow of the curve up to its minimum, falling back to the
// argmin when that part has fewer than 3 points or no knee. Degenerate fits
// enter the curve as +inf and are excluded from selection.
Decomposition decompose(const Scatterplot& plot, const GmmFitConfig& cfg);

}  // namespace clams
