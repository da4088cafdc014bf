#pragma once

#include "clams/gmm.hpp"
#include "clams/separability.hpp"
#include "clams/types.hpp"

namespace clams {

// Base-2 binary entropy with 0 log 0 = 0, so the result lies in [0, 1].
// Throws OutOfRange outside [0, 1].
double entropy_ambiguity(double s);

// Scores every unordered component pair of an existing decomposition and
// averages the pair ambiguities. A single component gives score 0.
AmbiguityReport score_decomposition(Decomposition decomposition, const SeparabilityModel& model);

// Points sorted by (x, y, original index) so the score does not depend on
// input row order.
Scatterplot canonical_order(const Scatterplot& plot);

// Full pipeline: canonical point order, GMM decomposition, pairwise
// separability, binary-entropy ambiguity, mean.
AmbiguityReport clams_score(const Scatterplot& plot, const SeparabilityModel& model,
                            const GmmFitConfig& gmm_cfg);

}  // namespace clams
