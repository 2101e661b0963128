#pragma once

// Bundled E1 case study: five Munster cheese productions scored on aspect,
// odour, texture and taste (all in [0, 1], to maximize).

#include "netflow/core.hpp"

namespace netflow::fixtures {

CriteriaMatrix e1_criteria();

/// Uniform (q, p, v) = (0, 0.1, 0.3).
ThresholdTriple e1_thresholds();

/// Traditional, strongly typed product: weights (0.1, 0.4, 0.1, 0.4).
PreferenceModel e1_traditional_model();

/// Milder product for a wider market: weights (0.4, 0.1, 0.4, 0.1).
PreferenceModel e1_mild_model();

}  // namespace netflow::fixtures
