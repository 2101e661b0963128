#pragma once

// Preference-weight identification. With thresholds held fixed the scores are
// linear in the weights, s = N w with N(i, k) = mu_plus(i, k) - mu_minus(i, k),
// so fitting decision-maker scores is a least-squares problem on the simplex.

#include <span>
#include <string>
#include <vector>

#include "netflow/core.hpp"

namespace netflow::ident {

struct IdentificationProblem {
  CriterionFlowMatrix flow_matrix;
  std::vector<double> target_scores;  // aligned with the flow matrix rows
};

struct IdentifiedWeights {
  std::vector<double> weights;
  double residual = 0.0;  // sum of squared errors
  std::string method_note;
  bool degenerate = false;      // N lacks full column rank: minimizer may not be unique
  bool underdetermined = false; // fewer alternatives than criteria
  bool ranking_reproduced = false;
};

/// Equally spaced targets on [-(m-1), m-1], best first: (m-1, m-3, ..., -(m-1)).
std::vector<double> equipartition_targets(std::size_t m);

/// Equipartition targets for `ranking` (best first), returned in the order of
/// `alternative_ids`. Throws NotAPermutation unless ranking is a permutation.
std::vector<double> equipartition_targets(std::span<const std::string> ranking,
                                          std::span<const std::string> alternative_ids);

/// Minimizes sum_i (sum_k w_k N(i, k) - target_i)^2 over w >= 0, sum w = 1.
IdentifiedWeights fit_weights(const IdentificationProblem& problem);

/// Objective of fit_weights at a given weight vector.
double objective(const CriterionFlowMatrix& flow_matrix, std::span<const double> targets,
                 std::span<const double> weights);

/// Scores given by the decision maker, aligned with criteria's alternatives.
/// ranking_reproduced compares the fitted ranking with the ranking the
/// target scores induce.
IdentifiedWeights fit_weights_from_scores(const CriteriaMatrix& criteria,
                                          const std::vector<ThresholdTriple>& thresholds,
                                          std::span<const double> target_scores, int exponent = 3);

/// Ranking (best first) given by the decision maker: flows, equipartition
/// targets, fit. ranking_reproduced is true when the identified weights rank
/// the alternatives exactly as given.
IdentifiedWeights fit_weights_from_ranking(const CriteriaMatrix& criteria,
                                           const std::vector<ThresholdTriple>& thresholds,
                                           std::span<const std::string> ranking, int exponent = 3);

}  // namespace netflow::ident
