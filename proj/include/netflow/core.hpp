#pragma once

// Static net-flow outranking model: concordance / discordance with
// indifference, preference and veto thresholds, the outranking degree,
// superiority / inferiority flows and the net-flow score.
//
// Every function here is pure. Criteria are always maximized; callers negate
// minimization criteria before building a CriteriaMatrix.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "netflow/errors.hpp"

namespace netflow {

inline constexpr double kWeightSumTolerance = 1e-9;
inline constexpr double kCompareTolerance = 1e-9;

/// Row-major dense matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// m alternatives by n criteria; value(i, k) is criterion k of alternative i.
/// The constructor enforces m >= 1, n >= 1, finite values and distinct ids.
class CriteriaMatrix {
 public:
  CriteriaMatrix(std::vector<std::string> alternative_ids,
                 std::vector<std::string> criterion_labels,
                 std::vector<std::vector<double>> values);

  std::size_t alternatives() const noexcept { return ids_.size(); }
  std::size_t criteria() const noexcept { return labels_.size(); }

  const std::vector<std::string>& alternative_ids() const noexcept { return ids_; }
  const std::vector<std::string>& criterion_labels() const noexcept { return labels_; }

  double value(std::size_t i, std::size_t k) const { return values_(i, k); }
  std::span<const double> row(std::size_t i) const { return values_.row(i); }
  const Matrix& values() const noexcept { return values_; }

  /// Index of an alternative id, or throws IndexOutOfRange.
  std::size_t index_of(const std::string& id) const;

  bool operator==(const CriteriaMatrix&) const = default;

 private:
  std::vector<std::string> ids_;
  std::vector<std::string> labels_;
  Matrix values_;
};

struct ThresholdTriple {
  double q = 0.0;  // indifference
  double p = 0.0;  // preference
  double v = 0.0;  // veto

  bool operator==(const ThresholdTriple&) const = default;
};

struct PreferenceModel {
  std::vector<double> weights;
  std::vector<ThresholdTriple> thresholds;
  int discordance_exponent = 3;

  bool operator==(const PreferenceModel&) const = default;
};

struct OutrankingMatrix {
  Matrix sigma;
};

/// Per-criterion decomposition of the flows: mu_plus(i, k) and
/// mu_minus(i, k). Scores are linear in the weights through net(i, k).
struct CriterionFlowMatrix {
  Matrix mu_plus;
  Matrix mu_minus;

  std::size_t alternatives() const noexcept { return mu_plus.rows(); }
  std::size_t criteria() const noexcept { return mu_plus.cols(); }
  double net(std::size_t i, std::size_t k) const { return mu_plus(i, k) - mu_minus(i, k); }
};

struct FlowResult {
  std::vector<double> phi_plus;
  std::vector<double> phi_minus;
  std::vector<double> scores;
};

struct RankEntry {
  std::string alternative_id;
  double score = 0.0;
  std::size_t rank = 0;  // 1 = best

  bool operator==(const RankEntry&) const = default;
};

using Ranking = std::vector<RankEntry>;

/// Checks weights (non-negative, summing to 1), threshold order
/// 0 <= q <= p <= v and lengths against n. Returns the model unchanged.
const PreferenceModel& validate_model(const PreferenceModel& model, std::size_t n);

/// Builds a model with every criterion sharing one threshold triple.
PreferenceModel uniform_thresholds_model(std::vector<double> weights, ThresholdTriple t,
                                         int exponent = 3);

double pairwise_difference(const CriteriaMatrix& criteria, std::size_t i, std::size_t j,
                           std::size_t k);

/// Partial concordance of "i at least as good as j" on one criterion.
/// Branches are tested in order self_pair, delta >= -q, delta <= -p, ramp,
/// so q == p degenerates to a step.
double concordance(double delta, const ThresholdTriple& t, bool self_pair);

/// Discordance, reaching 1 at the veto threshold. Branches: delta <= -v,
/// delta >= -p, ramp.
double discordance(double delta, const ThresholdTriple& t);

/// sigma(i, j) = (sum_k w_k c_k) * prod_k (1 - D_k^e); sigma(i, i) = 0.
double outranking_degree(const CriteriaMatrix& criteria, const PreferenceModel& model,
                         std::size_t i, std::size_t j);

OutrankingMatrix outranking_matrix(const CriteriaMatrix& criteria, const PreferenceModel& model);

/// omega_k(i, j) = c_k(i, j) * prod_l (1 - D_l(i, j)^e), summed over j for
/// mu_plus and over the transposed pair for mu_minus. Weights are ignored.
CriterionFlowMatrix criterion_net_flows(const CriteriaMatrix& criteria,
                                        const PreferenceModel& model);

FlowResult flows(const OutrankingMatrix& sigma);

/// Net-flow scores through the outranking matrix.
FlowResult static_scores(const CriteriaMatrix& criteria, const PreferenceModel& model);

/// s(i) = sum_k w_k (mu_plus(i, k) - mu_minus(i, k)).
std::vector<double> weighted_scores(const CriterionFlowMatrix& flows,
                                    std::span<const double> weights);

/// Orders alternatives by descending score. Equal scores (within
/// kCompareTolerance) keep input order.
Ranking rank(std::span<const double> scores, std::span<const std::string> ids);
Ranking rank(const FlowResult& result, std::span<const std::string> ids);

/// Ids of a ranking, best first.
std::vector<std::string> ranking_order(const Ranking& ranking);

}  // namespace netflow
