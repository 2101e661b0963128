#include "netflow/core.hpp"

#include <cmath>
#include <sstream>
#include <unordered_set>

namespace netflow {

namespace {

std::string describe_index(const char* what, std::size_t index, std::size_t bound) {
  std::ostringstream os;
  os << what << " index " << index << " out of range [0, " << bound << ")";
  return os.str();
}

void check_index(const char* what, std::size_t index, std::size_t bound) {
  if (index >= bound) throw Error(ErrorCode::IndexOutOfRange, describe_index(what, index, bound));
}

// prod_l (1 - D_l(i, j)^e) for an off-diagonal pair.
double veto_factor(const CriteriaMatrix& criteria, const PreferenceModel& model, std::size_t i,
                   std::size_t j) {
  double product = 1.0;
  for (std::size_t l = 0; l < criteria.criteria(); ++l) {
    const double d = discordance(criteria.value(i, l) - criteria.value(j, l), model.thresholds[l]);
    product *= 1.0 - std::pow(d, model.discordance_exponent);
  }
  return product;
}

void check_dimensions(const CriteriaMatrix& criteria, const PreferenceModel& model) {
  validate_model(model, criteria.criteria());
}

}  // namespace

CriteriaMatrix::CriteriaMatrix(std::vector<std::string> alternative_ids,
                               std::vector<std::string> criterion_labels,
                               std::vector<std::vector<double>> values)
    : ids_(std::move(alternative_ids)), labels_(std::move(criterion_labels)) {
  if (ids_.empty()) throw Error(ErrorCode::InvalidArgument, "criteria matrix needs at least one alternative");
  if (labels_.empty()) throw Error(ErrorCode::InvalidArgument, "criteria matrix needs at least one criterion");
  if (values.size() != ids_.size()) {
    std::ostringstream os;
    os << "criteria matrix has " << values.size() << " rows for " << ids_.size() << " alternatives";
    throw Error(ErrorCode::LengthMismatch, os.str());
  }
  std::unordered_set<std::string> seen;
  for (const auto& id : ids_) {
    if (!seen.insert(id).second) throw Error(ErrorCode::DuplicateId, "duplicate alternative id '" + id + "'");
  }
  values_ = Matrix(ids_.size(), labels_.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i].size() != labels_.size()) {
      std::ostringstream os;
      os << "row for alternative '" << ids_[i] << "' has " << values[i].size() << " values, expected "
         << labels_.size();
      throw Error(ErrorCode::LengthMismatch, os.str());
    }
    for (std::size_t k = 0; k < labels_.size(); ++k) {
      if (!std::isfinite(values[i][k])) {
        throw Error(ErrorCode::InvalidArgument,
                    "non-finite value for alternative '" + ids_[i] + "', criterion '" + labels_[k] + "'");
      }
      values_(i, k) = values[i][k];
    }
  }
}

std::size_t CriteriaMatrix::index_of(const std::string& id) const {
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (ids_[i] == id) return i;
  }
  throw Error(ErrorCode::IndexOutOfRange, "unknown alternative id '" + id + "'");
}

const PreferenceModel& validate_model(const PreferenceModel& model, std::size_t n) {
  if (model.weights.size() != n) {
    std::ostringstream os;
    os << "weights: got " << model.weights.size() << " values for " << n << " criteria";
    throw Error(ErrorCode::LengthMismatch, os.str());
  }
  if (model.thresholds.size() != n) {
    std::ostringstream os;
    os << "thresholds: got " << model.thresholds.size() << " triples for " << n << " criteria";
    throw Error(ErrorCode::LengthMismatch, os.str());
  }
  if (model.discordance_exponent < 1) {
    throw Error(ErrorCode::InvalidArgument, "exponent: discordance exponent must be a positive integer");
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double w = model.weights[k];
    if (!std::isfinite(w) || w < 0.0) {
      std::ostringstream os;
      os << "weights[" << k << "]: weight " << w << " must be non-negative";
      throw Error(ErrorCode::NegativeWeight, os.str());
    }
    sum += w;
  }
  if (std::abs(sum - 1.0) > kWeightSumTolerance) {
    std::ostringstream os;
    os.precision(12);
    os << "weights: weights must sum to 1, got " << sum;
    throw Error(ErrorCode::WeightSum, os.str());
  }
  for (std::size_t k = 0; k < n; ++k) {
    const auto& t = model.thresholds[k];
    if (!(std::isfinite(t.q) && std::isfinite(t.p) && std::isfinite(t.v)) || t.q < 0.0 || t.q > t.p ||
        t.p > t.v) {
      std::ostringstream os;
      os << "thresholds[" << k << "]: need 0 <= q <= p <= v, got q=" << t.q << " p=" << t.p << " v=" << t.v;
      throw Error(ErrorCode::ThresholdOrder, os.str());
    }
  }
  return model;
}

PreferenceModel uniform_thresholds_model(std::vector<double> weights, ThresholdTriple t, int exponent) {
  PreferenceModel model;
  model.thresholds.assign(weights.size(), t);
  model.weights = std::move(weights);
  model.discordance_exponent = exponent;
  return model;
}

double pairwise_difference(const CriteriaMatrix& criteria, std::size_t i, std::size_t j, std::size_t k) {
  check_index("alternative", i, criteria.alternatives());
  check_index("alternative", j, criteria.alternatives());
  check_index("criterion", k, criteria.criteria());
  return criteria.value(i, k) - criteria.value(j, k);
}

double concordance(double delta, const ThresholdTriple& t, bool self_pair) {
  if (self_pair) return 0.0;
  if (delta >= -t.q) return 1.0;
  if (delta <= -t.p) return 0.0;
  return (delta + t.p) / (t.p - t.q);
}

double discordance(double delta, const ThresholdTriple& t) {
  if (delta <= -t.v) return 1.0;
  if (delta >= -t.p) return 0.0;
  return (-delta - t.p) / (t.v - t.p);
}

double outranking_degree(const CriteriaMatrix& criteria, const PreferenceModel& model, std::size_t i,
                         std::size_t j) {
  check_dimensions(criteria, model);
  check_index("alternative", i, criteria.alternatives());
  check_index("alternative", j, criteria.alternatives());
  if (i == j) return 0.0;
  double agreement = 0.0;
  for (std::size_t k = 0; k < criteria.criteria(); ++k) {
    agreement += model.weights[k] *
                 concordance(criteria.value(i, k) - criteria.value(j, k), model.thresholds[k], false);
  }
  return agreement * veto_factor(criteria, model, i, j);
}

OutrankingMatrix outranking_matrix(const CriteriaMatrix& criteria, const PreferenceModel& model) {
  check_dimensions(criteria, model);
  const std::size_t m = criteria.alternatives();
  OutrankingMatrix out{Matrix(m, m)};
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (i != j) out.sigma(i, j) = outranking_degree(criteria, model, i, j);
    }
  }
  return out;
}

CriterionFlowMatrix criterion_net_flows(const CriteriaMatrix& criteria, const PreferenceModel& model) {
  check_dimensions(criteria, model);
  const std::size_t m = criteria.alternatives();
  const std::size_t n = criteria.criteria();
  CriterionFlowMatrix out{Matrix(m, n), Matrix(m, n)};
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      const double veto = veto_factor(criteria, model, i, j);
      for (std::size_t k = 0; k < n; ++k) {
        const double omega =
            concordance(criteria.value(i, k) - criteria.value(j, k), model.thresholds[k], false) * veto;
        out.mu_plus(i, k) += omega;
        out.mu_minus(j, k) += omega;
      }
    }
  }
  return out;
}

FlowResult flows(const OutrankingMatrix& sigma) {
  const std::size_t m = sigma.sigma.rows();
  FlowResult out{std::vector<double>(m, 0.0), std::vector<double>(m, 0.0), std::vector<double>(m, 0.0)};
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      out.phi_plus[i] += sigma.sigma(i, j);
      out.phi_minus[i] += sigma.sigma(j, i);
    }
  }
  for (std::size_t i = 0; i < m; ++i) out.scores[i] = out.phi_plus[i] - out.phi_minus[i];
  return out;
}

FlowResult static_scores(const CriteriaMatrix& criteria, const PreferenceModel& model) {
  return flows(outranking_matrix(criteria, model));
}

std::vector<double> weighted_scores(const CriterionFlowMatrix& flows, std::span<const double> weights) {
  if (weights.size() != flows.criteria()) {
    std::ostringstream os;
    os << "weights: got " << weights.size() << " values for " << flows.criteria() << " criteria";
    throw Error(ErrorCode::LengthMismatch, os.str());
  }
  std::vector<double> scores(flows.alternatives(), 0.0);
  for (std::size_t i = 0; i < flows.alternatives(); ++i) {
    for (std::size_t k = 0; k < flows.criteria(); ++k) scores[i] += weights[k] * flows.net(i, k);
  }
  return scores;
}

Ranking rank(std::span<const double> scores, std::span<const std::string> ids) {
  if (scores.size() != ids.size()) {
    std::ostringstream os;
    os << "rank: " << scores.size() << " scores for " << ids.size() << " alternatives";
    throw Error(ErrorCode::LengthMismatch, os.str());
  }
  // Insertion keeps input order among scores within the comparison tolerance;
  // a tolerant comparator is not a strict weak order, so std::stable_sort is out.
  Ranking out;
  out.reserve(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    std::size_t pos = out.size();
    while (pos > 0 && scores[i] > out[pos - 1].score + kCompareTolerance) --pos;
    out.insert(out.begin() + static_cast<std::ptrdiff_t>(pos), RankEntry{ids[i], scores[i], 0});
  }
  for (std::size_t r = 0; r < out.size(); ++r) out[r].rank = r + 1;
  return out;
}

Ranking rank(const FlowResult& result, std::span<const std::string> ids) {
  return rank(std::span<const double>(result.scores), ids);
}

std::vector<std::string> ranking_order(const Ranking& ranking) {
  std::vector<std::string> ids;
  ids.reserve(ranking.size());
  for (const auto& e : ranking) ids.push_back(e.alternative_id);
  return ids;
}

}  // namespace netflow
