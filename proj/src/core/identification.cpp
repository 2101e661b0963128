#include "netflow/identification.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace netflow::ident {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr int kMaxGradientIterations = 20000;
constexpr double kSupportTolerance = 1e-12;

// Euclidean projection onto {w >= 0, sum w = 1} (sort-based).
VectorXd project_to_simplex(const VectorXd& y) {
  const Eigen::Index n = y.size();
  std::vector<double> sorted(y.data(), y.data() + n);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    cumulative += sorted[static_cast<std::size_t>(k)];
    const double candidate = (cumulative - 1.0) / static_cast<double>(k + 1);
    if (sorted[static_cast<std::size_t>(k)] - candidate > 0.0) theta = candidate;
  }
  return (y.array() - theta).max(0.0).matrix();
}

struct LeastSquares {
  MatrixXd design;  // N
  VectorXd target;  // b
  MatrixXd gram;    // N^T N
  VectorXd moment;  // N^T b

  double value(const VectorXd& w) const { return (design * w - target).squaredNorm(); }
  VectorXd gradient(const VectorXd& w) const { return 2.0 * (gram * w - moment); }
};

VectorXd accelerated_projected_gradient(const LeastSquares& ls, const VectorXd& start) {
  const double lipschitz =
      2.0 * Eigen::SelfAdjointEigenSolver<MatrixXd>(ls.gram, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
  if (!(lipschitz > 0.0)) return start;
  const double step = 1.0 / lipschitz;
  VectorXd x = start;
  VectorXd y = start;
  double momentum = 1.0;
  for (int it = 0; it < kMaxGradientIterations; ++it) {
    const VectorXd next = project_to_simplex(y - step * ls.gradient(y));
    const double next_momentum = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
    y = next + ((momentum - 1.0) / next_momentum) * (next - x);
    const double moved = (next - x).cwiseAbs().maxCoeff();
    x = next;
    momentum = next_momentum;
    if (moved < 1e-15) break;
  }
  return x;
}

// Minimizer of the objective on {sum_S w = 1, w outside S = 0}; least-norm
// solution of the KKT system when the support block is singular.
VectorXd solve_on_support(const LeastSquares& ls, const std::vector<Eigen::Index>& support) {
  const auto s = static_cast<Eigen::Index>(support.size());
  MatrixXd kkt = MatrixXd::Zero(s + 1, s + 1);
  VectorXd rhs(s + 1);
  for (Eigen::Index a = 0; a < s; ++a) {
    for (Eigen::Index b = 0; b < s; ++b) kkt(a, b) = 2.0 * ls.gram(support[a], support[b]);
    kkt(a, s) = 1.0;
    kkt(s, a) = 1.0;
    rhs(a) = 2.0 * ls.moment(support[a]);
  }
  rhs(s) = 1.0;
  const VectorXd sol = kkt.completeOrthogonalDecomposition().solve(rhs);
  VectorXd w = VectorXd::Zero(ls.gram.rows());
  for (Eigen::Index a = 0; a < s; ++a) w(support[a]) = sol(a);
  return w;
}

// Primal active-set iterations from a feasible point. Returns the final point
// (always feasible) and whether the KKT conditions were met.
std::pair<VectorXd, bool> active_set_polish(const LeastSquares& ls, VectorXd x) {
  const Eigen::Index n = x.size();
  std::vector<bool> in_support(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) in_support[static_cast<std::size_t>(k)] = x(k) > kSupportTolerance;
  const double scale = 1.0 + ls.gram.cwiseAbs().maxCoeff() + ls.moment.cwiseAbs().maxCoeff();

  for (int iter = 0; iter < 8 * static_cast<int>(n) + 16; ++iter) {
    std::vector<Eigen::Index> support;
    for (Eigen::Index k = 0; k < n; ++k) {
      if (in_support[static_cast<std::size_t>(k)]) support.push_back(k);
    }
    if (support.empty()) return {x, false};
    const VectorXd candidate = solve_on_support(ls, support);

    bool blocked = false;
    double step = 1.0;
    Eigen::Index blocking = -1;
    for (auto k : support) {
      if (candidate(k) < 0.0) {
        const double ratio = x(k) / (x(k) - candidate(k));
        if (ratio < step) {
          step = ratio;
          blocking = k;
        }
        blocked = true;
      }
    }
    if (blocked) {
      x = x + step * (candidate - x);
      if (blocking >= 0) {
        x(blocking) = 0.0;
        in_support[static_cast<std::size_t>(blocking)] = false;
      }
      for (auto k : support) {
        if (x(k) <= kSupportTolerance) {
          x(k) = 0.0;
          in_support[static_cast<std::size_t>(k)] = false;
        }
      }
      x /= x.sum();
      continue;
    }

    x = candidate;
    // Common gradient value on the support is the equality multiplier; a
    // zero weight whose gradient falls below it should enter the support.
    const VectorXd g = ls.gradient(x);
    double level = 0.0;
    for (auto k : support) level += g(k);
    level /= static_cast<double>(support.size());
    Eigen::Index entering = -1;
    double worst = -1e-11 * scale;
    for (Eigen::Index k = 0; k < n; ++k) {
      if (in_support[static_cast<std::size_t>(k)]) continue;
      const double slack = g(k) - level;
      if (slack < worst) {
        worst = slack;
        entering = k;
      }
    }
    if (entering < 0) return {x, true};
    in_support[static_cast<std::size_t>(entering)] = true;
  }
  return {x, false};
}

VectorXd clean_simplex(VectorXd w) {
  w = w.cwiseMax(0.0);
  const double sum = w.sum();
  if (sum > 0.0) w /= sum;
  return w;
}

Ranking ranking_of(std::span<const double> scores, const CriteriaMatrix& criteria) {
  return rank(scores, criteria.alternative_ids());
}

}  // namespace

std::vector<double> equipartition_targets(std::size_t m) {
  std::vector<double> out(m);
  for (std::size_t r = 0; r < m; ++r) {
    out[r] = static_cast<double>(m - 1) - 2.0 * static_cast<double>(r);
  }
  return out;
}

std::vector<double> equipartition_targets(std::span<const std::string> ranking,
                                          std::span<const std::string> alternative_ids) {
  if (ranking.size() != alternative_ids.size()) {
    std::ostringstream os;
    os << "ranking: lists " << ranking.size() << " alternatives, expected " << alternative_ids.size();
    throw Error(ErrorCode::NotAPermutation, os.str());
  }
  std::unordered_map<std::string, std::size_t> position;
  for (std::size_t i = 0; i < alternative_ids.size(); ++i) position.emplace(alternative_ids[i], i);
  const auto spaced = equipartition_targets(ranking.size());
  std::vector<double> out(alternative_ids.size());
  std::vector<bool> used(alternative_ids.size(), false);
  for (std::size_t r = 0; r < ranking.size(); ++r) {
    auto it = position.find(ranking[r]);
    if (it == position.end()) throw Error(ErrorCode::NotAPermutation, "ranking: unknown alternative '" + ranking[r] + "'");
    if (used[it->second]) throw Error(ErrorCode::NotAPermutation, "ranking: alternative '" + ranking[r] + "' listed twice");
    used[it->second] = true;
    out[it->second] = spaced[r];
  }
  return out;
}

double objective(const CriterionFlowMatrix& flow_matrix, std::span<const double> targets,
                 std::span<const double> weights) {
  const auto scores = weighted_scores(flow_matrix, weights);
  if (targets.size() != scores.size()) throw Error(ErrorCode::DimensionMismatch, "targets: length differs from alternatives");
  double total = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const double r = scores[i] - targets[i];
    total += r * r;
  }
  return total;
}

IdentifiedWeights fit_weights(const IdentificationProblem& problem) {
  const auto& flows = problem.flow_matrix;
  const std::size_t m = flows.alternatives();
  const std::size_t n = flows.criteria();
  if (problem.target_scores.size() != m) {
    std::ostringstream os;
    os << "target_scores: " << problem.target_scores.size() << " values for " << m << " alternatives";
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
  if (n == 0) throw Error(ErrorCode::DimensionMismatch, "flow matrix has no criteria");
  for (double t : problem.target_scores) {
    if (!std::isfinite(t)) throw Error(ErrorCode::InvalidArgument, "target_scores: non-finite value");
  }

  LeastSquares ls;
  ls.design.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
  ls.target.resize(static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      ls.design(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = flows.net(i, k);
    }
    ls.target(static_cast<Eigen::Index>(i)) = problem.target_scores[i];
  }
  ls.gram = ls.design.transpose() * ls.design;
  ls.moment = ls.design.transpose() * ls.target;

  IdentifiedWeights out;
  out.underdetermined = m < n;
  {
    Eigen::ColPivHouseholderQR<MatrixXd> qr(ls.design);
    qr.setThreshold(1e-10);
    out.degenerate = qr.rank() < static_cast<Eigen::Index>(n);
  }

  const VectorXd uniform = VectorXd::Constant(static_cast<Eigen::Index>(n), 1.0 / static_cast<double>(n));
  VectorXd best = clean_simplex(accelerated_projected_gradient(ls, uniform));
  double best_value = ls.value(best);
  out.method_note = "accelerated projected gradient";

  auto [polished, kkt_met] = active_set_polish(ls, best);
  polished = clean_simplex(polished);
  const double polished_value = ls.value(polished);
  if (polished_value < best_value - 1e-15 * (1.0 + best_value)) {
    best = polished;
    best_value = polished_value;
    out.method_note = kkt_met ? "accelerated projected gradient + active-set polish (KKT verified)"
                              : "accelerated projected gradient + partial active-set polish";
  }
  if (out.degenerate) out.method_note += "; flow matrix rank-deficient, minimizer may not be unique";
  if (out.underdetermined) out.method_note += "; fewer alternatives than criteria";

  out.weights.assign(best.data(), best.data() + best.size());
  out.residual = std::max(0.0, best_value);
  return out;
}

IdentifiedWeights fit_weights_from_scores(const CriteriaMatrix& criteria,
                                          const std::vector<ThresholdTriple>& thresholds,
                                          std::span<const double> target_scores, int exponent) {
  const std::size_t n = criteria.criteria();
  PreferenceModel model{std::vector<double>(n, 1.0 / static_cast<double>(n)), thresholds, exponent};
  IdentificationProblem problem{criterion_net_flows(criteria, model),
                                std::vector<double>(target_scores.begin(), target_scores.end())};
  auto out = fit_weights(problem);
  const auto fitted = weighted_scores(problem.flow_matrix, out.weights);
  out.ranking_reproduced = ranking_order(ranking_of(fitted, criteria)) ==
                           ranking_order(ranking_of(problem.target_scores, criteria));
  return out;
}

IdentifiedWeights fit_weights_from_ranking(const CriteriaMatrix& criteria,
                                           const std::vector<ThresholdTriple>& thresholds,
                                           std::span<const std::string> ranking, int exponent) {
  const auto targets = equipartition_targets(ranking, criteria.alternative_ids());
  auto out = fit_weights_from_scores(criteria, thresholds, targets, exponent);
  PreferenceModel fitted{out.weights, thresholds, exponent};
  const auto order = ranking_order(rank(static_scores(criteria, fitted), criteria.alternative_ids()));
  out.ranking_reproduced = std::equal(order.begin(), order.end(), ranking.begin(), ranking.end());
  return out;
}

}  // namespace netflow::ident
