#pragma once

#include <memory>
#include <span>
#include <vector>

#include "lsviae/cmdp.hpp"
#include "lsviae/cost_model.hpp"
#include "lsviae/gram.hpp"
#include "lsviae/penalty.hpp"

namespace lsviae {

/// c * d * H * sqrt(log(2 d H K / p)).
double beta_schedule(double c, int d, int horizon, long episodes, double p);

/// Clipped optimistic Q-function: Q_h(phi) = min{<w_h, phi> + beta ||phi||_{Lambda_h^-1}, cap}.
struct QModel {
  struct Step {
    Vector weights;
    std::shared_ptr<const Matrix> gram_inverse;
  };

  std::vector<Step> steps;
  double beta = 0.0;
  double cap = 0.0;

  int horizon() const { return static_cast<int>(steps.size()); }

  /// Requires ||phi|| <= 1 + 1e-9. The quadratic form is clamped at zero
  /// before the square root.
  double q_value(int h, const Eigen::Ref<const Vector>& phi) const;
};

/// Everything the backward pass produces for one episode over the enumerated
/// state-action pairs. Tables are indexed [h][s * A + a] and [h][s].
struct Plan {
  QModel model;
  std::vector<Vector> q;
  std::vector<Vector> cost_lcb;
  std::vector<std::vector<int>> policy;
  std::vector<Vector> value;

  int action(int h, int s) const { return policy[h][s]; }
};

struct LsviParams {
  double lambda = 1.0;
  double beta = 1.0;
};

/// Inputs for rebuilding the Q-model from scratch: the full history of
/// episodes 1..k-1 and the estimators as they stand after them.
struct BackwardPassInput {
  std::span<const EpisodeTrace> history;
  const CostModel& costs;
  const PenaltyLedger& ledger;
};

/// Least-squares value iteration from scratch: each step's Gram matrix and
/// regression targets are assembled from `history` and solved densely.
Plan backward_pass(const BackwardPassInput& input, const FeatureMap& features, const LsviParams& params,
                   long episode);

/// Incremental LSVI state. Gram matrices grow by one rank-1 update per step
/// per episode; regression targets r + V_{h+1}(x') are re-evaluated every
/// episode from per-next-state feature sums, which is algebraically the same
/// as summing over the raw history.
class LsviLearner {
 public:
  LsviLearner(const FeatureMap& features, int horizon, const LsviParams& params);

  int horizon() const { return static_cast<int>(steps_.size()); }
  const LsviParams& params() const { return params_; }
  const GramState& gram(int h) const { return steps_.at(h).gram; }

  /// Backward pass for episode `episode` given the estimators' current state.
  Plan plan(const CostModel& costs, const PenaltyLedger& ledger, long episode) const;

  /// Adds a finished episode to the regression data.
  void ingest(const EpisodeTrace& trace);

 private:
  struct Step {
    GramState gram;
    std::shared_ptr<Matrix> inverse_snapshot;
    QuadraticFormCache bonus;
    Vector reward_sum;     // sum phi * r
    Matrix next_state_sum; // d x S: column x' holds sum of phi over samples landing in x'
  };

  const FeatureMap* features_;
  LsviParams params_;
  std::vector<Step> steps_;
};

/// Fills q, cost_lcb, policy and value for step h from a Q table (before
/// clipping is applied by the caller) and the penalty Z_h.
void select_actions(Plan& plan, int h, const FeatureMap& features, double z);

}  // namespace lsviae
