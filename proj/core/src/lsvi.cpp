#include "lsviae/lsvi.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

#include "lsviae/error.hpp"

namespace lsviae {

namespace {

// Sherman-Morrison drift is re-anchored by a fresh factorization this often.
constexpr long kRefactorizeEvery = 1024;

void check_feature_norm(const Eigen::Ref<const Vector>& phi) {
  const double norm = phi.norm();
  if (!(norm <= 1.0 + 1e-9)) throw InvalidArgument(fmt::format("feature norm {} exceeds 1", norm));
}

Plan empty_plan(int horizon, const LsviParams& params) {
  Plan plan;
  plan.model.steps.resize(horizon);
  plan.model.beta = params.beta;
  plan.model.cap = horizon;
  plan.q.resize(horizon);
  plan.cost_lcb.resize(horizon);
  plan.policy.resize(horizon);
  plan.value.resize(horizon);
  return plan;
}

void check_params(const LsviParams& params, int horizon) {
  if (horizon < 1) throw InvalidArgument("LSVI: horizon must be positive");
  if (!(params.lambda > 0.0)) throw InvalidArgument("LSVI: lambda must be positive");
  if (!(params.beta >= 0.0) || !std::isfinite(params.beta)) throw InvalidArgument("LSVI: beta must be finite and >= 0");
}

}  // namespace

double beta_schedule(double c, int d, int horizon, long episodes, double p) {
  if (!(p > 0.0 && p < 1.0)) throw InvalidArgument(fmt::format("beta_schedule: p must lie in (0,1), got {}", p));
  if (!(c > 0.0)) throw InvalidArgument("beta_schedule: c must be positive");
  if (d < 1 || horizon < 1 || episodes < 1) throw InvalidArgument("beta_schedule: d, H and K must be positive");
  const double iota = std::log(2.0 * d * horizon * static_cast<double>(episodes) / p);
  if (!(iota > 0.0)) throw InvalidArgument("beta_schedule: need 2dHK/p > 1");
  return c * d * horizon * std::sqrt(iota);
}

double QModel::q_value(int h, const Eigen::Ref<const Vector>& phi) const {
  check_feature_norm(phi);
  const Step& step = steps.at(h);
  const double radicand = phi.dot(*step.gram_inverse * phi);
  const double q = step.weights.dot(phi) + beta * std::sqrt(std::max(radicand, 0.0));
  return std::min(q, cap);
}

void select_actions(Plan& plan, int h, const FeatureMap& features, double z) {
  const int num_states = features.num_states();
  const int num_actions = features.num_actions();
  const Vector& q = plan.q[h];
  const Vector& lcb = plan.cost_lcb[h];
  if (q.size() != features.num_pairs() || lcb.size() != features.num_pairs()) {
    throw InvalidArgument("select_actions: table sizes do not match the feature map");
  }
  plan.policy[h].assign(num_states, 0);
  plan.value[h].resize(num_states);
  for (int s = 0; s < num_states; ++s) {
    const auto offset = static_cast<std::size_t>(features.pair(s, 0));
    const std::span<const double> q_row(q.data() + offset, num_actions);
    const std::span<const double> g_row(lcb.data() + offset, num_actions);
    const Selection pick = penalized_argmax(q_row, g_row, z);
    plan.policy[h][s] = pick.action;
    plan.value[h][s] = q_row[pick.action];
  }
}

Plan backward_pass(const BackwardPassInput& input, const FeatureMap& features, const LsviParams& params,
                   long episode) {
  const int horizon = input.ledger.horizon();
  check_params(params, horizon);
  if (input.costs.horizon() != horizon) throw InvalidArgument("backward_pass: cost model horizon mismatch");
  const int d = features.dim();
  const Matrix& table = features.table();

  Plan plan = empty_plan(horizon, params);
  Vector next_value = Vector::Zero(features.num_states());
  for (int h = horizon - 1; h >= 0; --h) {
    Matrix gram = params.lambda * Matrix::Identity(d, d);
    Vector b = Vector::Zero(d);
    for (const EpisodeTrace& trace : input.history) {
      if (static_cast<int>(trace.steps.size()) != horizon) throw InvalidArgument("backward_pass: trace length");
      const Transition& t = trace.steps[h];
      const auto phi = features(t.state, t.action);
      gram.noalias() += phi * phi.transpose();
      const double v_next = h + 1 < horizon ? next_value[t.next_state] : 0.0;
      b.noalias() += phi * (t.reward + v_next);
    }
    const Eigen::LLT<Matrix> llt(gram);
    if (llt.info() != Eigen::Success) throw NumericalError(fmt::format("backward_pass: Gram at step {} not PD", h));
    auto inverse = std::make_shared<Matrix>(llt.solve(Matrix::Identity(d, d)));
    Vector weights = llt.solve(b);

    const Matrix solved = llt.solve(table);
    Vector q(table.cols());
    for (Eigen::Index i = 0; i < table.cols(); ++i) {
      const double radicand = std::max(table.col(i).dot(solved.col(i)), 0.0);
      q[i] = std::min(table.col(i).dot(weights) + params.beta * std::sqrt(radicand), static_cast<double>(horizon));
    }
    plan.model.steps[h] = {std::move(weights), std::move(inverse)};
    plan.q[h] = std::move(q);
    plan.cost_lcb[h] = input.costs.lcb_table(h, episode);
    select_actions(plan, h, features, input.ledger.z(h));
    next_value = plan.value[h];
  }
  return plan;
}

LsviLearner::LsviLearner(const FeatureMap& features, int horizon, const LsviParams& params)
    : features_(&features), params_(params) {
  check_params(params, horizon);
  if (features.max_norm() > 1.0 + 1e-9) throw InvalidArgument("LsviLearner: feature table has norms above 1");
  const int d = features.dim();
  steps_.reserve(horizon);
  for (int h = 0; h < horizon; ++h) {
    GramState gram(d, params.lambda);
    auto snapshot = std::make_shared<Matrix>(gram.inverse());
    QuadraticFormCache bonus(features.table(), params.lambda);
    steps_.push_back({std::move(gram), std::move(snapshot), std::move(bonus), Vector::Zero(d),
                      Matrix::Zero(d, features.num_states())});
  }
}

Plan LsviLearner::plan(const CostModel& costs, const PenaltyLedger& ledger, long episode) const {
  const int horizon = this->horizon();
  if (costs.horizon() != horizon || ledger.horizon() != horizon) {
    throw InvalidArgument("LsviLearner::plan: horizon mismatch between learner, cost model and ledger");
  }
  const Matrix& table = features_->table();
  Plan plan = empty_plan(horizon, params_);
  Vector next_value = Vector::Zero(features_->num_states());
  for (int h = horizon - 1; h >= 0; --h) {
    const Step& step = steps_[h];
    Vector b = step.reward_sum;
    if (h + 1 < horizon) b.noalias() += step.next_state_sum * next_value;
    Vector weights = step.gram.inverse() * b;

    Vector q = table.transpose() * weights;
    q += params_.beta * step.bonus.values().cwiseMax(0.0).cwiseSqrt();
    q = q.cwiseMin(static_cast<double>(horizon));

    plan.model.steps[h] = {std::move(weights), step.inverse_snapshot};
    plan.q[h] = std::move(q);
    plan.cost_lcb[h] = costs.lcb_table(h, episode);
    select_actions(plan, h, *features_, ledger.z(h));
    next_value = plan.value[h];
  }
  return plan;
}

void LsviLearner::ingest(const EpisodeTrace& trace) {
  if (static_cast<int>(trace.steps.size()) != horizon()) throw InvalidArgument("LsviLearner: trace length");
  for (int h = 0; h < horizon(); ++h) {
    Step& step = steps_[h];
    const Transition& t = trace.steps[h];
    const auto phi = (*features_)(t.state, t.action);
    step.bonus.apply(step.gram.update(phi, 0.0));
    step.reward_sum.noalias() += phi * t.reward;
    step.next_state_sum.col(t.next_state) += phi;
    if (step.gram.num_samples() % kRefactorizeEvery == 0) {
      step.gram.refactorize();
      step.bonus.refresh(step.gram.inverse());
    }
    step.inverse_snapshot = std::make_shared<Matrix>(step.gram.inverse());
  }
}

}  // namespace lsviae
