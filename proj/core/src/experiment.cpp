#include "lsviae/experiment.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include <fmt/core.h>

#include "lsviae/environments.hpp"
#include "lsviae/error.hpp"
#include "lsviae/tabular_io.hpp"

namespace lsviae {

namespace {

// Largest |q_incremental - q_scratch| tolerated in debug-rebuild mode.
constexpr double kRebuildTolerance = 1e-6;

void check_finite(const Plan& plan, long episode) {
  for (int h = 0; h < static_cast<int>(plan.q.size()); ++h) {
    if (!plan.q[h].allFinite()) throw NumericalError(fmt::format("episode {}: non-finite Q at step {}", episode, h));
    if (!plan.cost_lcb[h].allFinite()) {
      throw NumericalError(fmt::format("episode {}: non-finite cost LCB at step {}", episode, h));
    }
    if (!plan.model.steps[h].weights.allFinite()) {
      throw NumericalError(fmt::format("episode {}: non-finite weights at step {}", episode, h));
    }
  }
}

void compare_plans(const Plan& incremental, const Plan& scratch, long episode) {
  for (std::size_t h = 0; h < incremental.q.size(); ++h) {
    const double gap = (incremental.q[h] - scratch.q[h]).cwiseAbs().maxCoeff();
    if (gap > kRebuildTolerance) {
      throw NumericalError(fmt::format("episode {}: incremental Q differs from rebuild by {:.3g} at step {}", episode,
                                       gap, h));
    }
  }
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t root, Stream stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(root), static_cast<std::uint32_t>(root >> 32),
                    static_cast<std::uint32_t>(stream)};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

Environment make_environment(const ExperimentConfig& config) {
  config.validate();
  switch (config.env) {
    case EnvKind::kFrozenLake: {
      const FrozenLakeLayout layout =
          config.map.empty() ? parse_frozen_lake_map(default_frozen_lake_map()) : load_frozen_lake_map(config.map);
      return build_frozen_lake(layout, config.horizon);
    }
    case EnvKind::kSyntheticLinear: {
      SyntheticLinearOptions options;
      options.num_states = config.synthetic_states;
      options.num_actions = config.synthetic_actions;
      options.cost_noise = config.synthetic_cost_noise;
      return build_synthetic_linear(config.dim, config.horizon, derive_seed(config.seed, Stream::kBuilder), options)
          .env;
    }
    case EnvKind::kHardInstance: {
      const auto signs = random_sign_vectors(config.dim, config.horizon, derive_seed(config.seed, Stream::kSigns));
      return build_hard_instance(config.dim, config.horizon, static_cast<int>(config.episodes), signs).env;
    }
    case EnvKind::kFile: return load_environment(config.env_file);
  }
  throw InvalidArgument("make_environment: unknown env kind");
}

std::unique_ptr<CostModel> make_cost_model(const Environment& env, const ExperimentConfig& config) {
  const int horizon = env.cmdp.horizon();
  if (config.cost_model == CostModelKind::kLinear) {
    auto model = std::make_unique<LinearCostModel>(env.features.table(), horizon, config.lambda, config.p);
    model->set_width_scale(config.cost_width_scale);
    return model;
  }
  auto model = std::make_unique<GpCostModel>(env.features.table(), horizon,
                                             Kernel::from_name(config.kernel, config.lengthscale), config.episodes,
                                             config.p);
  model->set_width_scale(config.cost_width_scale);
  return model;
}

double Metrics::soft_violation() const {
  return std::max(0.0, std::accumulate(soft_cost.begin(), soft_cost.end(), 0.0));
}

double Metrics::mean_reward_tail(long n) const {
  if (reward.empty()) return 0.0;
  const long count = std::min<long>(n, episodes());
  return std::accumulate(reward.end() - count, reward.end(), 0.0) / static_cast<double>(count);
}

std::optional<double> Metrics::regret_exponent() const {
  if (cum_regret.size() < 100) return std::nullopt;
  return fit_growth_exponent(cum_regret);
}

std::optional<double> Metrics::violation_exponent() const {
  if (cum_violation.size() < 100) return std::nullopt;
  return fit_growth_exponent(cum_violation);
}

Metrics run_experiment(const ExperimentConfig& config) {
  ExperimentConfig effective = config;
  const Environment env = make_environment(config);
  if (config.env == EnvKind::kFile) effective.horizon = env.cmdp.horizon();
  return run_experiment(env, effective);
}

Metrics run_experiment(const Environment& env, const ExperimentConfig& config, const EpisodeObserver& observer) {
  config.validate();
  const TabularCmdp& cmdp = env.cmdp;
  const FeatureMap& features = env.features;
  const int horizon = cmdp.horizon();
  if (config.horizon != horizon) {
    throw InvalidArgument(fmt::format("run_experiment: config horizon {} differs from the environment's {}",
                                      config.horizon, horizon));
  }
  cmdp.validate();

  const double scale = cmdp.reward_scale();
  const double optimum = constrained_dp(cmdp).values.initial_value(cmdp);

  std::unique_ptr<CostModel> costs = make_cost_model(env, config);
  PenaltyLedger ledger(horizon, penalty_mode(config.agent));
  const LsviParams params{config.lambda, effective_beta(config, features.dim())};
  LsviLearner learner(features, horizon, params);

  Rng transitions(derive_seed(config.seed, Stream::kTransitions));
  Rng noise(derive_seed(config.seed, Stream::kCostNoise));

  Metrics m;
  m.optimal_value = optimum * scale;
  const auto K = static_cast<std::size_t>(config.episodes);
  for (auto* series : {&m.reward, &m.hard_violation, &m.soft_cost, &m.regret, &m.cum_regret, &m.cum_violation}) {
    series->reserve(K);
  }
  std::vector<EpisodeTrace> history;
  EpisodeTrace trace;
  trace.steps.resize(horizon);

  for (long k = 1; k <= config.episodes; ++k) {
    const Plan plan = learner.plan(*costs, ledger, k);
    check_finite(plan, k);
    if (config.debug_rebuild) {
      compare_plans(plan, backward_pass({history, *costs, ledger}, features, params, k), k);
    }

    double reward = 0.0;
    double hard = 0.0;
    double soft = 0.0;
    int state = cmdp.initial_state();
    for (int h = 0; h < horizon; ++h) {
      const int action = plan.action(h, state);
      Transition& t = trace.steps[h];
      t.state = state;
      t.action = action;
      t.reward = cmdp.reward(h, state, action);
      t.observed_cost = observe_cost(cmdp, h, state, action, noise);
      t.next_state = sample_categorical(cmdp.transition_row(h, state, action), transitions);
      reward += t.reward;
      const double g = cmdp.cost(h, state, action);
      hard += std::max(g, 0.0);
      soft += g;
      state = t.next_state;
    }

    const double achieved = policy_eval(cmdp, Policy{plan.policy}).initial_value(cmdp);
    m.reward.push_back(reward * scale);
    m.hard_violation.push_back(hard);
    m.soft_cost.push_back(soft);
    m.regret.push_back((optimum - achieved) * scale);
    m.cum_regret.push_back((m.cum_regret.empty() ? 0.0 : m.cum_regret.back()) + m.regret.back());
    m.cum_violation.push_back((m.cum_violation.empty() ? 0.0 : m.cum_violation.back()) + hard);

    for (int h = 0; h < horizon; ++h) {
      const Transition& t = trace.steps[h];
      costs->observe(h, features.pair(t.state, t.action), t.observed_cost);
    }
    learner.ingest(trace);
    ledger.end_episode(trace, k);
    if (config.debug_rebuild) history.push_back(trace);
    if (observer) observer({k, plan, trace, ledger, *costs, learner});
  }
  return m;
}

}  // namespace lsviae
