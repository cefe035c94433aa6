#include "lsviae/cmdp.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

#include "lsviae/error.hpp"

namespace lsviae {

TabularCmdp::TabularCmdp(int num_states, int num_actions, int horizon)
    : num_states_(num_states), num_actions_(num_actions), horizon_(horizon) {
  if (num_states < 1 || num_actions < 1 || horizon < 1) {
    throw InvalidArgument(fmt::format("TabularCmdp: sizes must be positive (S={}, A={}, H={})",
                                      num_states, num_actions, horizon));
  }
  const std::size_t cells = static_cast<std::size_t>(horizon) * num_states * num_actions;
  transition_.assign(cells * num_states, 0.0);
  reward_.assign(cells, 0.0);
  cost_mean_.assign(cells, 0.0);
}

void TabularCmdp::set_initial_state(int state) {
  if (state < 0 || state >= num_states_) {
    throw InvalidArgument(fmt::format("initial state {} out of range [0, {})", state, num_states_));
  }
  initial_state_ = state;
}

std::span<const double> TabularCmdp::transition_row(int h, int s, int a) const {
  return {transition_.data() + index(h, s, a) * num_states_, static_cast<std::size_t>(num_states_)};
}

std::span<double> TabularCmdp::mutable_transition_row(int h, int s, int a) {
  return {transition_.data() + index(h, s, a) * num_states_, static_cast<std::size_t>(num_states_)};
}

void TabularCmdp::validate() const {
  for (int h = 0; h < horizon_; ++h) {
    for (int s = 0; s < num_states_; ++s) {
      bool has_safe = false;
      for (int a = 0; a < num_actions_; ++a) {
        const auto row = transition_row(h, s, a);
        double total = 0.0;
        for (double p : row) {
          if (!(p >= 0.0)) {
            throw InvalidArgument(
                fmt::format("transition[{}][{}][{}] has a negative or NaN entry", h, s, a));
          }
          total += p;
        }
        if (std::abs(total - 1.0) > 1e-12) {
          throw InvalidArgument(
              fmt::format("transition[{}][{}][{}] sums to {:.17g}", h, s, a, total));
        }
        const double r = reward(h, s, a);
        if (!(r >= 0.0 && r <= 1.0)) {
          throw InvalidArgument(fmt::format("reward[{}][{}][{}] = {} outside [0,1]", h, s, a, r));
        }
        const double g = cost(h, s, a);
        if (!(g >= -1.0 && g <= 1.0)) {
          throw InvalidArgument(fmt::format("cost[{}][{}][{}] = {} outside [-1,1]", h, s, a, g));
        }
        has_safe = has_safe || g <= 0.0;
      }
      if (!has_safe) {
        throw InvalidArgument(fmt::format("no safe action at step {} state {}", h, s));
      }
    }
  }
}

bool TabularCmdp::is_feasible() const {
  for (int h = 0; h < horizon_; ++h) {
    for (int s = 0; s < num_states_; ++s) {
      bool has_safe = false;
      for (int a = 0; a < num_actions_ && !has_safe; ++a) has_safe = cost(h, s, a) <= 0.0;
      if (!has_safe) return false;
    }
  }
  return true;
}

FeatureMap::FeatureMap(int num_states, int num_actions, int dim)
    : num_states_(num_states),
      num_actions_(num_actions),
      table_(Matrix::Zero(dim, static_cast<Eigen::Index>(num_states) * num_actions)) {
  if (num_states < 1 || num_actions < 1 || dim < 1) {
    throw InvalidArgument("FeatureMap: sizes must be positive");
  }
}

FeatureMap FeatureMap::one_hot(int num_states, int num_actions) {
  FeatureMap map(num_states, num_actions, num_states * num_actions);
  map.table_.setIdentity();
  return map;
}

double FeatureMap::max_norm() const {
  return table_.cols() == 0 ? 0.0 : table_.colwise().norm().maxCoeff();
}

int sample_categorical(std::span<const double> probabilities, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double u = unit(rng);
  double cumulative = 0.0;
  int last_positive = 0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    if (probabilities[i] <= 0.0) continue;
    cumulative += probabilities[i];
    last_positive = static_cast<int>(i);
    if (u < cumulative) return last_positive;
  }
  // Rounding left u above the accumulated mass.
  return last_positive;
}

double observe_cost(const TabularCmdp& cmdp, int h, int s, int a, Rng& rng) {
  double g = cmdp.cost(h, s, a);
  if (cmdp.cost_noise().kind == CostNoise::Kind::kGaussian && cmdp.cost_noise().scale > 0.0) {
    std::normal_distribution<double> noise(0.0, cmdp.cost_noise().scale);
    g += noise(rng);
  }
  return std::clamp(g, -1.0, 1.0);
}

Transition step(const TabularCmdp& cmdp, int state, int action, int h, Rng& rng) {
  if (h < 0 || h >= cmdp.horizon()) {
    throw InvalidArgument(fmt::format("step index {} outside [0, {})", h, cmdp.horizon()));
  }
  if (state < 0 || state >= cmdp.num_states() || action < 0 || action >= cmdp.num_actions()) {
    throw InvalidArgument(fmt::format("state/action ({}, {}) out of range", state, action));
  }
  Transition t;
  t.state = state;
  t.action = action;
  t.reward = cmdp.reward(h, state, action);
  t.observed_cost = observe_cost(cmdp, h, state, action, rng);
  t.next_state = sample_categorical(cmdp.transition_row(h, state, action), rng);
  return t;
}

}  // namespace lsviae
