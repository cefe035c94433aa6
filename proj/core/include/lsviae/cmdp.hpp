#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace lsviae {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Random engine used throughout the library. Every stochastic operation takes
/// one by reference so that callers control seeding and stream separation.
using Rng = std::mt19937_64;

/// Observation model for the per-step cost signal G_h(x, a).
struct CostNoise {
  enum class Kind { kNone, kGaussian };

  Kind kind = Kind::kNone;
  /// Standard deviation of the additive zero-mean Gaussian.
  double scale = 0.0;

  static CostNoise none() { return {}; }
  static CostNoise gaussian(double scale) { return {Kind::kGaussian, scale}; }
};

/// A finite-horizon constrained MDP with tabular dynamics.
///
/// Steps are 0-based throughout the library: a horizon-H problem has steps
/// 0..H-1. Transitions, rewards and cost means are stored densely and indexed
/// by (step, state, action).
class TabularCmdp {
 public:
  TabularCmdp() = default;
  TabularCmdp(int num_states, int num_actions, int horizon);

  int num_states() const { return num_states_; }
  int num_actions() const { return num_actions_; }
  int horizon() const { return horizon_; }
  int num_pairs() const { return num_states_ * num_actions_; }

  int initial_state() const { return initial_state_; }
  void set_initial_state(int state);

  const CostNoise& cost_noise() const { return cost_noise_; }
  void set_cost_noise(CostNoise noise) { cost_noise_ = noise; }

  /// Multiplier that converts stored rewards back to the environment's native
  /// units for reporting (Frozen Lake stores rewards divided by 6).
  double reward_scale() const { return reward_scale_; }
  void set_reward_scale(double scale) { reward_scale_ = scale; }

  std::span<const double> transition_row(int h, int s, int a) const;
  std::span<double> mutable_transition_row(int h, int s, int a);

  double reward(int h, int s, int a) const { return reward_[index(h, s, a)]; }
  double cost(int h, int s, int a) const { return cost_mean_[index(h, s, a)]; }
  void set_reward(int h, int s, int a, double value) { reward_[index(h, s, a)] = value; }
  void set_cost(int h, int s, int a, double value) { cost_mean_[index(h, s, a)] = value; }

  /// Checks every structural invariant: rows are distributions (1e-12),
  /// rewards in [0,1], costs in [-1,1], and a safe action exists at every
  /// (h, s). Throws InvalidArgument naming the first offending entry.
  void validate() const;

  /// True when every (h, s) has an action with cost_mean <= 0.
  bool is_feasible() const;

 private:
  std::size_t index(int h, int s, int a) const {
    return (static_cast<std::size_t>(h) * num_states_ + s) * num_actions_ + a;
  }

  int num_states_ = 0;
  int num_actions_ = 0;
  int horizon_ = 0;
  int initial_state_ = 0;
  double reward_scale_ = 1.0;
  CostNoise cost_noise_;
  std::vector<double> transition_;
  std::vector<double> reward_;
  std::vector<double> cost_mean_;
};

/// Feature map phi(s, a) stored column-wise: column s * A + a is phi(s, a).
class FeatureMap {
 public:
  FeatureMap() = default;
  FeatureMap(int num_states, int num_actions, int dim);

  /// One-hot map over (state, action) pairs, d = S * A.
  static FeatureMap one_hot(int num_states, int num_actions);

  int dim() const { return static_cast<int>(table_.rows()); }
  int num_states() const { return num_states_; }
  int num_actions() const { return num_actions_; }
  int num_pairs() const { return num_states_ * num_actions_; }
  int pair(int s, int a) const { return s * num_actions_ + a; }

  auto operator()(int s, int a) const { return table_.col(pair(s, a)); }
  auto operator()(int s, int a) { return table_.col(pair(s, a)); }

  /// d x (S*A) matrix of all features.
  const Matrix& table() const { return table_; }

  /// Largest Euclidean norm over the table.
  double max_norm() const;

 private:
  int num_states_ = 0;
  int num_actions_ = 0;
  Matrix table_;
};

struct Environment {
  TabularCmdp cmdp;
  FeatureMap features;
};

struct Transition {
  int state = 0;
  int action = 0;
  double reward = 0.0;
  double observed_cost = 0.0;
  int next_state = 0;

  bool operator==(const Transition&) const = default;
};

/// One episode; steps.size() equals the horizon.
struct EpisodeTrace {
  std::vector<Transition> steps;

  bool operator==(const EpisodeTrace&) const = default;
};

/// Samples one environment transition at step h.
Transition step(const TabularCmdp& cmdp, int state, int action, int h, Rng& rng);

/// Draws a fresh cost observation for (h, s, a): mean plus noise, clipped to
/// [-1, 1].
double observe_cost(const TabularCmdp& cmdp, int h, int s, int a, Rng& rng);

/// Draws an index from a probability row by inversion.
int sample_categorical(std::span<const double> probabilities, Rng& rng);

}  // namespace lsviae
