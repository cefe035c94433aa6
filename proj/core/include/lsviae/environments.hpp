#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "lsviae/cmdp.hpp"

namespace lsviae {

// ---------------------------------------------------------------------------
// Frozen Lake

/// Grid moves. The numeric values are the action ids used by the CMDP.
enum class GridMove : int { kUp = 0, kDown = 1, kLeft = 2, kRight = 3 };

/// Cells are numbered row-major: cell = row * width + col, row 0 at the top.
struct FrozenLakeLayout {
  int width = 0;
  int height = 0;
  std::vector<int> hazards;
  int goal = 0;
  int start = 0;
};

inline constexpr double kFrozenLakeGoalReward = 6.0;
inline constexpr double kFrozenLakeStepReward = 0.01;
inline constexpr double kFrozenLakeIntendedProb = 0.9;
inline constexpr double kFrozenLakeSlipProb = 0.05;

/// Builds the slippery grid world with one-hot features over (cell, move).
///
/// The intended move succeeds with probability 0.9 and each orthogonal move
/// happens with probability 0.05; moves that would leave the grid keep the
/// agent in place. The goal is absorbing. A move whose intended destination is
/// a hazard has cost +1, every other move -1. Rewards are 6 at the goal and
/// 0.01 elsewhere, stored divided by 6 (reward_scale() == 6).
Environment build_frozen_lake(const FrozenLakeLayout& layout, int horizon);

/// Parses an ASCII map: 'S' start, 'G' goal, 'H' hazard, '.' free. Blank
/// lines and trailing whitespace are ignored.
FrozenLakeLayout parse_frozen_lake_map(std::string_view ascii);
FrozenLakeLayout load_frozen_lake_map(const std::filesystem::path& path);

/// The 10x10 benchmark map shipped with the library.
std::string_view default_frozen_lake_map();

/// Destination cell of a move from `cell` without slipping (walls keep the
/// agent in place).
int grid_destination(const FrozenLakeLayout& layout, int cell, GridMove move);

// ---------------------------------------------------------------------------
// Synthetic linear CMDP

struct SyntheticLinearOptions {
  int num_states = 6;
  int num_actions = 4;
  /// Standard deviation of the Gaussian cost observation noise.
  double cost_noise = 0.1;
};

/// A random linear CMDP together with its ground-truth parameters.
///
/// Features are points on the probability simplex, so transitions
/// P_h(s'|s,a) = <phi(s,a), mu_h(s')> are mixtures of d latent next-state
/// distributions, rewards are <phi, reward_theta_h> and costs are exactly
/// <phi, cost_theta_h>. Coordinate 0 is a low-reward "safe" direction with
/// cost -1, and every state has one action concentrated on it, which makes
/// the instance feasible.
struct SyntheticLinearCmdp {
  Environment env;
  std::vector<Vector> cost_theta;    // per step, length d
  std::vector<Vector> reward_theta;  // per step, length d
  std::vector<Matrix> mu;            // per step, d x S
};

SyntheticLinearCmdp build_synthetic_linear(int dim, int horizon, std::uint64_t seed,
                                           const SyntheticLinearOptions& options = {});

// ---------------------------------------------------------------------------
// Lower-bound instance

/// The hard linear CMDP used for the regret/violation lower bound.
///
/// States 0..H-1 are the chain x_1..x_H, state H is x_{H+1} and state H+1 is
/// x_{H+2}; the last two are absorbing. Actions enumerate {-1,+1}^(d-1) with
/// bit j of the action id selecting +1 in coordinate j. Features have
/// dimension d + 1.
struct HardInstance {
  Environment env;
  int d = 0;
  double delta = 0.0;   // 1 / H
  double gap = 0.0;     // sqrt(delta / K) / (4 sqrt 2)
  double alpha = 0.0;   // sqrt(1 / (1 + gap (d - 1)))
  double beta = 0.0;    // sqrt(gap / (1 + gap (d - 1)))
  std::vector<Vector> u;      // per step, length d - 1, entries +-gap
  std::vector<Matrix> mu;     // per step, (d + 1) x S
  std::vector<Vector> theta;  // per step, length d + 1
  std::vector<int> best_action;  // per step, argmax_a <u_h, a>
  /// reachable[h][s]: state s can be occupied at step h from x_1.
  std::vector<std::vector<bool>> reachable;

  /// Action id -> sign vector in {-1,+1}^(d-1).
  Vector action_vector(int action) const;
};

/// `u_signs[h]` holds d - 1 entries in {-1, +1}. Enforces d >= 4, H >= 3,
/// K >= max{(d-1)^2 H / 2, (d-1) / (32 H (sqrt(d) - 1))}, d - 1 <= 12, and
/// that every transition probability lies in [0, 1].
HardInstance build_hard_instance(int d, int horizon, int episodes,
                                 const std::vector<std::vector<int>>& u_signs);

/// Deterministic sign pattern drawn from `seed`, convenient for callers that
/// do not care about the particular instance.
std::vector<std::vector<int>> random_sign_vectors(int d, int horizon, std::uint64_t seed);

}  // namespace lsviae
