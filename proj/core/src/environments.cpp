#include "lsviae/environments.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/core.h>

#include "lsviae/error.hpp"

namespace lsviae {
namespace {

constexpr std::string_view kDefaultMap =
    "S...H.....\n"
    ".H.....H..\n"
    "...H.H....\n"
    ".H....H...\n"
    "...H.G..H.\n"
    "..H...H...\n"
    "....H.....\n"
    ".H.....H..\n"
    "...H......\n"
    "......H...\n";

bool is_orthogonal(GridMove a, GridMove b) {
  const bool a_vertical = a == GridMove::kUp || a == GridMove::kDown;
  const bool b_vertical = b == GridMove::kUp || b == GridMove::kDown;
  return a_vertical != b_vertical;
}

}  // namespace

std::string_view default_frozen_lake_map() { return kDefaultMap; }

int grid_destination(const FrozenLakeLayout& layout, int cell, GridMove move) {
  int row = cell / layout.width;
  int col = cell % layout.width;
  switch (move) {
    case GridMove::kUp: --row; break;
    case GridMove::kDown: ++row; break;
    case GridMove::kLeft: --col; break;
    case GridMove::kRight: ++col; break;
  }
  if (row < 0 || row >= layout.height || col < 0 || col >= layout.width) return cell;
  return row * layout.width + col;
}

Environment build_frozen_lake(const FrozenLakeLayout& layout, int horizon) {
  if (layout.width < 1 || layout.height < 1 || layout.width * layout.height < 2) {
    throw InvalidArgument("frozen lake: grid must have at least two cells");
  }
  if (horizon < 1) throw InvalidArgument("frozen lake: horizon must be positive");
  const int cells = layout.width * layout.height;
  auto in_grid = [cells](int c) { return c >= 0 && c < cells; };
  if (!in_grid(layout.goal) || !in_grid(layout.start)) {
    throw InvalidArgument("frozen lake: start or goal outside the grid");
  }
  std::vector<bool> hazard(cells, false);
  for (int c : layout.hazards) {
    if (!in_grid(c)) throw InvalidArgument(fmt::format("frozen lake: hazard {} outside grid", c));
    hazard[c] = true;
  }
  if (hazard[layout.goal]) throw InvalidArgument("frozen lake: goal cell is a hazard");

  constexpr int kMoves = 4;
  TabularCmdp cmdp(cells, kMoves, horizon);
  cmdp.set_initial_state(layout.start);
  cmdp.set_reward_scale(kFrozenLakeGoalReward);

  for (int h = 0; h < horizon; ++h) {
    for (int s = 0; s < cells; ++s) {
      for (int a = 0; a < kMoves; ++a) {
        const auto intended = static_cast<GridMove>(a);
        auto row = cmdp.mutable_transition_row(h, s, a);
        if (s == layout.goal) {
          row[s] = 1.0;
        } else {
          for (int m = 0; m < kMoves; ++m) {
            const auto move = static_cast<GridMove>(m);
            double p = 0.0;
            if (move == intended) {
              p = kFrozenLakeIntendedProb;
            } else if (is_orthogonal(move, intended)) {
              p = kFrozenLakeSlipProb;
            }
            if (p > 0.0) row[grid_destination(layout, s, move)] += p;
          }
        }
        const double reward = s == layout.goal ? kFrozenLakeGoalReward : kFrozenLakeStepReward;
        cmdp.set_reward(h, s, a, reward / kFrozenLakeGoalReward);
        const bool unsafe = s != layout.goal && hazard[grid_destination(layout, s, intended)];
        cmdp.set_cost(h, s, a, unsafe ? 1.0 : -1.0);
      }
    }
  }
  cmdp.validate();
  return {std::move(cmdp), FeatureMap::one_hot(cells, kMoves)};
}

FrozenLakeLayout parse_frozen_lake_map(std::string_view ascii) {
  std::vector<std::string> rows;
  std::istringstream in{std::string(ascii)};
  for (std::string line; std::getline(in, line);) {
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.pop_back();
    if (!line.empty()) rows.push_back(line);
  }
  if (rows.empty()) throw InvalidArgument("frozen lake map: empty");
  FrozenLakeLayout layout;
  layout.height = static_cast<int>(rows.size());
  layout.width = static_cast<int>(rows.front().size());
  int starts = 0;
  int goals = 0;
  for (int r = 0; r < layout.height; ++r) {
    if (static_cast<int>(rows[r].size()) != layout.width) {
      throw InvalidArgument(fmt::format("frozen lake map: row {} has width {}, expected {}", r,
                                        rows[r].size(), layout.width));
    }
    for (int c = 0; c < layout.width; ++c) {
      const int cell = r * layout.width + c;
      switch (rows[r][c]) {
        case 'S': layout.start = cell; ++starts; break;
        case 'G': layout.goal = cell; ++goals; break;
        case 'H': layout.hazards.push_back(cell); break;
        case '.': break;
        default:
          throw InvalidArgument(
              fmt::format("frozen lake map: unexpected '{}' at row {} col {}", rows[r][c], r, c));
      }
    }
  }
  if (goals != 1) throw InvalidArgument("frozen lake map: expected exactly one 'G'");
  if (starts > 1) throw InvalidArgument("frozen lake map: more than one 'S'");
  return layout;
}

FrozenLakeLayout load_frozen_lake_map(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open map file '{}'", path.string()));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_frozen_lake_map(buffer.str());
}

// ---------------------------------------------------------------------------

namespace {

Vector draw_simplex(int dim, double concentration, Rng& rng) {
  std::gamma_distribution<double> gamma(concentration, 1.0);
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v[i] = gamma(rng);
  const double total = v.sum();
  if (total <= 0.0) {
    v.setZero();
    v[0] = 1.0;
    return v;
  }
  return v / total;
}

}  // namespace

SyntheticLinearCmdp build_synthetic_linear(int dim, int horizon, std::uint64_t seed,
                                           const SyntheticLinearOptions& options) {
  if (dim < 2) throw InvalidArgument("synthetic linear: d must be at least 2");
  if (horizon < 1) throw InvalidArgument("synthetic linear: horizon must be positive");
  const int num_states = options.num_states;
  const int num_actions = options.num_actions;
  if (num_states < 1 || num_actions < 2) {
    throw InvalidArgument("synthetic linear: need at least one state and two actions");
  }

  Rng rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> sym(-1.0, 1.0);

  SyntheticLinearCmdp out;
  for (int h = 0; h < horizon; ++h) {
    Vector cost(dim);
    Vector reward(dim);
    cost[0] = -1.0;
    reward[0] = 0.1 * unit(rng);
    for (int i = 1; i < dim; ++i) {
      cost[i] = sym(rng);
      reward[i] = unit(rng);
    }
    out.cost_theta.push_back(cost);
    out.reward_theta.push_back(reward);
    Matrix mu(dim, num_states);
    for (int i = 0; i < dim; ++i) mu.row(i) = draw_simplex(num_states, 0.5, rng).transpose();
    out.mu.push_back(std::move(mu));
  }

  auto near_zero_cost = [&](const Vector& phi) {
    for (const Vector& theta : out.cost_theta) {
      if (std::abs(phi.dot(theta)) < 1e-9) return true;
    }
    return false;
  };

  FeatureMap features(num_states, num_actions, dim);
  std::uniform_int_distribution<int> pick_action(0, num_actions - 1);
  for (int s = 0; s < num_states; ++s) {
    const int safe_action = pick_action(rng);
    for (int a = 0; a < num_actions; ++a) {
      Vector phi;
      do {
        if (a == safe_action) {
          phi = 0.3 * draw_simplex(dim, 0.5, rng);
          phi[0] += 0.7;
        } else {
          phi = draw_simplex(dim, 0.5, rng);
        }
      } while (near_zero_cost(phi));
      features(s, a) = phi;
    }
  }

  TabularCmdp cmdp(num_states, num_actions, horizon);
  cmdp.set_initial_state(0);
  cmdp.set_cost_noise(options.cost_noise > 0.0 ? CostNoise::gaussian(options.cost_noise)
                                                : CostNoise::none());
  for (int h = 0; h < horizon; ++h) {
    for (int s = 0; s < num_states; ++s) {
      for (int a = 0; a < num_actions; ++a) {
        const auto phi = features(s, a);
        const Vector next = out.mu[h].transpose() * phi;
        auto row = cmdp.mutable_transition_row(h, s, a);
        for (int sp = 0; sp < num_states; ++sp) row[sp] = std::max(0.0, next[sp]);
        // Mixture weights sum to one; renormalise the last bits of rounding.
        const double total = next.cwiseMax(0.0).sum();
        for (double& p : row) p /= total;
        cmdp.set_reward(h, s, a, std::clamp(phi.dot(out.reward_theta[h]), 0.0, 1.0));
        cmdp.set_cost(h, s, a, phi.dot(out.cost_theta[h]));
      }
    }
  }
  cmdp.validate();
  out.env = {std::move(cmdp), std::move(features)};
  return out;
}

// ---------------------------------------------------------------------------

Vector HardInstance::action_vector(int action) const {
  Vector a(d - 1);
  for (int j = 0; j < d - 1; ++j) a[j] = (action >> j) & 1 ? 1.0 : -1.0;
  return a;
}

std::vector<std::vector<int>> random_sign_vectors(int d, int horizon, std::uint64_t seed) {
  Rng rng(seed);
  std::bernoulli_distribution coin(0.5);
  std::vector<std::vector<int>> signs(horizon, std::vector<int>(std::max(d - 1, 0)));
  for (auto& v : signs) {
    for (int& x : v) x = coin(rng) ? 1 : -1;
  }
  return signs;
}

HardInstance build_hard_instance(int d, int horizon, int episodes,
                                 const std::vector<std::vector<int>>& u_signs) {
  if (d < 4) throw InvalidArgument("hard instance: requires d >= 4");
  if (horizon < 3) throw InvalidArgument("hard instance: requires H >= 3");
  if (d - 1 > 12) throw InvalidArgument("hard instance: d - 1 > 12 would exceed 4096 actions");
  const double dm1 = d - 1.0;
  const double k_min_a = dm1 * dm1 * horizon / 2.0;
  const double k_min_b = dm1 / (32.0 * horizon * (std::sqrt(static_cast<double>(d)) - 1.0));
  if (episodes < std::max(k_min_a, k_min_b)) {
    throw InvalidArgument(fmt::format("hard instance: K = {} below the required {:.6g}", episodes,
                                      std::max(k_min_a, k_min_b)));
  }
  if (static_cast<int>(u_signs.size()) != horizon) {
    throw InvalidArgument("hard instance: need one sign vector per step");
  }
  for (const auto& v : u_signs) {
    if (static_cast<int>(v.size()) != d - 1) {
      throw InvalidArgument("hard instance: sign vectors must have d - 1 entries");
    }
    for (int x : v) {
      if (x != 1 && x != -1) throw InvalidArgument("hard instance: signs must be +1 or -1");
    }
  }

  HardInstance inst;
  inst.d = d;
  inst.delta = 1.0 / horizon;
  inst.gap = std::sqrt(inst.delta / episodes) / (4.0 * std::sqrt(2.0));
  inst.alpha = std::sqrt(1.0 / (1.0 + inst.gap * dm1));
  inst.beta = std::sqrt(inst.gap / (1.0 + inst.gap * dm1));
  if (inst.delta + dm1 * inst.gap > 1.0 || inst.delta - dm1 * inst.gap < 0.0) {
    throw InvalidArgument("hard instance: delta +- (d-1) gap leaves [0, 1]");
  }

  const int num_states = horizon + 2;
  const int num_actions = 1 << (d - 1);
  const int chain_end = horizon;     // x_{H+1}
  const int rewarding = horizon + 1;  // x_{H+2}
  const int dim = d + 1;

  FeatureMap features(num_states, num_actions, dim);
  for (int s = 0; s < num_states; ++s) {
    for (int a = 0; a < num_actions; ++a) {
      Vector phi = Vector::Zero(dim);
      if (s == rewarding) {
        phi[dim - 1] = 1.0;
      } else {
        phi[0] = inst.alpha;
        phi.segment(1, d - 1) = inst.beta * inst.action_vector(a);
      }
      features(s, a) = phi;
    }
  }

  TabularCmdp cmdp(num_states, num_actions, horizon);
  cmdp.set_initial_state(0);
  for (int h = 0; h < horizon; ++h) {
    Vector u(d - 1);
    for (int j = 0; j < d - 1; ++j) u[j] = inst.gap * u_signs[h][j];
    inst.u.push_back(u);

    int best = 0;
    double best_value = -1e300;
    for (int a = 0; a < num_actions; ++a) {
      const double v = u.dot(inst.action_vector(a));
      if (v > best_value) {
        best_value = v;
        best = a;
      }
    }
    inst.best_action.push_back(best);

    // Columns of mu_h are the next-state measures; only x_{h+1} and x_{H+2}
    // carry mass from the state occupied at step h.
    Matrix mu = Matrix::Zero(dim, num_states);
    mu(0, h + 1) = (1.0 - inst.delta) / inst.alpha;
    mu.block(1, h + 1, d - 1, 1) = -u / inst.beta;
    mu(0, rewarding) = inst.delta / inst.alpha;
    mu.block(1, rewarding, d - 1, 1) = u / inst.beta;
    mu(dim - 1, rewarding) = 1.0;
    inst.mu.push_back(std::move(mu));

    Vector theta = Vector::Zero(dim);
    theta[dim - 1] = 1.0;
    inst.theta.push_back(theta);

    for (int s = 0; s < num_states; ++s) {
      for (int a = 0; a < num_actions; ++a) {
        auto row = cmdp.mutable_transition_row(h, s, a);
        if (s == chain_end || s == rewarding) {
          row[s] = 1.0;
        } else {
          const double to_reward = inst.delta + u.dot(inst.action_vector(a));
          row[rewarding] = to_reward;
          row[s + 1] = 1.0 - to_reward;
        }
        cmdp.set_reward(h, s, a, s == rewarding ? 1.0 : 0.0);
        const bool safe = s == chain_end || s == rewarding || a == best;
        cmdp.set_cost(h, s, a, safe ? 0.0 : 1.0);
      }
    }
  }
  cmdp.validate();

  inst.reachable.assign(horizon, std::vector<bool>(num_states, false));
  for (int h = 0; h < horizon; ++h) {
    inst.reachable[h][h] = true;
    if (h > 0) inst.reachable[h][rewarding] = true;
  }
  inst.env = {std::move(cmdp), std::move(features)};
  return inst;
}

}  // namespace lsviae
