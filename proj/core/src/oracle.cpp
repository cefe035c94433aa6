#include "lsviae/oracle.hpp"

#include <cmath>
#include <limits>

#include <fmt/core.h>

#include "lsviae/error.hpp"

namespace lsviae {

namespace {

// r + P V_{h+1} for one pair; next may be null at the last step.
double backup(const TabularCmdp& cmdp, int h, int s, int a, const Vector* next) {
  double q = cmdp.reward(h, s, a);
  if (next != nullptr) {
    const auto row = cmdp.transition_row(h, s, a);
    for (int x = 0; x < cmdp.num_states(); ++x) q += row[x] * (*next)[x];
  }
  return q;
}

PolicySolution solve(const TabularCmdp& cmdp, bool safe_only) {
  const int H = cmdp.horizon();
  const int S = cmdp.num_states();
  const int A = cmdp.num_actions();
  PolicySolution out;
  out.policy.actions.assign(H, std::vector<int>(S, 0));
  out.values.v.assign(H, Vector::Zero(S));
  out.values.q.assign(H, Vector::Zero(static_cast<Eigen::Index>(S) * A));
  for (int h = H - 1; h >= 0; --h) {
    const Vector* next = h + 1 < H ? &out.values.v[h + 1] : nullptr;
    for (int s = 0; s < S; ++s) {
      int best = -1;
      double best_q = -std::numeric_limits<double>::infinity();
      for (int a = 0; a < A; ++a) {
        const double q = backup(cmdp, h, s, a, next);
        out.values.q[h][s * A + a] = q;
        if (safe_only && !(cmdp.cost(h, s, a) <= 0.0)) continue;
        if (q > best_q) {
          best = a;
          best_q = q;
        }
      }
      if (best < 0) throw InfeasibleError(h, s, fmt::format("no safe action at step {}, state {}", h, s));
      out.policy.actions[h][s] = best;
      out.values.v[h][s] = best_q;
    }
  }
  return out;
}

}  // namespace

PolicySolution constrained_dp(const TabularCmdp& cmdp) { return solve(cmdp, true); }

PolicySolution unconstrained_dp(const TabularCmdp& cmdp) { return solve(cmdp, false); }

ValueTable policy_eval(const TabularCmdp& cmdp, const Policy& policy) {
  const int H = cmdp.horizon();
  const int S = cmdp.num_states();
  const int A = cmdp.num_actions();
  if (static_cast<int>(policy.actions.size()) != H) throw InvalidArgument("policy_eval: policy horizon mismatch");
  ValueTable out;
  out.v.assign(H, Vector::Zero(S));
  out.q.assign(H, Vector::Zero(static_cast<Eigen::Index>(S) * A));
  for (int h = H - 1; h >= 0; --h) {
    if (static_cast<int>(policy.actions[h].size()) != S) throw InvalidArgument("policy_eval: incomplete policy");
    const Vector* next = h + 1 < H ? &out.v[h + 1] : nullptr;
    for (int s = 0; s < S; ++s) {
      for (int a = 0; a < A; ++a) out.q[h][s * A + a] = backup(cmdp, h, s, a, next);
      const int a = policy.actions[h][s];
      if (a < 0 || a >= A) throw InvalidArgument(fmt::format("policy_eval: action {} out of range", a));
      out.v[h][s] = out.q[h][s * A + a];
    }
  }
  return out;
}

double bellman_residual(const TabularCmdp& cmdp, const ValueTable& values) {
  const int H = cmdp.horizon();
  const int S = cmdp.num_states();
  const int A = cmdp.num_actions();
  double worst = 0.0;
  for (int h = 0; h < H; ++h) {
    const Vector* next = h + 1 < H ? &values.v[h + 1] : nullptr;
    for (int s = 0; s < S; ++s) {
      for (int a = 0; a < A; ++a) {
        worst = std::max(worst, std::abs(values.q[h][s * A + a] - backup(cmdp, h, s, a, next)));
      }
    }
  }
  return worst;
}

EnumerationResult brute_force_enumerate(const TabularCmdp& cmdp, bool safe_only) {
  const int H = cmdp.horizon();
  const int S = cmdp.num_states();
  const int A = cmdp.num_actions();
  const double total = std::pow(static_cast<double>(A), static_cast<double>(S) * H);
  if (total > static_cast<double>(kEnumerationCap)) {
    throw InvalidArgument(fmt::format("brute_force_enumerate: {}^({}*{}) policies exceed the cap of {}", A, S, H,
                                      kEnumerationCap));
  }

  // Per-cell candidate lists; the policy is a mixed-radix counter over them.
  std::vector<std::vector<int>> choices(static_cast<std::size_t>(H) * S);
  for (int h = 0; h < H; ++h) {
    for (int s = 0; s < S; ++s) {
      auto& cell = choices[static_cast<std::size_t>(h) * S + s];
      for (int a = 0; a < A; ++a) {
        if (!safe_only || cmdp.cost(h, s, a) <= 0.0) cell.push_back(a);
      }
      if (cell.empty()) throw InfeasibleError(h, s, fmt::format("no safe action at step {}, state {}", h, s));
    }
  }

  std::vector<std::size_t> digits(choices.size(), 0);
  Policy current;
  current.actions.assign(H, std::vector<int>(S, 0));
  EnumerationResult best;
  best.value = -std::numeric_limits<double>::infinity();
  while (true) {
    for (std::size_t c = 0; c < choices.size(); ++c) current.actions[c / S][c % S] = choices[c][digits[c]];
    const double value = policy_eval(cmdp, current).initial_value(cmdp);
    ++best.policies_evaluated;
    if (value > best.value) {
      best.value = value;
      best.policy = current;
    }
    std::size_t c = 0;
    while (c < digits.size() && ++digits[c] == choices[c].size()) digits[c++] = 0;
    if (c == digits.size()) break;
  }
  return best;
}

}  // namespace lsviae
