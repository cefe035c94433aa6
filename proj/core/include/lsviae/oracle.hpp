#pragma once

#include <vector>

#include "lsviae/cmdp.hpp"

namespace lsviae {

/// Deterministic policy: actions[h][s].
struct Policy {
  std::vector<std::vector<int>> actions;

  int operator()(int h, int s) const { return actions[h][s]; }
  bool operator==(const Policy&) const = default;
};

/// V[h][s] and Q[h][s * A + a]; the value after the last step is zero and is
/// not stored.
struct ValueTable {
  std::vector<Vector> v;
  std::vector<Vector> q;

  double initial_value(const TabularCmdp& cmdp) const { return v.front()[cmdp.initial_state()]; }
};

struct PolicySolution {
  Policy policy;
  ValueTable values;
};

/// Optimal policy among those with cost_mean <= 0 at every (h, s). Q entries
/// of unsafe actions are still filled with r + P V_{h+1} so the table is
/// Bellman-consistent. Throws InfeasibleError when some (h, s) has no safe
/// action.
PolicySolution constrained_dp(const TabularCmdp& cmdp);

/// Unconstrained optimum (plain value iteration over all actions).
PolicySolution unconstrained_dp(const TabularCmdp& cmdp);

/// Exact values of a deterministic policy.
ValueTable policy_eval(const TabularCmdp& cmdp, const Policy& policy);

/// max |Q - (r + P V_{h+1})| over all entries.
double bellman_residual(const TabularCmdp& cmdp, const ValueTable& values);

struct EnumerationResult {
  Policy policy;
  double value = 0.0;
  long policies_evaluated = 0;
};

/// Largest number of policies brute_force_enumerate will visit.
inline constexpr long kEnumerationCap = 1'000'000;

/// Evaluates every deterministic policy (restricted to safe actions when
/// safe_only) from the initial state and returns the best. The first policy
/// in enumeration order wins ties. Throws InvalidArgument when |A|^(S H)
/// exceeds kEnumerationCap.
EnumerationResult brute_force_enumerate(const TabularCmdp& cmdp, bool safe_only);

}  // namespace lsviae
