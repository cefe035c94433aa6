// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "condition_one.hpp"
#include "lsviae/environments.hpp"
#include "lsviae/experiment.hpp"
#include "lsviae/gram.hpp"
#include "lsviae/oracle.hpp"
#include "test_support.hpp"

namespace {

using namespace lsviae;

// Empirically tuned knobs shared by the Frozen Lake runs (see README).
constexpr double kFrozenLambda = 0.01;
constexpr double kFrozenBeta = 0.5;
constexpr double kFrozenCostWidth = 0.01;

// Synthetic linear CMDP runs.
constexpr double kSyntheticBeta = 8.0;
constexpr double kSyntheticCostWidth = 0.05;

// Knobs were tuned on seeds 1..5; acceptance runs use fresh seeds.
constexpr std::uint64_t kFirstSeed = 101;
constexpr int kSeeds = 5;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const Outcome& o, double seconds) {
  std::printf("%s criterion %d (%s): %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str(),
              seconds);
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

void run(int id, const std::string& name, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, fmt::format("exception: {}", e.what())};
  }
  report(id, name, o, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
}

// Every rectified-penalty run must keep Z_h >= k after episode k.
bool penalty_floor_held = true;
long penalty_floor_checks = 0;

Metrics run_checked(const ExperimentConfig& c) {
  ExperimentConfig effective = c;
  const Environment env = make_environment(c);
  effective.horizon = env.cmdp.horizon();
  EpisodeObserver observer;
  if (c.agent == Agent::kLsviAe) {
    observer = [](const EpisodeRecord& r) {
      ++penalty_floor_checks;
      for (double z : r.ledger.values())
        if (z < static_cast<double>(r.episode)) penalty_floor_held = false;
    };
  }
  return run_experiment(env, effective, observer);
}

ExperimentConfig frozen_config(Agent agent, std::uint64_t seed) {
  ExperimentConfig c;
  c.env = EnvKind::kFrozenLake;
  c.agent = agent;
  c.episodes = 1000;
  c.horizon = 15;
  c.lambda = kFrozenLambda;
  c.beta_override = kFrozenBeta;
  c.cost_width_scale = kFrozenCostWidth;
  c.seed = seed;
  return c;
}

ExperimentConfig synthetic_config(std::uint64_t seed) {
  ExperimentConfig c;
  c.env = EnvKind::kSyntheticLinear;
  c.agent = Agent::kLsviAe;
  c.dim = 8;
  c.horizon = 5;
  c.episodes = 2000;
  c.beta_override = kSyntheticBeta;
  c.cost_width_scale = kSyntheticCostWidth;
  c.seed = seed;
  return c;
}

std::vector<Metrics> synthetic_runs;

Outcome frozen_lake() {
  double reward[3] = {0, 0, 0};
  double violation[3] = {0, 0, 0};
  const Agent agents[3] = {Agent::kLsviAe, Agent::kLsvi, Agent::kLsviPrimal};
  for (std::uint64_t seed = kFirstSeed; seed < kFirstSeed + kSeeds; ++seed) {
    for (int i = 0; i < 3; ++i) {
      const Metrics m = run_checked(frozen_config(agents[i], seed));
      reward[i] += m.mean_reward_tail(100) / kSeeds;
      violation[i] += m.total_violation() / kSeeds;
    }
  }
  const bool ok = reward[0] >= 0.9 * reward[1] && violation[0] <= 0.5 * violation[1] &&
                  violation[0] <= 0.8 * violation[2];
  return {ok, fmt::format("tail reward ae/lsvi/primal = {:.3f}/{:.3f}/{:.3f} (need ae >= {:.3f}); "
                          "violation = {:.1f}/{:.1f}/{:.1f} (need ae <= {:.1f} and <= {:.1f})",
                          reward[0], reward[1], reward[2], 0.9 * reward[1], violation[0], violation[1], violation[2],
                          0.5 * violation[1], 0.8 * violation[2])};
}

void ensure_synthetic_runs() {
  if (!synthetic_runs.empty()) return;
  for (std::uint64_t seed = kFirstSeed; seed < kFirstSeed + kSeeds; ++seed) {
    synthetic_runs.push_back(run_checked(synthetic_config(seed)));
  }
}

// The criterion applies to the seed-averaged cumulative curve; per-seed
// exponents are printed for context.
Outcome synthetic_exponent(bool violation) {
  ensure_synthetic_runs();
  const std::size_t K = synthetic_runs.front().cum_regret.size();
  std::vector<double> mean(K, 0.0);
  std::string values;
  for (const Metrics& m : synthetic_runs) {
    const std::vector<double>& series = violation ? m.cum_violation : m.cum_regret;
    for (std::size_t k = 0; k < K; ++k) mean[k] += series[k] / static_cast<double>(synthetic_runs.size());
    values += fmt::format("{}{:.3f}", values.empty() ? "" : ", ", fit_growth_exponent(series));
  }
  const double e = fit_growth_exponent(mean);
  return {e <= 0.85, fmt::format("exponent of the {}-seed mean {:.3f} (need <= 0.85), final mean {:.1f}; per seed [{}]",
                                 synthetic_runs.size(), e, mean.back(), values)};
}

Outcome condition_one() {
  constexpr double p = 0.1;
  testing::OptimismTally lin;
  testing::OptimismTally gp;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto a = testing::linear_optimism(seed, p);
    lin.queries += a.queries;
    lin.above_truth += a.above_truth;
    lin.beyond_width += a.beyond_width;
    const auto b = testing::gp_optimism(seed, p);
    gp.queries += b.queries;
    gp.above_truth += b.above_truth;
    gp.beyond_width += b.beyond_width;
  }
  const bool ok = lin.above_rate() <= p && lin.beyond_rate() <= p && gp.above_rate() <= p && gp.beyond_rate() <= p;
  return {ok, fmt::format("linear: P(lcb>g)={:.4f}, P(g-lcb>e)={:.4f} over {} queries; "
                          "gp: P(lcb>g)={:.4f}, P(g-lcb>e)={:.4f} over {} queries (need <= {})",
                          lin.above_rate(), lin.beyond_rate(), lin.queries, gp.above_rate(), gp.beyond_rate(),
                          gp.queries, p)};
}

Outcome oracle_equivalence() {
  double worst = 0.0;
  int instances = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    // Sizes cycle through shapes with |A|^(S H) within the enumeration cap.
    const int shapes[5][3] = {{2, 2, 3}, {3, 2, 3}, {3, 3, 2}, {4, 2, 4}, {4, 3, 3}};
    const auto& s = shapes[seed % 5];
    const TabularCmdp cmdp = testing::random_cmdp(s[0], s[1], s[2], 1000 + seed).cmdp;
    const double dp = constrained_dp(cmdp).values.initial_value(cmdp);
    const double brute = brute_force_enumerate(cmdp, true).value;
    worst = std::max(worst, std::abs(dp - brute));
    ++instances;
  }
  return {worst <= 1e-10, fmt::format("{} instances, max |V_dp - V_brute| = {:.2e} (need <= 1e-10)", instances, worst)};
}

Outcome numerical_identities() {
  Rng rng(2024);
  // Rank-one inverse.
  GramState g(8, 1.0);
  Matrix gram = Matrix::Identity(8, 8);
  for (int i = 0; i < 200; ++i) {
    const Vector phi = testing::random_unit_vector(8, rng);
    g.update(phi, 0.0);
    gram += phi * phi.transpose();
  }
  const double inverse_gap = testing::max_abs(g.inverse() - testing::dense_inverse(gram));

  // Kernel ridge with a linear kernel against primal ridge.
  std::uniform_real_distribution<double> cost(-1.0, 1.0);
  Matrix points(5, 40);
  for (int i = 0; i < 40; ++i) points.col(i) = testing::random_ball_vector(5, rng);
  GpCostModel linear_gp(points, 1, Kernel::linear(), 100, 0.1);
  Matrix primal = linear_gp.lambda() * Matrix::Identity(5, 5);
  Vector b = Vector::Zero(5);
  for (int i = 0; i < 30; ++i) {
    const double c = cost(rng);
    linear_gp.observe(0, i, c);
    primal += points.col(i) * points.col(i).transpose();
    b += points.col(i) * c;
  }
  const Vector theta = primal.fullPivLu().solve(b);
  double ridge_gap = 0.0;
  for (int i = 0; i < 40; ++i) {
    ridge_gap = std::max(ridge_gap, std::abs(linear_gp.posterior(0, points.col(i)).mean - points.col(i).dot(theta)));
  }

  // Incremental information gain against a dense log-determinant.
  const Kernel se = Kernel::squared_exponential(0.5);
  GpCostModel gp(points, 1, se, 100, 0.1);
  for (int i = 0; i < 40; ++i) gp.observe(0, i, 0.0);
  Matrix m = Matrix::Identity(40, 40);
  for (int i = 0; i < 40; ++i)
    for (int j = 0; j < 40; ++j) m(i, j) += se(points.col(i), points.col(j)) / gp.lambda();
  const double gain_gap = std::abs(gp.info_gain(0) - 0.5 * std::log(m.fullPivLu().determinant()));

  // Elliptical potential.
  int potential_failures = 0;
  for (int seq = 0; seq < 100; ++seq) {
    const int d = 1 + seq % 10;
    const int n = 10 + 3 * seq;
    Matrix phis(d, n);
    Matrix lambda = Matrix::Identity(d, d);
    for (int i = 0; i < n; ++i) {
      phis.col(i) = testing::random_ball_vector(d, rng);
      lambda += phis.col(i) * phis.col(i).transpose();
    }
    const Matrix inv = testing::dense_inverse(lambda);
    double potential = 0.0;
    for (int i = 0; i < n; ++i) potential += phis.col(i).dot(inv * phis.col(i));
    if (potential > d + 1e-9) ++potential_failures;
  }

  const bool ok = inverse_gap <= 1e-8 && ridge_gap <= 1e-8 && gain_gap <= 1e-8 && potential_failures == 0;
  return {ok, fmt::format("inverse {:.1e}, ridge {:.1e}, info gain {:.1e} (need <= 1e-8); "
                          "elliptical bound violated on {}/100 sequences",
                          inverse_gap, ridge_gap, gain_gap, potential_failures)};
}

Outcome penalty_semantics() {
  const Environment env = testing::alternating_cost_env();
  ExperimentConfig c;
  c.env = EnvKind::kFile;
  c.env_file = "alternating";
  c.agent = Agent::kLsviPrimal;
  c.horizon = 1;
  c.episodes = 2000;
  c.beta_override = 0.1;
  long returns_to_zero = 0;
  const Metrics primal = run_experiment(env, c, [&](const EpisodeRecord& r) {
    if (r.ledger.z(0) == 0.0) ++returns_to_zero;
  });
  const double exponent = fit_growth_exponent(primal.cum_violation);

  c.agent = Agent::kLsviAe;
  const Metrics ae = run_experiment(env, c, [](const EpisodeRecord& r) {
    ++penalty_floor_checks;
    if (r.ledger.z(0) < static_cast<double>(r.episode)) penalty_floor_held = false;
  });

  const bool ok = penalty_floor_held && returns_to_zero > 0 && exponent >= 0.9;
  return {ok, fmt::format("Z>=k held on {} checked episodes: {}; primal queue hit 0 in {} episodes, "
                          "primal violation {:.0f} (soft {:.1f}) with exponent {:.3f} (need >= 0.9); ae violation {:.0f}",
                          penalty_floor_checks, penalty_floor_held ? "yes" : "no", returns_to_zero,
                          primal.total_violation(), primal.soft_violation(), exponent, ae.total_violation())};
}

Outcome hard_instance() {
  const HardInstance inst = build_hard_instance(4, 3, 1000, random_sign_vectors(4, 3, 7));
  const TabularCmdp& cmdp = inst.env.cmdp;
  const FeatureMap& f = inst.env.features;
  const int S = cmdp.num_states();
  const int A = cmdp.num_actions();
  double norm_gap = 0.0;
  double p_gap = 0.0;
  double r_gap = 0.0;
  double mu_excess = -1e300;
  for (int h = 0; h < 3; ++h) {
    for (int s = 0; s < S; ++s) {
      for (int a = 0; a < A; ++a) {
        const auto phi = f(s, a);
        norm_gap = std::max(norm_gap, std::abs(phi.norm() - 1.0));
        r_gap = std::max(r_gap, std::abs(cmdp.reward(h, s, a) - phi.dot(inst.theta[h])));
        if (!inst.reachable[h][s]) continue;
        const auto row = cmdp.transition_row(h, s, a);
        for (int x = 0; x < S; ++x) p_gap = std::max(p_gap, std::abs(row[x] - phi.dot(inst.mu[h].col(x))));
      }
    }
    for (int mask = 0; mask < (1 << S); ++mask) {
      Vector v(S);
      for (int x = 0; x < S; ++x) v[x] = mask >> x & 1 ? 1.0 : -1.0;
      mu_excess = std::max(mu_excess, (inst.mu[h] * v).norm() - std::sqrt(inst.d + 1.0));
    }
  }
  const bool ok = norm_gap <= 1e-12 && p_gap <= 1e-12 && r_gap <= 1e-12 && mu_excess <= 1e-12;
  return {ok, fmt::format("| |phi|-1 | {:.1e}, |P-<phi,mu>| {:.1e}, |r-<phi,theta>| {:.1e}, "
                          "max |mu v| - sqrt(d+1) = {:.3f} (need all <= 1e-12)",
                          norm_gap, p_gap, r_gap, mu_excess)};
}

}  // namespace

int main() {
  run(1, "Frozen Lake ratios", frozen_lake);
  run(2, "sublinear violation", [] { return synthetic_exponent(true); });
  run(3, "sublinear regret", [] { return synthetic_exponent(false); });
  run(4, "empirical optimism", condition_one);
  run(5, "oracle equivalence", oracle_equivalence);
  run(6, "numerical identities", numerical_identities);
  run(7, "penalty semantics", penalty_semantics);
  run(8, "hard instance", hard_instance);
  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
