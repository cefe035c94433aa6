#include <cmath>

#include <gtest/gtest.h>

#include "lsviae/environments.hpp"
#include "lsviae/experiment.hpp"
#include "lsviae/gram.hpp"
#include "test_support.hpp"

// Randomized checks of structural invariants across many generated inputs.

namespace lsviae {
namespace {

using testing::max_abs;

TEST(Properties, InverseStaysConsistent) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Rng rng(seed);
    const int d = 2 + static_cast<int>(seed % 9);
    GramState g(d, 0.5 + 0.1 * static_cast<double>(seed % 5));
    for (int i = 0; i < 300; ++i) g.update(testing::random_ball_vector(d, rng), 0.0);
    EXPECT_LE(max_abs(g.inverse() * g.gram() - Matrix::Identity(d, d)), 1e-8) << "seed " << seed;
  }
}

TEST(Properties, EllipticalPotentialBoundedByDimension) {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    Rng rng(seed);
    const int d = 1 + static_cast<int>(seed % 12);
    const int n = 5 + static_cast<int>(seed * 7 % 200);
    Matrix phis(d, n);
    Matrix gram = Matrix::Identity(d, d);
    for (int i = 0; i < n; ++i) {
      phis.col(i) = seed % 2 ? testing::random_unit_vector(d, rng) : testing::random_ball_vector(d, rng);
      gram += phis.col(i) * phis.col(i).transpose();
    }
    const Matrix inv = testing::dense_inverse(gram);
    double potential = 0.0;
    for (int i = 0; i < n; ++i) potential += phis.col(i).dot(inv * phis.col(i));
    EXPECT_LE(potential, d + 1e-9) << "seed " << seed;
  }
}

TEST(Properties, BonusShrinksAlongRepeatedDirection) {
  Rng rng(3);
  GramState g(6, 1.0);
  const Vector phi = testing::random_unit_vector(6, rng);
  double last = g.quadratic_form(phi);
  for (int i = 0; i < 50; ++i) {
    g.update(phi, 0.0);
    if (i % 3 == 0) g.update(testing::random_ball_vector(6, rng), 0.0);
    const double now = g.quadratic_form(phi);
    EXPECT_LE(now, last + 1e-15);
    last = now;
  }
}

struct RunChecks {
  double max_q_excess = -1e300;
  double max_weight_ratio = 0.0;
  bool z_floor_ok = true;
  bool z_monotone_ok = true;
};

RunChecks watch_run(const Environment& env, const ExperimentConfig& c) {
  RunChecks out;
  const double H = env.cmdp.horizon();
  const double d = env.features.dim();
  std::vector<double> last_z;
  run_experiment(env, c, [&](const EpisodeRecord& r) {
    for (int h = 0; h < env.cmdp.horizon(); ++h) {
      out.max_q_excess = std::max(out.max_q_excess, r.plan.q[h].maxCoeff() - H);
      // Weights of the plan used in episode k come from k - 1 samples.
      const double bound = 2.0 * H * std::sqrt(d * std::max<double>(r.episode - 1, 1) / c.lambda);
      out.max_weight_ratio = std::max(out.max_weight_ratio, r.plan.model.steps[h].weights.norm() / bound);
      if (c.agent == Agent::kLsviAe) {
        if (r.ledger.z(h) < static_cast<double>(r.episode)) out.z_floor_ok = false;
        if (!last_z.empty() && r.ledger.z(h) < last_z[h]) out.z_monotone_ok = false;
      }
    }
    last_z = r.ledger.values();
  });
  return out;
}

TEST(Properties, QCapWeightBoundAndPenaltyFloorOnRuns) {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const Environment env = testing::random_cmdp(4, 3, 4, seed);
    for (Agent agent : {Agent::kLsviAe, Agent::kLsvi, Agent::kLsviPrimal}) {
      ExperimentConfig c;
      c.env = EnvKind::kFile;
      c.env_file = "unused";
      c.agent = agent;
      c.horizon = 4;
      c.episodes = 60;
      c.seed = seed;
      c.beta_override = 0.3 * static_cast<double>(seed);
      const RunChecks r = watch_run(env, c);
      EXPECT_LE(r.max_q_excess, 0.0);
      EXPECT_LE(r.max_weight_ratio, 1.0);
      EXPECT_TRUE(r.z_floor_ok);
      EXPECT_TRUE(r.z_monotone_ok);
    }
  }
}

TEST(Properties, GpVarianceNeverGrowsAndInfoGainNeverShrinks) {
  Rng rng(12);
  std::uniform_int_distribution<int> pick(0, 24);
  std::uniform_real_distribution<double> cost(-1.0, 1.0);
  Matrix points(3, 25);
  for (int i = 0; i < 25; ++i) points.col(i) = testing::random_ball_vector(3, rng);
  for (const Kernel& kernel : {Kernel::linear(), Kernel::squared_exponential(0.3)}) {
    GpCostModel model(points, 1, kernel, 100, 0.1);
    Vector last_sigma(25);
    for (int i = 0; i < 25; ++i) last_sigma[i] = model.posterior(0, points.col(i)).sigma;
    double last_gain = 0.0;
    for (int n = 0; n < 60; ++n) {
      model.observe(0, pick(rng), cost(rng));
      EXPECT_GE(model.info_gain(0), last_gain);
      last_gain = model.info_gain(0);
      for (int i = 0; i < 25; ++i) {
        const auto post = model.posterior(0, points.col(i));
        EXPECT_GE(post.raw_variance, -1e-10);
        EXPECT_LE(post.sigma, last_sigma[i] + 1e-10);
        last_sigma[i] = post.sigma;
      }
    }
  }
}

TEST(Properties, HardInstanceMuMapsCubeIntoBall) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const HardInstance inst = build_hard_instance(4, 3, 1000, random_sign_vectors(4, 3, seed));
    const int S = inst.env.cmdp.num_states();
    const double bound = std::sqrt(inst.d + 1.0);
    for (int h = 0; h < 3; ++h)
      for (int mask = 0; mask < (1 << S); ++mask) {
        Vector v(S);
        for (int s = 0; s < S; ++s) v[s] = mask >> s & 1 ? 1.0 : -1.0;
        EXPECT_LE((inst.mu[h] * v).norm(), bound + 1e-12);
      }
  }
}

TEST(Properties, DpMatchesBruteForceAndDominance) {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const TabularCmdp cmdp = testing::random_cmdp(3, 2, 3 + static_cast<int>(seed % 3), seed * 31).cmdp;
    const PolicySolution dp = constrained_dp(cmdp);
    const double brute = brute_force_enumerate(cmdp, true).value;
    EXPECT_NEAR(dp.values.initial_value(cmdp), brute, 1e-10);
    EXPECT_LE(brute, unconstrained_dp(cmdp).values.initial_value(cmdp) + 1e-12);
    EXPECT_LE(bellman_residual(cmdp, dp.values), 1e-10);
  }
}

// Optimistic Q-values should sit above the safe optimum's Q-values except on
// a small fraction of entries.
TEST(Properties, OverestimationFrequency) {
  constexpr double p = 0.1;
  long below = 0;
  long total = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Environment env = testing::random_cmdp(3, 2, 3, 500 + seed);
    const ValueTable star = constrained_dp(env.cmdp).values;
    ExperimentConfig c;
    c.env = EnvKind::kFile;
    c.env_file = "unused";
    c.horizon = 3;
    c.episodes = 60;
    c.p = p;
    c.seed = seed;
    run_experiment(env, c, [&](const EpisodeRecord& r) {
      for (int h = 0; h < 3; ++h)
        for (Eigen::Index i = 0; i < r.plan.q[h].size(); ++i) {
          ++total;
          if (r.plan.q[h][i] < star.q[h][i] - 1e-12) ++below;
        }
    });
  }
  EXPECT_LE(static_cast<double>(below) / static_cast<double>(total), p);
}

}  // namespace
}  // namespace lsviae
