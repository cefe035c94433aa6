#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "lsviae/cmdp.hpp"
#include "lsviae/config.hpp"
#include "lsviae/cost_model.hpp"
#include "lsviae/lsvi.hpp"
#include "lsviae/oracle.hpp"
#include "lsviae/penalty.hpp"

namespace lsviae {

/// Independent random streams derived from one root seed.
enum class Stream : std::uint32_t { kBuilder = 1, kTransitions = 2, kCostNoise = 3, kSigns = 4 };

std::uint64_t derive_seed(std::uint64_t root, Stream stream);

/// Builds the environment named by the config (builder randomness comes from
/// the kBuilder / kSigns streams). For env = file the file's horizon wins.
Environment make_environment(const ExperimentConfig& config);

/// Cost model matching the config over the environment's feature table.
std::unique_ptr<CostModel> make_cost_model(const Environment& env, const ExperimentConfig& config);

struct Metrics {
  // Per-episode series, index k - 1. Reward and regret are in the
  // environment's native units (reward_scale applied).
  std::vector<double> reward;
  std::vector<double> hard_violation;  // sum_h max(g_h, 0) with true means
  std::vector<double> soft_cost;       // sum_h g_h with true means
  std::vector<double> regret;          // V*_1(x_1) - V^{pi_k}_1(x_1)
  std::vector<double> cum_regret;
  std::vector<double> cum_violation;

  double optimal_value = 0.0;

  long episodes() const { return static_cast<long>(reward.size()); }
  double total_regret() const { return cum_regret.empty() ? 0.0 : cum_regret.back(); }
  double total_violation() const { return cum_violation.empty() ? 0.0 : cum_violation.back(); }
  /// max(0, sum of all soft costs): what a cancelling metric would report.
  double soft_violation() const;
  /// Mean reward over the last n episodes (or all when fewer).
  double mean_reward_tail(long n) const;
  /// Growth exponents; empty below 100 episodes.
  std::optional<double> regret_exponent() const;
  std::optional<double> violation_exponent() const;
};

/// What the observer sees after each episode's updates.
struct EpisodeRecord {
  long episode;
  const Plan& plan;
  const EpisodeTrace& trace;
  const PenaltyLedger& ledger;
  const CostModel& costs;
  const LsviLearner& learner;
};

using EpisodeObserver = std::function<void(const EpisodeRecord&)>;

Metrics run_experiment(const ExperimentConfig& config);

/// Runs on a prebuilt environment; config.horizon must equal its horizon.
Metrics run_experiment(const Environment& env, const ExperimentConfig& config, const EpisodeObserver& observer = {});

/// Least-squares slope of log(series[k]) against log(k + 1) over the second
/// half. Non-positive entries are skipped; an all-zero series gives 0.
/// Requires at least 100 entries.
double fit_growth_exponent(std::span<const double> series);

/// Writes results.csv and config.txt into `dir`, creating it if needed.
void emit_results(const Metrics& metrics, const ExperimentConfig& config, const std::filesystem::path& dir);

/// The CSV body: header episode,reward,hard_violation,cum_regret,cum_violation.
std::string results_csv(const Metrics& metrics);

}  // namespace lsviae
