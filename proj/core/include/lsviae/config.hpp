#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "lsviae/penalty.hpp"

namespace lsviae {

enum class EnvKind { kFrozenLake, kSyntheticLinear, kHardInstance, kFile };
enum class Agent { kLsviAe, kLsvi, kLsviPrimal };
enum class CostModelKind { kLinear, kGp };

std::string_view to_string(EnvKind kind);
std::string_view to_string(Agent agent);
std::string_view to_string(CostModelKind kind);
EnvKind parse_env_kind(std::string_view name);
Agent parse_agent(std::string_view name);
CostModelKind parse_cost_model(std::string_view name);

/// lsvi_ae -> rectified, lsvi -> off, lsvi_primal -> virtual queue.
PenaltyMode penalty_mode(Agent agent);

struct ExperimentConfig {
  EnvKind env = EnvKind::kFrozenLake;
  Agent agent = Agent::kLsviAe;
  long episodes = 1000;
  int horizon = 15;
  double p = 0.1;
  double lambda = 1.0;
  /// Constant in beta = c d H sqrt(log(2 d H K / p)); ignored when
  /// beta_override is set.
  double c_beta = 1.0;
  std::optional<double> beta_override;
  CostModelKind cost_model = CostModelKind::kLinear;
  std::string kernel = "linear";
  double lengthscale = 1.0;
  /// Multiplies the cost model's confidence radius.
  double cost_width_scale = 1.0;
  std::uint64_t seed = 0;

  /// Frozen Lake ASCII map; empty selects the built-in map.
  std::string map;
  /// Environment file for env = file.
  std::string env_file;
  /// Feature dimension for the synthetic and hard instances.
  int dim = 8;
  int synthetic_states = 6;
  int synthetic_actions = 4;
  double synthetic_cost_noise = 0.1;

  /// Output directory; empty disables file output.
  std::string out;
  /// Recompute every backward pass from scratch and compare.
  bool debug_rebuild = false;

  /// Throws InvalidArgument naming the first bad field.
  void validate() const;

  bool operator==(const ExperimentConfig&) const = default;
};

/// key=value lines, one per field, reals with 17 significant digits.
std::string serialize(const ExperimentConfig& config);

/// Applies key=value lines on top of `base`. Blank lines and '#' comments are
/// skipped; unknown keys are errors.
ExperimentConfig parse_config(std::string_view text, ExperimentConfig base = {});
ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base = {});

/// Sets one field from its textual value.
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value);

/// Effective Q bonus scale.
double effective_beta(const ExperimentConfig& config, int feature_dim);

}  // namespace lsviae
