#include "lsviae/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/core.h>

#include "lsviae/error.hpp"
#include "lsviae/lsvi.hpp"

namespace lsviae {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) throw InvalidArgument(fmt::format("config: bad value '{}' for {}", text, key));
  return value;
}

bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw InvalidArgument(fmt::format("config: bad boolean '{}' for {}", text, key));
}

std::string real(double x) { return fmt::format("{:.17g}", x); }

}  // namespace

std::string_view to_string(EnvKind kind) {
  switch (kind) {
    case EnvKind::kFrozenLake: return "frozen_lake";
    case EnvKind::kSyntheticLinear: return "synthetic_linear";
    case EnvKind::kHardInstance: return "hard_instance";
    case EnvKind::kFile: return "file";
  }
  return "unknown";
}

std::string_view to_string(Agent agent) {
  switch (agent) {
    case Agent::kLsviAe: return "lsvi_ae";
    case Agent::kLsvi: return "lsvi";
    case Agent::kLsviPrimal: return "lsvi_primal";
  }
  return "unknown";
}

std::string_view to_string(CostModelKind kind) { return kind == CostModelKind::kLinear ? "linear" : "gp"; }

EnvKind parse_env_kind(std::string_view name) {
  for (EnvKind k : {EnvKind::kFrozenLake, EnvKind::kSyntheticLinear, EnvKind::kHardInstance, EnvKind::kFile}) {
    if (name == to_string(k)) return k;
  }
  throw InvalidArgument(fmt::format("unknown env '{}'", name));
}

Agent parse_agent(std::string_view name) {
  for (Agent a : {Agent::kLsviAe, Agent::kLsvi, Agent::kLsviPrimal}) {
    if (name == to_string(a)) return a;
  }
  throw InvalidArgument(fmt::format("unknown agent '{}'", name));
}

CostModelKind parse_cost_model(std::string_view name) {
  if (name == "linear") return CostModelKind::kLinear;
  if (name == "gp") return CostModelKind::kGp;
  throw InvalidArgument(fmt::format("unknown cost model '{}'", name));
}

PenaltyMode penalty_mode(Agent agent) {
  switch (agent) {
    case Agent::kLsviAe: return PenaltyMode::kRectified;
    case Agent::kLsvi: return PenaltyMode::kOff;
    case Agent::kLsviPrimal: return PenaltyMode::kVirtualQueue;
  }
  return PenaltyMode::kOff;
}

void ExperimentConfig::validate() const {
  if (episodes < 1) throw InvalidArgument("config: episodes must be >= 1");
  if (horizon < 1) throw InvalidArgument("config: horizon must be >= 1");
  if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("config: p must lie in (0,1)");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidArgument("config: lambda must be positive");
  if (!(c_beta > 0.0) || !std::isfinite(c_beta)) throw InvalidArgument("config: c_beta must be positive");
  if (beta_override && (!(*beta_override >= 0.0) || !std::isfinite(*beta_override))) {
    throw InvalidArgument("config: beta_override must be finite and >= 0");
  }
  if (kernel != "linear" && kernel != "sqexp") throw InvalidArgument(fmt::format("config: unknown kernel '{}'", kernel));
  if (!(lengthscale > 0.0) || !std::isfinite(lengthscale)) throw InvalidArgument("config: lengthscale must be positive");
  if (!(cost_width_scale >= 0.0) || !std::isfinite(cost_width_scale)) {
    throw InvalidArgument("config: cost_width_scale must be finite and >= 0");
  }
  if (env == EnvKind::kFile && env_file.empty()) throw InvalidArgument("config: env=file needs env_file");
  if (env == EnvKind::kSyntheticLinear && dim < 2) throw InvalidArgument("config: synthetic env needs dim >= 2");
  if (env == EnvKind::kHardInstance && dim < 4) throw InvalidArgument("config: hard instance needs dim >= 4");
  if (synthetic_states < 1 || synthetic_actions < 2) {
    throw InvalidArgument("config: synthetic env needs >= 1 state and >= 2 actions");
  }
  if (!(synthetic_cost_noise >= 0.0)) throw InvalidArgument("config: synthetic_cost_noise must be >= 0");
}

std::string serialize(const ExperimentConfig& c) {
  std::string out;
  const auto line = [&out](std::string_view key, std::string_view value) {
    out += key;
    out += '=';
    out += value;
    out += '\n';
  };
  line("env", to_string(c.env));
  line("agent", to_string(c.agent));
  line("episodes", std::to_string(c.episodes));
  line("horizon", std::to_string(c.horizon));
  line("p", real(c.p));
  line("lambda", real(c.lambda));
  line("c_beta", real(c.c_beta));
  line("beta_override", c.beta_override ? real(*c.beta_override) : "none");
  line("cost_model", to_string(c.cost_model));
  line("kernel", c.kernel);
  line("lengthscale", real(c.lengthscale));
  line("cost_width_scale", real(c.cost_width_scale));
  line("seed", std::to_string(c.seed));
  line("map", c.map);
  line("env_file", c.env_file);
  line("dim", std::to_string(c.dim));
  line("synthetic_states", std::to_string(c.synthetic_states));
  line("synthetic_actions", std::to_string(c.synthetic_actions));
  line("synthetic_cost_noise", real(c.synthetic_cost_noise));
  line("out", c.out);
  line("debug_rebuild", c.debug_rebuild ? "true" : "false");
  return out;
}

void apply_setting(ExperimentConfig& c, std::string_view key, std::string_view value) {
  if (key == "env") c.env = parse_env_kind(value);
  else if (key == "agent") c.agent = parse_agent(value);
  else if (key == "episodes") c.episodes = parse_number<long>(key, value);
  else if (key == "horizon") c.horizon = parse_number<int>(key, value);
  else if (key == "p") c.p = parse_number<double>(key, value);
  else if (key == "lambda") c.lambda = parse_number<double>(key, value);
  else if (key == "c_beta") c.c_beta = parse_number<double>(key, value);
  else if (key == "beta_override") {
    if (value == "none" || value.empty()) c.beta_override.reset();
    else c.beta_override = parse_number<double>(key, value);
  }
  else if (key == "cost_model") c.cost_model = parse_cost_model(value);
  else if (key == "kernel") c.kernel = std::string(value);
  else if (key == "lengthscale") c.lengthscale = parse_number<double>(key, value);
  else if (key == "cost_width_scale") c.cost_width_scale = parse_number<double>(key, value);
  else if (key == "seed") c.seed = parse_number<std::uint64_t>(key, value);
  else if (key == "map") c.map = std::string(value);
  else if (key == "env_file") c.env_file = std::string(value);
  else if (key == "dim") c.dim = parse_number<int>(key, value);
  else if (key == "synthetic_states") c.synthetic_states = parse_number<int>(key, value);
  else if (key == "synthetic_actions") c.synthetic_actions = parse_number<int>(key, value);
  else if (key == "synthetic_cost_noise") c.synthetic_cost_noise = parse_number<double>(key, value);
  else if (key == "out") c.out = std::string(value);
  else if (key == "debug_rebuild") c.debug_rebuild = parse_bool(key, value);
  else throw InvalidArgument(fmt::format("config: unknown key '{}'", key));
}

ExperimentConfig parse_config(std::string_view text, ExperimentConfig base) {
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const std::string_view raw = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw InvalidArgument(fmt::format("config line {}: expected key=value", line_no));
    try {
      apply_setting(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const InvalidArgument& e) {
      throw InvalidArgument(fmt::format("config line {}: {}", line_no, e.what()));
    }
  }
  return base;
}

ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open config file {}", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), std::move(base));
}

double effective_beta(const ExperimentConfig& config, int feature_dim) {
  if (config.beta_override) return *config.beta_override;
  return beta_schedule(config.c_beta, feature_dim, config.horizon, config.episodes, config.p);
}

}  // namespace lsviae
