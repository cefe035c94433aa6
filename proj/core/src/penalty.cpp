#include "lsviae/penalty.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/core.h>

#include "lsviae/error.hpp"

namespace lsviae {

std::string_view to_string(PenaltyMode mode) {
  switch (mode) {
    case PenaltyMode::kRectified: return "rectified";
    case PenaltyMode::kVirtualQueue: return "virtual_queue";
    case PenaltyMode::kOff: return "off";
  }
  return "unknown";
}

PenaltyLedger::PenaltyLedger(int horizon, PenaltyMode mode)
    : mode_(mode), z_(horizon, mode == PenaltyMode::kRectified ? 1.0 : 0.0) {
  if (horizon < 1) throw InvalidArgument("PenaltyLedger: horizon must be positive");
}

void PenaltyLedger::check_cost(double g) {
  if (!(std::abs(g) <= 1.0)) throw InvalidArgument(fmt::format("penalty update: cost {} outside [-1,1]", g));
}

void PenaltyLedger::penalty_update(int h, double observed_cost, long episode) {
  if (mode_ != PenaltyMode::kRectified) {
    throw InvalidArgument(fmt::format("penalty_update requires rectified mode (ledger is {})", to_string(mode_)));
  }
  if (episode < 1) throw InvalidArgument("penalty_update: episode index starts at 1");
  check_cost(observed_cost);
  double& z = z_.at(h);
  z = std::max(z + std::max(observed_cost, 0.0), floor(episode));
}

void PenaltyLedger::virtual_queue_update(int h, double observed_cost) {
  if (mode_ != PenaltyMode::kVirtualQueue) {
    throw InvalidArgument(
        fmt::format("virtual_queue_update requires virtual-queue mode (ledger is {})", to_string(mode_)));
  }
  check_cost(observed_cost);
  double& z = z_.at(h);
  z = std::max(z + observed_cost, 0.0);
}

void PenaltyLedger::end_episode(const EpisodeTrace& trace, long episode) {
  if (static_cast<int>(trace.steps.size()) != horizon()) {
    throw InvalidArgument("PenaltyLedger: trace length differs from the horizon");
  }
  for (int h = 0; h < horizon(); ++h) {
    const double g = trace.steps[h].observed_cost;
    switch (mode_) {
      case PenaltyMode::kRectified: penalty_update(h, g, episode); break;
      case PenaltyMode::kVirtualQueue: virtual_queue_update(h, g); break;
      case PenaltyMode::kOff: break;
    }
  }
}

Selection penalized_argmax(std::span<const double> q, std::span<const double> g_hat, double z) {
  if (q.empty()) throw InvalidArgument("penalized_argmax: empty action set");
  if (q.size() != g_hat.size()) throw InvalidArgument("penalized_argmax: row lengths differ");
  Selection best{0, -std::numeric_limits<double>::infinity()};
  for (std::size_t a = 0; a < q.size(); ++a) {
    const double penalty = g_hat[a] > 0.0 ? z * g_hat[a] : 0.0;
    const double objective = q[a] - penalty;
    if (objective > best.objective) best = {static_cast<int>(a), objective};
  }
  return best;
}

}  // namespace lsviae
