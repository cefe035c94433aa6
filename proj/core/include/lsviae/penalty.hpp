#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "lsviae/cmdp.hpp"

namespace lsviae {

enum class PenaltyMode {
  kRectified,     // Z <- max{Z + (g)_+, k}, starts at 1
  kVirtualQueue,  // Z <- max{Z + g, 0}, starts at 0
  kOff,           // Z = 0
};

std::string_view to_string(PenaltyMode mode);

/// Per-step penalty multipliers Z_h.
class PenaltyLedger {
 public:
  PenaltyLedger(int horizon, PenaltyMode mode);

  PenaltyMode mode() const { return mode_; }
  int horizon() const { return static_cast<int>(z_.size()); }
  double z(int h) const { return z_.at(h); }
  const std::vector<double>& values() const { return z_; }

  /// Floor applied after the update that closes episode k.
  static double floor(long episode) { return static_cast<double>(episode); }

  /// Z_h <- max{Z_h + max(g, 0), k}. Rectified mode only.
  void penalty_update(int h, double observed_cost, long episode);

  /// Z_h <- max{Z_h + g, 0}. Virtual-queue mode only.
  void virtual_queue_update(int h, double observed_cost);

  /// Applies the mode's update for every step of a finished episode.
  void end_episode(const EpisodeTrace& trace, long episode);

 private:
  static void check_cost(double g);

  PenaltyMode mode_;
  std::vector<double> z_;
};

struct Selection {
  int action = 0;
  double objective = 0.0;
};

/// argmax_a { Q(a) - Z * max(g_hat(a), 0) }, ties broken by the lowest index.
Selection penalized_argmax(std::span<const double> q, std::span<const double> g_hat, double z);

}  // namespace lsviae
