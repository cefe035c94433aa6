#include <array>
#include <vector>

#include <gtest/gtest.h>

#include "lsviae/error.hpp"
#include "lsviae/penalty.hpp"

namespace lsviae {
namespace {

EpisodeTrace trace_with_costs(const std::vector<double>& costs) {
  EpisodeTrace trace;
  for (double g : costs) {
    Transition t;
    t.observed_cost = g;
    trace.steps.push_back(t);
  }
  return trace;
}

TEST(PenaltyLedger, InitialValues) {
  EXPECT_EQ(PenaltyLedger(3, PenaltyMode::kRectified).values(), std::vector<double>(3, 1.0));
  EXPECT_EQ(PenaltyLedger(3, PenaltyMode::kVirtualQueue).values(), std::vector<double>(3, 0.0));
  EXPECT_EQ(PenaltyLedger(3, PenaltyMode::kOff).values(), std::vector<double>(3, 0.0));
  EXPECT_THROW(PenaltyLedger(0, PenaltyMode::kOff), InvalidArgument);
}

TEST(PenaltyUpdate, SafeCostAddsNothing) {
  PenaltyLedger ledger(1, PenaltyMode::kRectified);
  ledger.penalty_update(0, -1.0, 1);
  EXPECT_EQ(ledger.z(0), 1.0);
}

TEST(PenaltyUpdate, PositiveCostAccumulates) {
  PenaltyLedger ledger(1, PenaltyMode::kRectified);
  ledger.penalty_update(0, 0.5, 1);
  EXPECT_EQ(ledger.z(0), 1.5);
}

TEST(PenaltyUpdate, FloorTakesOver) {
  PenaltyLedger ledger(1, PenaltyMode::kRectified);
  ledger.penalty_update(0, 1.0, 1);
  ledger.penalty_update(0, 1.0, 2);
  ASSERT_EQ(ledger.z(0), 3.0);
  ledger.penalty_update(0, -0.2, 10);
  EXPECT_EQ(ledger.z(0), 10.0);
}

TEST(PenaltyUpdate, WrongModeAndBadInput) {
  PenaltyLedger queue(2, PenaltyMode::kVirtualQueue);
  EXPECT_THROW(queue.penalty_update(0, 0.1, 1), InvalidArgument);
  PenaltyLedger off(2, PenaltyMode::kOff);
  EXPECT_THROW(off.virtual_queue_update(0, 0.1), InvalidArgument);
  PenaltyLedger rect(2, PenaltyMode::kRectified);
  EXPECT_THROW(rect.virtual_queue_update(0, 0.1), InvalidArgument);
  EXPECT_THROW(rect.penalty_update(0, 1.5, 1), InvalidArgument);
  EXPECT_THROW(rect.penalty_update(0, 0.5, 0), InvalidArgument);
}

TEST(VirtualQueue, FloorAtZero) {
  PenaltyLedger ledger(1, PenaltyMode::kVirtualQueue);
  ledger.virtual_queue_update(0, -1.0);
  EXPECT_EQ(ledger.z(0), 0.0);
}

TEST(VirtualQueue, DirectFormula) {
  PenaltyLedger ledger(1, PenaltyMode::kVirtualQueue);
  ledger.virtual_queue_update(0, 1.0);
  ledger.virtual_queue_update(0, 1.0);
  ledger.virtual_queue_update(0, -0.5);
  EXPECT_EQ(ledger.z(0), 1.5);
}

TEST(VirtualQueue, AlternatingCostsCancel) {
  PenaltyLedger ledger(1, PenaltyMode::kVirtualQueue);
  double positive_part = 0.0;
  for (int i = 0; i < 10; ++i) {
    const double g = i % 2 == 0 ? 1.0 : -1.0;
    ledger.virtual_queue_update(0, g);
    positive_part += std::max(g, 0.0);
    EXPECT_EQ(ledger.z(0), i % 2 == 0 ? 1.0 : 0.0) << "step " << i;
  }
  EXPECT_EQ(positive_part, 5.0);
  EXPECT_EQ(ledger.z(0), 0.0);
}

TEST(EndEpisode, AppliesModeUpdateToEveryStep) {
  const EpisodeTrace trace = trace_with_costs({0.5, -1.0, 1.0});
  PenaltyLedger rect(3, PenaltyMode::kRectified);
  rect.end_episode(trace, 1);
  EXPECT_EQ(rect.values(), (std::vector<double>{1.5, 1.0, 2.0}));
  rect.end_episode(trace, 2);
  EXPECT_EQ(rect.values(), (std::vector<double>{2.0, 2.0, 3.0}));

  PenaltyLedger queue(3, PenaltyMode::kVirtualQueue);
  queue.end_episode(trace, 1);
  EXPECT_EQ(queue.values(), (std::vector<double>{0.5, 0.0, 1.0}));

  PenaltyLedger off(3, PenaltyMode::kOff);
  off.end_episode(trace, 1);
  EXPECT_EQ(off.values(), std::vector<double>(3, 0.0));

  EXPECT_THROW(off.end_episode(trace_with_costs({0.0}), 1), InvalidArgument);
}

TEST(PenalizedArgmax, ZeroPenaltyIsPlainArgmax) {
  const std::array<double, 4> q{1.0, 3.0, 2.0, 3.0};
  const std::array<double, 4> g{1.0, 1.0, -1.0, 0.5};
  const Selection s = penalized_argmax(q, g, 0.0);
  EXPECT_EQ(s.action, 1);
  EXPECT_EQ(s.objective, 3.0);
}

TEST(PenalizedArgmax, PenaltyFlipsChoice) {
  const std::array<double, 2> q{5.0, 4.0};
  const std::array<double, 2> g{0.5, -1.0};
  const Selection s = penalized_argmax(q, g, 10.0);
  EXPECT_EQ(s.action, 1);
  EXPECT_EQ(s.objective, 4.0);
}

TEST(PenalizedArgmax, TiesGoToLowestIndex) {
  const std::array<double, 3> q{2.0, 2.0, 2.0};
  const std::array<double, 3> g{0.0, 0.0, 0.0};
  EXPECT_EQ(penalized_argmax(q, g, 3.0).action, 0);
}

TEST(PenalizedArgmax, SafeRowIgnoresPenalty) {
  const std::array<double, 3> q{0.2, 0.9, 0.4};
  const std::array<double, 3> g{-0.3, -1.0, 0.0};
  for (double z : {0.0, 1.0, 1e6}) EXPECT_EQ(penalized_argmax(q, g, z).action, 1);
}

TEST(PenalizedArgmax, ShiftInvariance) {
  const std::array<double, 3> q{0.2, 0.9, 0.4};
  const std::array<double, 3> g{-0.3, 0.6, 0.1};
  const int base = penalized_argmax(q, g, 2.0).action;
  for (double c : {-5.0, 0.5, 100.0}) {
    const std::array<double, 3> shifted{q[0] + c, q[1] + c, q[2] + c};
    EXPECT_EQ(penalized_argmax(shifted, g, 2.0).action, base);
  }
}

TEST(PenalizedArgmax, RejectsBadRows) {
  EXPECT_THROW(penalized_argmax(std::span<const double>{}, std::span<const double>{}, 1.0), InvalidArgument);
  const std::array<double, 2> q{1.0, 2.0};
  const std::array<double, 1> g{0.0};
  EXPECT_THROW(penalized_argmax(q, g, 1.0), InvalidArgument);
}

}  // namespace
}  // namespace lsviae
