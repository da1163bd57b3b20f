#pragma once

// Relay selection: the obstacle-aware expected-rate policy (D-Obs) and the
// received-signal-strength and contention-based-forwarding baselines.

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>

#include "mmrelay/blockage.hpp"
#include "mmrelay/channel.hpp"
#include "mmrelay/kinematics.hpp"

namespace mmrelay {

enum class Policy { DObs, RSS, CBF };

std::string_view to_string(Policy p);
/// Accepts "dobs", "rss", "cbf". Throws std::invalid_argument otherwise.
Policy parse_policy(std::string_view name);

struct LinkAssessment {
  NodeId i = 0;
  NodeId j = 0;
  double survival_prob = 0.0;
  double current_capacity = 0.0;
  double expected_capacity = 0.0;
  int pl_ok = 0;
  double p_no_block = 0.0;
  double predicted_distance = 0.0;
  BlockageCase case_used = BlockageCase::BothStationary;
};

struct PolicyChoice {
  std::optional<NodeId> chosen;
  double score = 0.0;
  Policy policy = Policy::DObs;
  std::size_t candidates_evaluated = 0;
};

class NotAdjacent : public std::logic_error {
 public:
  NotAdjacent(NodeId i, NodeId j);
};

/// Everything a policy needs to score links at time t. Shadowing is the
/// realization for this step and holds for the whole step.
struct LinkContext {
  std::span<const ObstacleState> obstacles;
  double dt = 1.0;
  ChannelParams channel;
  double gamma_mw = 0.0;
  DetectionModel detection;
  CombinationRule rule = CombinationRule::Literal;
  KinematicsMode mode = KinematicsMode::Corrected;
  /// Obstacle-to-link distance that counts as blocking in the current-state checks.
  double contact_radius = 0.01;
  const ShadowField* shadow = nullptr;
  /// Edge predicate for E^t; when empty every pair is treated as adjacent.
  std::function<bool(NodeId, NodeId)> is_edge;
  /// Called with every assessment D-Obs computes (tracing, invariant checks).
  std::function<void(const LinkAssessment&)> on_assessment;

  double shadow_db(NodeId i, NodeId j) const { return shadow ? shadow->at(i, j) : 0.0; }
};

/// Throws NotAdjacent when (i, j) is not an edge at t.
LinkAssessment assess_link(const NodeState& i, const NodeState& j, const LinkContext& ctx);

/// Current received power of i -> j, zero when an obstacle sits on the link now.
double current_rx_power_mw(const NodeState& i, const NodeState& j, const LinkContext& ctx);

PolicyChoice select_dobs(const NodeState& i, std::span<const NodeState> candidates,
                         const LinkContext& ctx);
PolicyChoice select_rss(const NodeState& i, std::span<const NodeState> candidates,
                        const LinkContext& ctx);
PolicyChoice select_cbf(const NodeState& i, std::span<const NodeState> candidates,
                        const NodeState& destination, const LinkContext& ctx);

PolicyChoice select_relay(Policy policy, const NodeState& i,
                          std::span<const NodeState> candidates, const NodeState& destination,
                          const LinkContext& ctx);

}  // namespace mmrelay
