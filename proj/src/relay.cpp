#include "mmrelay/relay.hpp"

#include <string>

namespace mmrelay {

namespace {

// Distances are floored here so co-located nodes never reach the path-loss
// model with zero distance.
constexpr double kMinLinkDistance = 1e-3;

double predicted_distance(const NodeState& i, const NodeState& j, const LinkContext& ctx) {
  return distance(advance(i, ctx.dt, ctx.mode), advance(j, ctx.dt, ctx.mode));
}

bool blocked_now(const NodeState& i, const NodeState& j, const LinkContext& ctx) {
  const Segment3 link{i.pos, j.pos};
  for (const auto& o : ctx.obstacles) {
    if (point_segment_distance(o.pos, link) <= ctx.contact_radius) return true;
  }
  return false;
}

// Ranking key: higher score first (or lower when `minimize`), then the nearer
// predicted neighbour, then the lower id.
struct Ranked {
  double score;
  double predicted;
  NodeId id;
};

bool better(const Ranked& a, const Ranked& b, bool minimize) {
  if (a.score != b.score) return minimize ? a.score < b.score : a.score > b.score;
  if (a.predicted != b.predicted) return a.predicted < b.predicted;
  return a.id < b.id;
}

PolicyChoice finish(Policy policy, const std::optional<Ranked>& best, std::size_t evaluated) {
  PolicyChoice choice;
  choice.policy = policy;
  choice.candidates_evaluated = evaluated;
  if (best) {
    choice.chosen = best->id;
    choice.score = best->score;
  }
  return choice;
}

}  // namespace

std::string_view to_string(Policy p) {
  switch (p) {
    case Policy::DObs: return "dobs";
    case Policy::RSS: return "rss";
    case Policy::CBF: return "cbf";
  }
  return "unknown";
}

Policy parse_policy(std::string_view name) {
  if (name == "dobs") return Policy::DObs;
  if (name == "rss") return Policy::RSS;
  if (name == "cbf") return Policy::CBF;
  throw std::invalid_argument("unknown policy '" + std::string(name) + "' (expected dobs, rss or cbf)");
}

NotAdjacent::NotAdjacent(NodeId i, NodeId j)
    : std::logic_error("nodes " + std::to_string(i) + " and " + std::to_string(j) +
                       " are not adjacent") {}

LinkAssessment assess_link(const NodeState& i, const NodeState& j, const LinkContext& ctx) {
  if (ctx.is_edge && !ctx.is_edge(i.id, j.id)) throw NotAdjacent(i.id, j.id);

  LinkAssessment a;
  a.i = i.id;
  a.j = j.id;
  const double shadow = ctx.shadow_db(i.id, j.id);

  const double now = std::max(distance(i, j), kMinLinkDistance);
  a.current_capacity =
      snr_and_capacity(path_loss_component(now, shadow, ctx.channel), false, ctx.channel).capacity_bps;

  a.predicted_distance = predicted_distance(i, j, ctx);
  const double pl_next =
      path_loss_component(std::max(a.predicted_distance, kMinLinkDistance), shadow, ctx.channel);
  a.pl_ok = pl_threshold_test(pl_next, ctx.gamma_mw);

  const BlockageVerdict v = assess(i, j, ctx.obstacles, ctx.dt, ctx.detection, ctx.rule, ctx.mode);
  a.p_no_block = v.p_no_block;
  a.case_used = v.case_used;

  a.survival_prob = static_cast<double>(a.pl_ok) * a.p_no_block;
  a.expected_capacity = a.survival_prob * a.current_capacity;
  return a;
}

double current_rx_power_mw(const NodeState& i, const NodeState& j, const LinkContext& ctx) {
  const double d = std::max(distance(i, j), kMinLinkDistance);
  const double pl = path_loss_component(d, ctx.shadow_db(i.id, j.id), ctx.channel);
  return snr_and_capacity(pl, blocked_now(i, j, ctx), ctx.channel).rx_power_mw;
}

PolicyChoice select_dobs(const NodeState& i, std::span<const NodeState> candidates,
                         const LinkContext& ctx) {
  std::optional<Ranked> best;
  for (const auto& j : candidates) {
    const LinkAssessment a = assess_link(i, j, ctx);
    if (ctx.on_assessment) ctx.on_assessment(a);
    const Ranked r{a.expected_capacity, a.predicted_distance, j.id};
    if (!best || better(r, *best, false)) best = r;
  }
  return finish(Policy::DObs, best, candidates.size());
}

PolicyChoice select_rss(const NodeState& i, std::span<const NodeState> candidates,
                        const LinkContext& ctx) {
  std::optional<Ranked> best;
  for (const auto& j : candidates) {
    const double q = current_rx_power_mw(i, j, ctx);
    if (!(q > 0.0)) continue;
    const Ranked r{q, predicted_distance(i, j, ctx), j.id};
    if (!best || better(r, *best, false)) best = r;
  }
  return finish(Policy::RSS, best, candidates.size());
}

PolicyChoice select_cbf(const NodeState& i, std::span<const NodeState> candidates,
                        const NodeState& destination, const LinkContext& ctx) {
  std::optional<Ranked> best;
  for (const auto& j : candidates) {
    const Ranked r{distance(j, destination), predicted_distance(i, j, ctx), j.id};
    if (!best || better(r, *best, true)) best = r;
  }
  return finish(Policy::CBF, best, candidates.size());
}

PolicyChoice select_relay(Policy policy, const NodeState& i, std::span<const NodeState> candidates,
                          const NodeState& destination, const LinkContext& ctx) {
  switch (policy) {
    case Policy::DObs: return select_dobs(i, candidates, ctx);
    case Policy::RSS: return select_rss(i, candidates, ctx);
    case Policy::CBF: return select_cbf(i, candidates, destination, ctx);
  }
  return {};
}

}  // namespace mmrelay
