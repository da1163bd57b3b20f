#pragma once

// Discrete-time scenario engine. One replication: generate a random world,
// push packets from a single source towards a single destination over up to
// `hops_max` relays for `horizon_steps` steps (plus a drain period), and
// account every packet as delivered, dropped (by cause) or still in flight.

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mmrelay/blockage.hpp"
#include "mmrelay/channel.hpp"
#include "mmrelay/kinematics.hpp"
#include "mmrelay/relay.hpp"

namespace mmrelay {

enum class CandidateFilter { ForwardProgress, AllNeighbors };
enum class ObstacleMode { Fixed, Poisson };

class InvalidConfig : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ScenarioConfig {
  Arena arena;
  int n_nodes = 30;
  int n_static = 10;   // L
  int n_dynamic = 10;  // K
  double v_max = 10.0;
  double obstacle_v_max = 10.0;
  double dt = 1.0;
  int packet_bytes = 65535;
  /// Packets per second offered by the source.
  double load = 100.0;
  double radar_density = 0.001;
  ObstacleMode obstacle_mode = ObstacleMode::Fixed;
  /// Dynamic-obstacle density (per m^2) used in Poisson mode.
  double obstacle_density = 0.00025;
  double obstacle_extent_max = 2.0;
  /// The destination is drawn among nodes this many hops from the source in
  /// the nominal (unshadowed, unobstructed) range graph at t = 0.
  int dest_min_hops = 1;
  int dest_max_hops = 3;
  int hops_max = 3;
  int horizon_steps = 10;
  int drain_steps = 4;
  int max_held_steps = 3;
  int runs = 10000;
  std::uint64_t seed = 1;
  /// Ground-truth blocking distance between an obstacle centre and a link.
  double contact_radius = 0.01;
  ChannelParams channel;
  DetectionModel detection;
  CombinationRule combination_rule = CombinationRule::Literal;
  CandidateFilter candidate_filter = CandidateFilter::ForwardProgress;
  KinematicsMode kinematics = KinematicsMode::Corrected;

  /// Throws InvalidConfig naming the offending field.
  void validate() const;
  double packet_bits() const { return 8.0 * packet_bytes; }
};

struct World {
  int step = 0;
  std::vector<NodeState> nodes;  // nodes[k].id == k
  std::vector<ObstacleState> obstacles;
  std::vector<Vec3> radars;
  NodeId source = 0;
  NodeId destination = 1;
};

struct Topology {
  std::size_t n = 0;
  std::vector<char> in_range;  // n x n
  std::vector<char> blocked;   // n x n, obstacle on the link segment now
  std::vector<double> capacity;
  std::vector<std::vector<NodeId>> adj;

  bool has_edge(NodeId i, NodeId j) const { return in_range[i * n + j] && !blocked[i * n + j]; }
  double capacity_of(NodeId i, NodeId j) const { return capacity[i * n + j]; }
  /// Hop distance of every node to `dest` in E^t; -1 when unreachable.
  std::vector<int> hops_to(NodeId dest) const;
};

struct RunMetrics {
  double avg_throughput_bps = 0.0;
  double packet_loss_rate = 0.0;
  double avg_delay_steps = 0.0;
  std::uint64_t packets_sent = 0;
  std::uint64_t delivered = 0;
  std::uint64_t dropped_mobility = 0;
  std::uint64_t dropped_blockage = 0;
  std::uint64_t dropped_nocand = 0;
  std::uint64_t in_flight = 0;
  double delivered_bits = 0.0;
  double delay_per_hop_sum = 0.0;
  double elapsed_s = 0.0;

  std::uint64_t dropped() const { return dropped_mobility + dropped_blockage + dropped_nocand; }
};

/// Separate deterministic substreams, so e.g. adding dynamic obstacles never
/// moves the nodes.
enum class Stream : std::uint32_t { Nodes = 1, StaticObstacles, DynamicObstacles, Radars, Shadowing, Endpoints };

std::uint64_t replication_seed(std::uint64_t base, std::uint64_t rep);

World generate_scenario(const ScenarioConfig& cfg, std::uint64_t seed);

Topology build_topology(const World& world, const ShadowField& shadow, const ScenarioConfig& cfg);

/// Holds one replication's evolving state.
class Simulation {
 public:
  Simulation(const ScenarioConfig& cfg, Policy policy, std::uint64_t seed);
  /// Runs a given world instead of a generated one; `seed` drives shadowing.
  Simulation(const ScenarioConfig& cfg, Policy policy, World world, std::uint64_t seed);

  /// One time step; returns false once horizon and drain are exhausted.
  bool step();
  void run();

  const World& world() const { return world_; }
  const Topology& topology() const { return topology_; }
  RunMetrics metrics() const;

  /// Receives every link assessment made by D-Obs.
  void set_trace(std::function<void(const LinkAssessment&)> trace) { trace_ = std::move(trace); }

 private:
  struct Packet {
    int gen_step = 0;
    int hops = 0;
    int held = 0;
    /// Arrival time at the current holder within the step.
    double avail = 0.0;
    double progress_bits = 0.0;
    int progress_relay = -1;
    bool stalled = false;
  };
  struct LinkFailure {
    std::optional<double> at;
    bool by_blockage = false;
  };

  LinkFailure failure_time(NodeId i, NodeId j, double shadow_db) const;
  void end_of_step_holds();

  ScenarioConfig cfg_;
  Policy policy_;
  World world_;
  Topology topology_;
  std::vector<std::vector<Packet>> queues_;  // FIFO by arrival time
  std::mt19937_64 shadow_rng_;
  ShadowingSampler shadow_sampler_;
  DetectionModel detection_;
  double gamma_mw_;
  double arrival_credit_ = 0.0;
  RunMetrics m_;
  std::function<void(const LinkAssessment&)> trace_;
};

RunMetrics run_replication(const ScenarioConfig& cfg, Policy policy, std::uint64_t seed,
                           std::function<void(const LinkAssessment&)> trace = {});

/// Replications 0..runs-1 of one configuration. The serial version is the
/// reference; the OpenMP version must give bit-identical results.
std::vector<RunMetrics> run_replications_serial(const ScenarioConfig& cfg, Policy policy);
std::vector<RunMetrics> run_replications_parallel(const ScenarioConfig& cfg, Policy policy,
                                                  int workers);

enum class SweepParam { None, K, L, VMax, Dt, Load, NNodes, ObstacleVMax };

std::string_view to_string(SweepParam p);
/// Accepts K|n_dynamic, L|n_static, v_max, dt, load, n_nodes, obstacle_v_max.
SweepParam parse_sweep_param(std::string_view name);
ScenarioConfig apply_sweep_value(ScenarioConfig cfg, SweepParam p, double value);

struct Sweep {
  SweepParam param = SweepParam::None;
  std::vector<double> values;
};

struct ResultRow {
  SweepParam sweep_param = SweepParam::None;
  double sweep_value = 0.0;
  Policy policy = Policy::DObs;
  RunMetrics totals;
  /// Per-replication values, kept for error bars.
  std::vector<double> loss_per_run;
  std::vector<double> throughput_per_run;
  int runs = 0;
  std::uint64_t seed = 0;
};

/// Pools per-replication metrics into one row (sums for counts, means for rates).
ResultRow aggregate(std::span<const RunMetrics> reps);

/// One row per (sweep value, policy), value-major. workers <= 1 runs serially.
std::vector<ResultRow> run_experiment(const ScenarioConfig& cfg, const Sweep& sweep,
                                      std::span<const Policy> policies, int workers);

}  // namespace mmrelay
