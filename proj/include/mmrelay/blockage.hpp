#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <variant>
#include <vector>

#include "mmrelay/geometry3d.hpp"
#include "mmrelay/kinematics.hpp"

namespace mmrelay {

enum class DetectionMode { Perfect, Constant, RangeThreshold };

struct DetectionModel {
  DetectionMode mode = DetectionMode::Perfect;
  double p = 1.0;        // Constant
  double radius = 100.0; // RangeThreshold
  double p_in = 1.0;
  double p_out = 1.0;
  std::vector<Vec3> radar_positions;

  static DetectionModel perfect() { return {}; }
  static DetectionModel constant(double p);
  static DetectionModel range_threshold(double radius, double p_in, double p_out,
                                        std::vector<Vec3> radars);
  /// Throws std::invalid_argument for probabilities outside [0,1] or radius <= 0.
  void validate() const;
};

class NoRadars : public std::runtime_error {
 public:
  NoRadars() : std::runtime_error("range-threshold detection needs at least one radar") {}
};

enum class BlockageCase {
  BothStationary,
  OneMovingRadial,
  OneMovingPlanar,
  BothMovingRadial,
  BothMovingCoplanar,
  BothMovingSkew,
};

std::string_view to_string(BlockageCase c);

/// How detection probabilities and per-obstacle verdicts are combined.
/// Literal: prod_k (p_k * P_k) * prod_l P_l.
/// MissAware: prod_k (1 - p_k * (1 - P_k)) * prod_l P_l.
enum class CombinationRule { Literal, MissAware };

/// Which node is held at rest when both nodes move.
enum class FrameReference { NodeI, NodeJ };

/// The space a link sweeps over one step, in the rest frame of `reference`.
/// Coordinates are absolute positions at time t; anything that moves is
/// treated with its velocity minus `reference_velocity`.
struct LinkRegion {
  BlockageCase kind = BlockageCase::BothStationary;
  NodeId reference = 0;
  Vec3 reference_velocity;
  std::variant<Segment3, Triangle3> shape;
};

struct ObstacleVerdict {
  NodeId id = 0;
  ObstacleKind kind = ObstacleKind::Static;
  int p_int = 1;          // 1: does not interfere with the region during the step
  double detection = 1.0; // p_k; 1 for static obstacles
};

struct BlockageVerdict {
  double p_no_block = 1.0;
  std::vector<ObstacleVerdict> per_obstacle;
  BlockageCase case_used = BlockageCase::BothStationary;
};

double detection_prob(const ObstacleState& k, const DetectionModel& model);

/// Region swept by the link in the rest frame of `ref`, whatever the
/// nodes' motion: a triangle, or a segment when the relative motion is radial.
LinkRegion frame_region(const NodeState& ref, const NodeState& other, double dt,
                        KinematicsMode mode = KinematicsMode::Corrected);

/// Classifies the link and builds the region in the frame of the stationary
/// node (or of `frame` when both move).
LinkRegion case_dispatch(const NodeState& i, const NodeState& j, double dt,
                         KinematicsMode mode = KinematicsMode::Corrected,
                         FrameReference frame = FrameReference::NodeI);

/// 1 if the obstacle stays clear of the region during the step. A static
/// obstacle is a fixed point unless the region's frame moves, in which case it
/// sweeps a path like a dynamic one.
int p_int_static(const ObstacleState& l, const LinkRegion& region, double dt,
                 KinematicsMode mode = KinematicsMode::Corrected);
int p_int_dynamic(const ObstacleState& k, const LinkRegion& region, double dt,
                  KinematicsMode mode = KinematicsMode::Corrected);

double combine(std::span<const ObstacleVerdict> per_obstacle, CombinationRule rule);

/// An obstacle counts as interfering only if its relative path touches the
/// region in the rest frame of each endpoint.
BlockageVerdict assess(const NodeState& i, const NodeState& j,
                       std::span<const ObstacleState> obstacles, double dt,
                       const DetectionModel& model,
                       CombinationRule rule = CombinationRule::Literal,
                       KinematicsMode mode = KinematicsMode::Corrected);

/// Sampled ground truth: some obstacle within `delta_oracle` of the
/// instantaneous link segment at one of `resolution` evenly spaced instants.
bool ground_truth_block(const NodeState& i, const NodeState& j,
                        std::span<const ObstacleState> obstacles, double dt, int resolution,
                        double delta_oracle = 0.01,
                        KinematicsMode mode = KinematicsMode::Corrected);

/// Exact earliest time in [0, dt] at which the obstacle comes within
/// `contact_radius` (> 0) of the moving link segment.
std::optional<double> first_contact_time(const NodeState& i, const NodeState& j,
                                         const ObstacleState& obstacle, double dt,
                                         double contact_radius,
                                         KinematicsMode mode = KinematicsMode::Corrected);

std::optional<double> earliest_blockage_time(const NodeState& i, const NodeState& j,
                                             std::span<const ObstacleState> obstacles,
                                             double dt, double contact_radius,
                                             KinematicsMode mode = KinematicsMode::Corrected);

}  // namespace mmrelay
