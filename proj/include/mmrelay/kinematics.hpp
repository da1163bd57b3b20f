#pragma once

#include <cstdint>
#include <numbers>

#include "mmrelay/geometry3d.hpp"

namespace mmrelay {

using NodeId = std::uint32_t;

/// UE state at one time instant. Speed and direction are constant over a step.
/// Azimuth is measured from the +y axis towards +x, elevation from the x-y plane.
struct NodeState {
  NodeId id = 0;
  Vec3 pos;
  double speed = 0.0;
  double elevation = 0.0;
  double azimuth = 0.0;
};

enum class ObstacleKind { Static, Dynamic };

/// Obstacles are analysed as points at `pos`; the extent fields are scenario
/// metadata only.
struct ObstacleState {
  NodeId id = 0;
  ObstacleKind kind = ObstacleKind::Static;
  Vec3 pos;
  double speed = 0.0;
  double elevation = 0.0;
  double azimuth = 0.0;
  double extent_len = 0.0;
  double extent_angle = 0.0;
};

struct RadarObservation {
  double range = 0.0;
  double elevation = 0.0;
  double azimuth = 0.0;
  double doppler_speed = 0.0;
  double bs_height = 10.0;
};

/// CosElevation reproduces the printed displacement formula whose z component
/// uses cos(elevation); Corrected uses sin(elevation).
enum class KinematicsMode { Corrected, CosElevation };

struct Arena {
  double width = 200.0;
  double height = 200.0;
};

template <typename T>
concept Mover = requires(const T& s) {
  { s.pos } -> std::convertible_to<Vec3>;
  { s.speed } -> std::convertible_to<double>;
  { s.elevation } -> std::convertible_to<double>;
  { s.azimuth } -> std::convertible_to<double>;
};

/// Wraps to (-pi, pi].
double wrap_angle(double a);

Vec3 direction_vector(double elevation, double azimuth,
                      KinematicsMode mode = KinematicsMode::Corrected);

template <Mover S>
Vec3 velocity(const S& s, KinematicsMode mode = KinematicsMode::Corrected) {
  return direction_vector(s.elevation, s.azimuth, mode) * s.speed;
}

/// Sets speed/elevation/azimuth of `s` from a velocity vector.
template <Mover S>
void set_velocity(S& s, const Vec3& v) {
  const double speed = norm(v);
  s.speed = speed;
  if (speed == 0.0) {
    s.elevation = 0.0;
    s.azimuth = 0.0;
    return;
  }
  s.elevation = std::asin(std::clamp(v.z / speed, -1.0, 1.0));
  s.azimuth = wrap_angle(std::atan2(v.x, v.y));
}

template <Mover S>
S advance(const S& s, double dt, KinematicsMode mode = KinematicsMode::Corrected) {
  S out = s;
  out.pos = s.pos + velocity(s, mode) * dt;
  return out;
}

template <Mover S>
Segment3 motion_segment(const S& s, double dt, KinematicsMode mode = KinematicsMode::Corrected) {
  return {s.pos, advance(s, dt, mode).pos};
}

/// Position of a radar return relative to a base station at (0, 0, bs_height).
Vec3 localize(const RadarObservation& obs);

/// Inverse of localize for a point at `pos`; doppler_speed is left at zero.
RadarObservation observe(const Vec3& pos, double bs_height);

inline double distance(const Vec3& a, const Vec3& b) { return norm(b - a); }

template <Mover A, Mover B>
double distance(const A& a, const B& b) {
  return distance(a.pos, b.pos);
}

/// `subject` expressed in the frame of `reference`: reference sits at the
/// origin at rest, and the subject keeps the velocity difference.
template <Mover R, Mover S>
S relativize(const R& reference, const S& subject,
             KinematicsMode mode = KinematicsMode::Corrected) {
  S out = subject;
  out.pos = subject.pos - reference.pos;
  set_velocity(out, velocity(subject, mode) - velocity(reference, mode));
  return out;
}

/// Flips the velocity components that would carry `s` out of the arena during
/// the next `dt`, so the straight path over the step stays inside.
template <Mover S>
S reflect_at_walls(const S& s, const Arena& arena, double dt,
                   KinematicsMode mode = KinematicsMode::Corrected) {
  S out = s;
  const Vec3 end = advance(s, dt, mode).pos;
  if (end.x < 0.0 || end.x > arena.width) out.azimuth = wrap_angle(-out.azimuth);
  if (end.y < 0.0 || end.y > arena.height) out.azimuth = wrap_angle(std::numbers::pi - out.azimuth);
  return out;
}

}  // namespace mmrelay
