#include "mmrelay/kinematics.hpp"

#include <cmath>

namespace mmrelay {

double wrap_angle(double a) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double w = std::remainder(a, kTwoPi);
  if (w <= -std::numbers::pi) w += kTwoPi;
  return w;
}

Vec3 direction_vector(double elevation, double azimuth, KinematicsMode mode) {
  const double ce = std::cos(elevation);
  const double z = mode == KinematicsMode::Corrected ? std::sin(elevation) : ce;
  return {ce * std::sin(azimuth), ce * std::cos(azimuth), z};
}

Vec3 localize(const RadarObservation& obs) {
  const double ce = std::cos(obs.elevation);
  return {obs.range * ce * std::sin(obs.azimuth), obs.range * ce * std::cos(obs.azimuth),
          obs.bs_height - obs.range * std::sin(obs.elevation)};
}

RadarObservation observe(const Vec3& pos, double bs_height) {
  RadarObservation obs;
  obs.bs_height = bs_height;
  const Vec3 rel{pos.x, pos.y, bs_height - pos.z};
  obs.range = norm(rel);
  if (obs.range > 0.0) {
    obs.elevation = std::asin(std::clamp(rel.z / obs.range, -1.0, 1.0));
    obs.azimuth = wrap_angle(std::atan2(rel.x, rel.y));
  }
  return obs;
}

}  // namespace mmrelay
