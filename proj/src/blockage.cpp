#include "mmrelay/blockage.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mmrelay/detail/poly.hpp"

namespace mmrelay {

namespace {

bool in_unit(double p) { return p >= 0.0 && p <= 1.0; }

bool parallel(const Vec3& v, const Vec3& dir) {
  const double scale = norm(v) * norm(dir);
  if (scale == 0.0) return true;
  return norm(cross(v, dir)) <= kGeomRelEps * scale;
}

// True when a point starting at `pos` and moving with `rel_velocity` (in the
// region's frame) touches the region during the step.
bool touches_region(const Vec3& pos, const Vec3& rel_velocity, const LinkRegion& region,
                    double dt) {
  if (norm2(rel_velocity) == 0.0) {
    if (const auto* seg = std::get_if<Segment3>(&region.shape)) return point_on_segment(pos, *seg);
    const auto& tri = std::get<Triangle3>(region.shape);
    const auto plane = plane_from_triangle(tri);
    if (!plane) return point_on_segment(pos, tri.hull_segment());
    const double tol = length_tolerance(std::max({max_abs(pos), max_abs(tri.p0), max_abs(tri.p1),
                                                  max_abs(tri.p2)}));
    return std::abs(plane->signed_distance(pos)) <= tol && point_in_triangle(pos, tri);
  }
  const Segment3 path{pos, pos + rel_velocity * dt};
  if (const auto* seg = std::get_if<Segment3>(&region.shape)) return segments_intersect(path, *seg);
  return segment_interferes_triangle(path, std::get<Triangle3>(region.shape));
}

}  // namespace

DetectionModel DetectionModel::constant(double p) {
  DetectionModel m;
  m.mode = DetectionMode::Constant;
  m.p = p;
  m.validate();
  return m;
}

DetectionModel DetectionModel::range_threshold(double radius, double p_in, double p_out,
                                               std::vector<Vec3> radars) {
  DetectionModel m;
  m.mode = DetectionMode::RangeThreshold;
  m.radius = radius;
  m.p_in = p_in;
  m.p_out = p_out;
  m.radar_positions = std::move(radars);
  m.validate();
  return m;
}

void DetectionModel::validate() const {
  if (!in_unit(p) || !in_unit(p_in) || !in_unit(p_out)) {
    throw std::invalid_argument("detection: probabilities must lie in [0,1]");
  }
  if (mode == DetectionMode::RangeThreshold && !(radius > 0.0)) {
    throw std::invalid_argument("detection: radius must be > 0");
  }
}

std::string_view to_string(BlockageCase c) {
  switch (c) {
    case BlockageCase::BothStationary: return "both-stationary";
    case BlockageCase::OneMovingRadial: return "one-moving-radial";
    case BlockageCase::OneMovingPlanar: return "one-moving-planar";
    case BlockageCase::BothMovingRadial: return "both-moving-radial";
    case BlockageCase::BothMovingCoplanar: return "both-moving-coplanar";
    case BlockageCase::BothMovingSkew: return "both-moving-skew";
  }
  return "unknown";
}

double detection_prob(const ObstacleState& k, const DetectionModel& model) {
  switch (model.mode) {
    case DetectionMode::Perfect: return 1.0;
    case DetectionMode::Constant: return model.p;
    case DetectionMode::RangeThreshold: {
      if (model.radar_positions.empty()) throw NoRadars{};
      double nearest = std::numeric_limits<double>::infinity();
      for (const auto& r : model.radar_positions) nearest = std::min(nearest, distance(r, k.pos));
      return nearest <= model.radius ? model.p_in : model.p_out;
    }
  }
  return 1.0;
}

LinkRegion frame_region(const NodeState& ref, const NodeState& other, double dt,
                        KinematicsMode mode) {
  const Vec3 vref = velocity(ref, mode);
  const Vec3 w = velocity(other, mode) - vref;
  const Triangle3 swept{ref.pos, other.pos, other.pos + w * dt};
  LinkRegion region;
  region.reference = ref.id;
  region.reference_velocity = vref;
  if (parallel(w, other.pos - ref.pos)) {
    region.shape = swept.hull_segment();
  } else {
    region.shape = swept;
  }
  return region;
}

LinkRegion case_dispatch(const NodeState& i, const NodeState& j, double dt, KinematicsMode mode,
                         FrameReference frame) {
  const Vec3 vi = velocity(i, mode);
  const Vec3 vj = velocity(j, mode);
  const bool i_moves = norm2(vi) > 0.0;
  const bool j_moves = norm2(vj) > 0.0;
  const Vec3 line = j.pos - i.pos;

  if (!i_moves && !j_moves) {
    LinkRegion region = frame_region(i, j, dt, mode);
    region.kind = BlockageCase::BothStationary;
    return region;
  }
  if (i_moves != j_moves) {
    LinkRegion region = i_moves ? frame_region(j, i, dt, mode) : frame_region(i, j, dt, mode);
    region.kind = parallel(i_moves ? vi : vj, line) ? BlockageCase::OneMovingRadial
                                                    : BlockageCase::OneMovingPlanar;
    return region;
  }
  LinkRegion region =
      frame == FrameReference::NodeI ? frame_region(i, j, dt, mode) : frame_region(j, i, dt, mode);
  if (parallel(vi, line) && parallel(vj, line)) {
    region.kind = BlockageCase::BothMovingRadial;
  } else {
    region.kind = coplanar4(i.pos, i.pos + vi * dt, j.pos, j.pos + vj * dt)
                      ? BlockageCase::BothMovingCoplanar
                      : BlockageCase::BothMovingSkew;
  }
  return region;
}

int p_int_static(const ObstacleState& l, const LinkRegion& region, double dt,
                 KinematicsMode mode) {
  return touches_region(l.pos, velocity(l, mode) - region.reference_velocity, region, dt) ? 0 : 1;
}

int p_int_dynamic(const ObstacleState& k, const LinkRegion& region, double dt,
                  KinematicsMode mode) {
  return touches_region(k.pos, velocity(k, mode) - region.reference_velocity, region, dt) ? 0 : 1;
}

double combine(std::span<const ObstacleVerdict> per_obstacle, CombinationRule rule) {
  double dynamic_part = 1.0;
  double static_part = 1.0;
  for (const auto& v : per_obstacle) {
    if (v.kind == ObstacleKind::Static) {
      static_part *= v.p_int;
    } else if (rule == CombinationRule::Literal) {
      dynamic_part *= v.detection * v.p_int;
    } else {
      dynamic_part *= 1.0 - v.detection * (1.0 - v.p_int);
    }
  }
  return dynamic_part * static_part;
}

BlockageVerdict assess(const NodeState& i, const NodeState& j,
                       std::span<const ObstacleState> obstacles, double dt,
                       const DetectionModel& model, CombinationRule rule, KinematicsMode mode) {
  BlockageVerdict verdict;
  verdict.case_used = case_dispatch(i, j, dt, mode).kind;
  // The region test ignores when each point is swept, so it is run in the
  // rest frame of both endpoints and an obstacle must touch both regions.
  const LinkRegion in_i = frame_region(i, j, dt, mode);
  const LinkRegion in_j = frame_region(j, i, dt, mode);
  verdict.per_obstacle.reserve(obstacles.size());
  for (const auto& o : obstacles) {
    ObstacleVerdict v;
    v.id = o.id;
    v.kind = o.kind;
    if (o.kind == ObstacleKind::Static) {
      v.p_int = p_int_static(o, in_i, dt, mode) == 0 && p_int_static(o, in_j, dt, mode) == 0 ? 0 : 1;
    } else {
      v.p_int = p_int_dynamic(o, in_i, dt, mode) == 0 && p_int_dynamic(o, in_j, dt, mode) == 0 ? 0 : 1;
      v.detection = detection_prob(o, model);
    }
    verdict.per_obstacle.push_back(v);
  }
  verdict.p_no_block = combine(verdict.per_obstacle, rule);
  return verdict;
}

bool ground_truth_block(const NodeState& i, const NodeState& j,
                        std::span<const ObstacleState> obstacles, double dt, int resolution,
                        double delta_oracle, KinematicsMode mode) {
  if (resolution < 2) throw std::invalid_argument("ground_truth_block: resolution must be >= 2");
  const Vec3 vi = velocity(i, mode);
  const Vec3 vj = velocity(j, mode);
  std::vector<Vec3> vk;
  vk.reserve(obstacles.size());
  for (const auto& o : obstacles) vk.push_back(velocity(o, mode));

  for (int s = 0; s < resolution; ++s) {
    const double tau = dt * static_cast<double>(s) / static_cast<double>(resolution - 1);
    const Segment3 link{i.pos + vi * tau, j.pos + vj * tau};
    for (std::size_t k = 0; k < obstacles.size(); ++k) {
      if (point_segment_distance(obstacles[k].pos + vk[k] * tau, link) <= delta_oracle) return true;
    }
  }
  return false;
}

std::optional<double> first_contact_time(const NodeState& i, const NodeState& j,
                                         const ObstacleState& obstacle, double dt,
                                         double contact_radius, KinematicsMode mode) {
  using detail::Poly;
  if (!(contact_radius > 0.0)) {
    throw std::invalid_argument("first_contact_time: contact radius must be > 0");
  }
  // Frame of i: link runs from the origin to q(t), obstacle at p(t).
  const Vec3 vi = velocity(i, mode);
  const Vec3 q0 = j.pos - i.pos;
  const Vec3 w = velocity(j, mode) - vi;
  const Vec3 p0 = obstacle.pos - i.pos;
  const Vec3 u = velocity(obstacle, mode) - vi;
  const double r2 = contact_radius * contact_radius;

  auto quad_norm2 = [](const Vec3& a, const Vec3& b) {
    return Poly{norm2(a), 2.0 * dot(a, b), norm2(b)};
  };

  // |p x q|^2 - r^2 |q|^2 vanishes where the distance to the supporting line is r.
  const Vec3 c0 = cross(p0, q0);
  const Vec3 c1 = cross(p0, w) + cross(u, q0);
  const Vec3 c2 = cross(u, w);
  Poly line_gap;
  for (const auto& comp : {Poly{c0.x, c1.x, c2.x}, Poly{c0.y, c1.y, c2.y}, Poly{c0.z, c1.z, c2.z}}) {
    line_gap = detail::add(line_gap, detail::multiply(comp, comp));
  }
  line_gap = detail::add(line_gap, detail::scale(quad_norm2(q0, w), -r2));

  Poly near_i = quad_norm2(p0, u);
  near_i[0] -= r2;
  Poly near_j = quad_norm2(p0 - q0, u - w);
  near_j[0] -= r2;

  // The contact set is a union of intervals whose left ends are 0 or roots of
  // one of these polynomials. A very short interval is a near-double root that
  // rounding can hide, so the critical points are tried as well.
  std::vector<double> candidates{0.0};
  for (const Poly* poly : {&line_gap, &near_i, &near_j}) {
    for (const Poly& f : {*poly, detail::derivative(*poly)}) {
      const auto roots = detail::real_roots(f, 0.0, dt);
      candidates.insert(candidates.end(), roots.begin(), roots.end());
    }
  }
  std::sort(candidates.begin(), candidates.end());

  const double accept = contact_radius * (1.0 + 1e-7) + 1e-12;
  for (double tau : candidates) {
    const Segment3 link{Vec3{}, q0 + w * tau};
    if (point_segment_distance(p0 + u * tau, link) <= accept) return tau;
  }
  return std::nullopt;
}

std::optional<double> earliest_blockage_time(const NodeState& i, const NodeState& j,
                                             std::span<const ObstacleState> obstacles,
                                             double dt, double contact_radius,
                                             KinematicsMode mode) {
  std::optional<double> best;
  for (const auto& o : obstacles) {
    const auto t = first_contact_time(i, j, o, dt, contact_radius, mode);
    if (t && (!best || *t < *best)) best = t;
  }
  return best;
}

}  // namespace mmrelay
