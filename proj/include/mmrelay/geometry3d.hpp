#pragma once

// Exact-geometry predicates (with a scaled floating-point tolerance) for
// points, segments, planes and triangles in 3D. These decide whether the
// motion path of an obstacle crosses the region a link sweeps during one
// time step.

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <variant>

namespace mmrelay {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator-() const { return {-x, -y, -z}; }
  constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr bool operator==(const Vec3&) const = default;
};

constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }
constexpr double norm2(const Vec3& v) { return dot(v, v); }
inline double max_abs(const Vec3& v) {
  return std::max({std::abs(v.x), std::abs(v.y), std::abs(v.z)});
}
inline bool is_finite(const Vec3& v) {
  return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

/// Relative tolerance applied to every predicate. Absolute tolerances are
/// this value times the largest coordinate magnitude involved (floored at 1 m).
inline constexpr double kGeomRelEps = 1e-9;

inline double length_tolerance(double scale) { return kGeomRelEps * std::max(1.0, scale); }

struct Segment3 {
  Vec3 a;
  Vec3 b;

  Vec3 at(double delta) const { return a + (b - a) * delta; }
  Vec3 direction() const { return b - a; }
  double length() const { return norm(b - a); }
  bool is_degenerate() const;
};

struct Triangle3 {
  Vec3 p0;
  Vec3 p1;
  Vec3 p2;

  bool is_degenerate() const;
  /// For a degenerate (collinear) triangle: the segment spanning its vertices.
  Segment3 hull_segment() const;
};

class Plane3 {
 public:
  /// Throws std::invalid_argument when the normal has zero magnitude.
  Plane3(const Vec3& point, const Vec3& normal);

  const Vec3& point() const { return point_; }
  const Vec3& normal() const { return normal_; }
  /// Signed distance of p from the plane (in length units).
  double signed_distance(const Vec3& p) const;

 private:
  Vec3 point_;
  Vec3 normal_;
};

std::optional<Plane3> plane_from_triangle(const Triangle3& tri);

namespace plane_contact {
struct ParallelOff {};
struct InPlane {};
struct Crosses {
  Vec3 point;
  double delta;
};
/// The supporting line crosses the plane, but outside the segment's extent.
struct NoHit {};
}  // namespace plane_contact

using PlaneContact = std::variant<plane_contact::ParallelOff, plane_contact::InPlane,
                                  plane_contact::Crosses, plane_contact::NoHit>;

PlaneContact classify_segment_vs_plane(const Segment3& seg, const Plane3& plane);

namespace seg_hit {
struct None {};
struct Point {
  Vec3 at;
};
struct Overlap {
  Segment3 span;
};
}  // namespace seg_hit

using SegmentIntersection = std::variant<seg_hit::None, seg_hit::Point, seg_hit::Overlap>;

/// Thrown (debug builds only) when segments_intersect_coplanar is handed
/// segments that do not share a plane.
class NotCoplanar : public std::logic_error {
 public:
  NotCoplanar() : std::logic_error("segments_intersect_coplanar: segments are not coplanar") {}
};

/// Closed-segment intersection of two coplanar segments. Touching endpoints
/// count as a Point; collinear segments sharing more than a point give Overlap.
SegmentIntersection segments_intersect_coplanar(const Segment3& s1, const Segment3& s2);

/// Closed-segment intersection for arbitrary segments in 3D. Non-coplanar
/// segments never intersect.
bool segments_intersect(const Segment3& s1, const Segment3& s2);

/// p must lie in the plane of tri. Boundary counts as inside.
bool point_in_triangle(const Vec3& p, const Triangle3& tri);

bool point_on_segment(const Vec3& p, const Segment3& seg);

/// Distance from p to the closed segment.
double point_segment_distance(const Vec3& p, const Segment3& seg);

/// Decision tree for "does the obstacle path touch the communication region":
/// classify against the triangle's plane, then either test the crossing point
/// (crossing case) or run the side test followed by the endpoint containment
/// test (in-plane case). Degenerate triangles fall back to segment tests.
bool segment_interferes_triangle(const Segment3& seg, const Triangle3& tri);

bool coplanar4(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d);

}  // namespace mmrelay
