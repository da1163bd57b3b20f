#include "mmrelay/geometry3d.hpp"

#include <array>
#include <tuple>
#include <utility>

namespace mmrelay {

namespace {

double scale_of(std::initializer_list<Vec3> pts) {
  double s = 0.0;
  for (const auto& p : pts) s = std::max(s, max_abs(p));
  return s;
}

double point_line_distance(const Vec3& p, const Vec3& origin, const Vec3& dir) {
  const double len = norm(dir);
  if (len == 0.0) return norm(p - origin);
  return norm(cross(p - origin, dir)) / len;
}

auto seg_key(const Segment3& s) {
  return std::tie(s.a.x, s.a.y, s.a.z, s.b.x, s.b.y, s.b.z);
}

}  // namespace

bool Segment3::is_degenerate() const {
  return norm(b - a) <= length_tolerance(scale_of({a, b}));
}

bool Triangle3::is_degenerate() const { return !plane_from_triangle(*this).has_value(); }

Segment3 Triangle3::hull_segment() const {
  const std::array<Segment3, 3> sides{{{p0, p1}, {p1, p2}, {p0, p2}}};
  const auto* best = &sides[0];
  for (const auto& s : sides) {
    if (norm2(s.direction()) > norm2(best->direction())) best = &s;
  }
  return *best;
}

Plane3::Plane3(const Vec3& point, const Vec3& normal) : point_(point), normal_(normal) {
  if (!(norm2(normal) > 0.0) || !is_finite(normal)) {
    throw std::invalid_argument("Plane3: normal must be finite and non-zero");
  }
}

double Plane3::signed_distance(const Vec3& p) const {
  return dot(p - point_, normal_) / norm(normal_);
}

std::optional<Plane3> plane_from_triangle(const Triangle3& tri) {
  const Vec3 n = cross(tri.p1 - tri.p0, tri.p2 - tri.p0);
  const double longest = std::sqrt(std::max({norm2(tri.p1 - tri.p0), norm2(tri.p2 - tri.p1),
                                             norm2(tri.p2 - tri.p0)}));
  const double tol = length_tolerance(scale_of({tri.p0, tri.p1, tri.p2}));
  // |n| / longest edge is the triangle height over that edge.
  if (longest <= tol || norm(n) <= tol * longest) return std::nullopt;
  return Plane3(tri.p0, n);
}

PlaneContact classify_segment_vs_plane(const Segment3& seg, const Plane3& plane) {
  const double tol = length_tolerance(scale_of({seg.a, seg.b, plane.point()}));
  const double da = plane.signed_distance(seg.a);
  const double db = plane.signed_distance(seg.b);

  if (std::abs(da) <= tol && std::abs(db) <= tol) return plane_contact::InPlane{};
  const double rise = db - da;
  if (std::abs(rise) <= tol) return plane_contact::ParallelOff{};

  const double delta = da / (da - db);
  const double slack = tol / std::abs(rise);
  if (delta < -slack || delta > 1.0 + slack) return plane_contact::NoHit{};
  const double clamped = std::clamp(delta, 0.0, 1.0);
  return plane_contact::Crosses{seg.at(clamped), clamped};
}

double point_segment_distance(const Vec3& p, const Segment3& seg) {
  const Vec3 d = seg.direction();
  const double dd = norm2(d);
  if (dd == 0.0) return norm(p - seg.a);
  const double s = std::clamp(dot(p - seg.a, d) / dd, 0.0, 1.0);
  return norm(p - seg.at(s));
}

bool point_on_segment(const Vec3& p, const Segment3& seg) {
  return point_segment_distance(p, seg) <= length_tolerance(scale_of({p, seg.a, seg.b}));
}

SegmentIntersection segments_intersect_coplanar(const Segment3& first, const Segment3& second) {
  // Canonical operand order makes the result bitwise symmetric.
  const bool swap = seg_key(second) < seg_key(first);
  const Segment3& s1 = swap ? second : first;
  const Segment3& s2 = swap ? first : second;

#ifndef NDEBUG
  if (!coplanar4(s1.a, s1.b, s2.a, s2.b)) throw NotCoplanar{};
#endif

  const double tol = length_tolerance(scale_of({s1.a, s1.b, s2.a, s2.b}));
  const Vec3 d1 = s1.direction();
  const Vec3 d2 = s2.direction();
  const double len1 = norm(d1);
  const double len2 = norm(d2);

  if (len1 <= tol && len2 <= tol) {
    if (norm(s1.a - s2.a) <= tol) return seg_hit::Point{(s1.a + s2.a) * 0.5};
    return seg_hit::None{};
  }
  if (len1 <= tol) {
    if (point_segment_distance(s1.a, s2) <= tol) return seg_hit::Point{s1.a};
    return seg_hit::None{};
  }
  if (len2 <= tol) {
    if (point_segment_distance(s2.a, s1) <= tol) return seg_hit::Point{s2.a};
    return seg_hit::None{};
  }

  const Vec3 n = cross(d1, d2);
  const double nn = norm(n);
  const Vec3 r = s2.a - s1.a;

  if (nn <= tol * std::max(len1, len2)) {
    const double offset =
        std::max(point_line_distance(s2.a, s1.a, d1), point_line_distance(s1.a, s2.a, d2));
    if (offset > tol) return seg_hit::None{};
    const double l2 = len1 * len1;
    const double ta = dot(r, d1) / l2;
    const double tb = dot(s2.b - s1.a, d1) / l2;
    const double lo = std::max(0.0, std::min(ta, tb));
    const double hi = std::min(1.0, std::max(ta, tb));
    const double overlap = (hi - lo) * len1;
    if (overlap < -tol) return seg_hit::None{};
    if (overlap <= tol) return seg_hit::Point{s1.at(std::clamp(0.5 * (lo + hi), 0.0, 1.0))};
    return seg_hit::Overlap{Segment3{s1.at(lo), s1.at(hi)}};
  }

  const double n2 = nn * nn;
  const double s = dot(cross(r, d2), n) / n2;
  const double t = dot(cross(r, d1), n) / n2;
  const double slack1 = tol / len1;
  const double slack2 = tol / len2;
  if (s < -slack1 || s > 1.0 + slack1 || t < -slack2 || t > 1.0 + slack2) return seg_hit::None{};
  return seg_hit::Point{(s1.at(std::clamp(s, 0.0, 1.0)) + s2.at(std::clamp(t, 0.0, 1.0))) * 0.5};
}

bool segments_intersect(const Segment3& s1, const Segment3& s2) {
  if (!coplanar4(s1.a, s1.b, s2.a, s2.b)) return false;
  return !std::holds_alternative<seg_hit::None>(segments_intersect_coplanar(s1, s2));
}

bool point_in_triangle(const Vec3& p, const Triangle3& tri) {
  const auto plane = plane_from_triangle(tri);
  if (!plane) return point_on_segment(p, tri.hull_segment());

  const double tol = length_tolerance(scale_of({p, tri.p0, tri.p1, tri.p2}));
  const Vec3& n = plane->normal();
  const double nn = norm(n);
  // Each barycentric weight times |n| / |opposite edge| is the signed distance
  // of p from that edge, so the tolerance test is done in length units.
  const std::array<std::pair<const Vec3*, const Vec3*>, 3> edges{
      {{&tri.p1, &tri.p2}, {&tri.p2, &tri.p0}, {&tri.p0, &tri.p1}}};
  for (const auto& [u, v] : edges) {
    const Vec3 e = *v - *u;
    const double signed_area = dot(cross(e, p - *u), n);
    const double dist = signed_area / (nn * norm(e));
    if (dist < -tol) return false;
  }
  return true;
}

bool segment_interferes_triangle(const Segment3& seg, const Triangle3& tri) {
  const auto plane = plane_from_triangle(tri);
  if (!plane) return segments_intersect(seg, tri.hull_segment());

  const PlaneContact contact = classify_segment_vs_plane(seg, *plane);
  if (const auto* c = std::get_if<plane_contact::Crosses>(&contact)) {
    return point_in_triangle(c->point, tri);
  }
  if (!std::holds_alternative<plane_contact::InPlane>(contact)) return false;

  // Side test first; only then is one endpoint enough to decide containment.
  const std::array<Segment3, 3> sides{{{tri.p0, tri.p1}, {tri.p0, tri.p2}, {tri.p1, tri.p2}}};
  for (const auto& side : sides) {
    if (!std::holds_alternative<seg_hit::None>(segments_intersect_coplanar(seg, side))) return true;
  }
  return point_in_triangle(seg.a, tri);
}

bool coplanar4(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  const std::array<Vec3, 4> pts{a, b, c, d};
  const double tol = length_tolerance(scale_of({a, b, c, d}));

  // Longest pair defines the best-conditioned line, the farthest remaining
  // point the plane; the last point is then measured against that plane.
  std::size_t bi = 0, bj = 1;
  double best = -1.0;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = i + 1; j < 4; ++j) {
      const double l = norm2(pts[j] - pts[i]);
      if (l > best) {
        best = l;
        bi = i;
        bj = j;
      }
    }
  }
  if (std::sqrt(best) <= tol) return true;

  std::array<std::size_t, 2> rest{};
  std::size_t r = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    if (i != bi && i != bj) rest[r++] = i;
  }
  const Vec3 axis = pts[bj] - pts[bi];
  double h0 = point_line_distance(pts[rest[0]], pts[bi], axis);
  double h1 = point_line_distance(pts[rest[1]], pts[bi], axis);
  if (h1 > h0) {
    std::swap(rest[0], rest[1]);
    std::swap(h0, h1);
  }
  if (h0 <= tol) return true;

  const Vec3 n = cross(axis, pts[rest[0]] - pts[bi]);
  return std::abs(dot(pts[rest[1]] - pts[bi], n)) / norm(n) <= tol;
}

}  // namespace mmrelay
