#include <doctest.h>

#include "gen.hpp"
#include "mmrelay/geometry3d.hpp"

using namespace mmrelay;

namespace {

const Triangle3 kUnit{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};

Vec3 unit_normal(const Plane3& p) { return p.normal() / norm(p.normal()); }

}  // namespace

TEST_CASE("plane from triangle") {
  const auto p = plane_from_triangle(kUnit);
  REQUIRE(p);
  CHECK(unit_normal(*p) == Vec3{0, 0, 1});

  CHECK_FALSE(plane_from_triangle({{0, 0, 0}, {1, 1, 1}, {2, 2, 2}}));
  CHECK(Triangle3{{0, 0, 0}, {1, 1, 1}, {2, 2, 2}}.is_degenerate());

  const auto q = plane_from_triangle({{0, 0, 0}, {2, 0, 0}, {0, 0, 3}});
  REQUIRE(q);
  CHECK(q->normal() == Vec3{0, -6, 0});
}

TEST_CASE("plane rejects a zero normal") {
  CHECK_THROWS_AS(Plane3({0, 0, 0}, {0, 0, 0}), std::invalid_argument);
}

TEST_CASE("segment versus plane") {
  const Plane3 z0({0, 0, 0}, {0, 0, 1});
  const auto c = classify_segment_vs_plane({{0, 0, -1}, {0, 0, 1}}, z0);
  REQUIRE(std::holds_alternative<plane_contact::Crosses>(c));
  CHECK(std::get<plane_contact::Crosses>(c).point == Vec3{0, 0, 0});
  CHECK(std::get<plane_contact::Crosses>(c).delta == 0.5);

  CHECK(std::holds_alternative<plane_contact::ParallelOff>(classify_segment_vs_plane({{0, 0, 1}, {1, 0, 1}}, z0)));
  CHECK(std::holds_alternative<plane_contact::InPlane>(classify_segment_vs_plane({{0, 0, 0}, {1, 1, 0}}, z0)));
  CHECK(std::holds_alternative<plane_contact::NoHit>(classify_segment_vs_plane({{0, 0, 1}, {0, 0, 2}}, z0)));
}

TEST_CASE("coplanar segment intersection") {
  const auto a = segments_intersect_coplanar({{0, -1, 0}, {0, 1, 0}}, {{-1, 0, 0}, {1, 0, 0}});
  REQUIRE(std::holds_alternative<seg_hit::Point>(a));
  CHECK(std::get<seg_hit::Point>(a).at == Vec3{0, 0, 0});

  CHECK(std::holds_alternative<seg_hit::None>(
      segments_intersect_coplanar({{0, 0, 0}, {1, 0, 0}}, {{0, 1, 0}, {1, 1, 0}})));

  const auto o = segments_intersect_coplanar({{0, 0, 0}, {2, 0, 0}}, {{1, 0, 0}, {3, 0, 0}});
  REQUIRE(std::holds_alternative<seg_hit::Overlap>(o));
  CHECK(std::get<seg_hit::Overlap>(o).span.a == Vec3{1, 0, 0});
  CHECK(std::get<seg_hit::Overlap>(o).span.b == Vec3{2, 0, 0});

  SUBCASE("touching endpoints count") {
    const auto t = segments_intersect_coplanar({{0, 0, 0}, {1, 0, 0}}, {{1, 0, 0}, {1, 5, 0}});
    REQUIRE(std::holds_alternative<seg_hit::Point>(t));
    CHECK(std::get<seg_hit::Point>(t).at == Vec3{1, 0, 0});
  }
  SUBCASE("collinear but disjoint") {
    CHECK(std::holds_alternative<seg_hit::None>(
        segments_intersect_coplanar({{0, 0, 0}, {1, 0, 0}}, {{2, 0, 0}, {3, 0, 0}})));
  }
  SUBCASE("degenerate segment on the other") {
    CHECK(std::holds_alternative<seg_hit::Point>(
        segments_intersect_coplanar({{0.5, 0, 0}, {0.5, 0, 0}}, {{0, 0, 0}, {1, 0, 0}})));
  }
}

TEST_CASE("skew segments never intersect") {
  CHECK_FALSE(segments_intersect({{0, 0, 0}, {1, 0, 0}}, {{0.5, -1, 1}, {0.5, 1, 1}}));
  CHECK(segments_intersect({{0, 0, 0}, {1, 0, 0}}, {{0.5, -1, 0}, {0.5, 1, 0}}));
}

TEST_CASE("point in triangle") {
  CHECK(point_in_triangle({0.25, 0.25, 0}, kUnit));
  CHECK_FALSE(point_in_triangle({1, 1, 0}, kUnit));
  CHECK(point_in_triangle({0.5, 0.5, 0}, kUnit));
  CHECK(point_in_triangle({0, 0, 0}, kUnit));
  CHECK_FALSE(point_in_triangle({-1e-3, 0.5, 0}, kUnit));
}

TEST_CASE("segment interferes with triangle") {
  CHECK(segment_interferes_triangle({{0.2, 0.2, -1}, {0.2, 0.2, 1}}, kUnit));
  CHECK_FALSE(segment_interferes_triangle({{5, 5, -1}, {5, 5, 1}}, kUnit));
  CHECK(segment_interferes_triangle({{0.1, 0.1, 0}, {0.2, 0.2, 0}}, kUnit));

  SUBCASE("parallel offset") {
    CHECK_FALSE(segment_interferes_triangle({{0.1, 0.1, 1}, {0.2, 0.2, 1}}, kUnit));
  }
  SUBCASE("crossing stops short of the plane") {
    CHECK_FALSE(segment_interferes_triangle({{0.2, 0.2, 1}, {0.2, 0.2, 0.5}}, kUnit));
  }
  SUBCASE("in-plane segment crossing one side") {
    CHECK(segment_interferes_triangle({{-1, 0.2, 0}, {0.2, 0.2, 0}}, kUnit));
  }
  SUBCASE("in-plane segment passing through without an endpoint inside") {
    CHECK(segment_interferes_triangle({{-1, 0.3, 0}, {2, 0.3, 0}}, kUnit));
  }
  SUBCASE("in-plane segment outside") {
    CHECK_FALSE(segment_interferes_triangle({{1, 1, 0}, {2, 2, 0}}, kUnit));
  }
  SUBCASE("touching a vertex counts") {
    CHECK(segment_interferes_triangle({{1, 0, -1}, {1, 0, 1}}, kUnit));
  }
  SUBCASE("degenerate triangle falls back to segment tests") {
    const Triangle3 flat{{0, 0, 0}, {1, 0, 0}, {2, 0, 0}};
    CHECK(segment_interferes_triangle({{1.5, -1, 0}, {1.5, 1, 0}}, flat));
    CHECK_FALSE(segment_interferes_triangle({{1.5, -1, 1}, {1.5, 1, 1}}, flat));
    const Triangle3 point{{1, 1, 1}, {1, 1, 1}, {1, 1, 1}};
    CHECK(segment_interferes_triangle({{0, 0, 0}, {2, 2, 2}}, point));
  }
}

TEST_CASE("coplanar4") {
  CHECK(coplanar4({0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}));
  CHECK_FALSE(coplanar4({0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}));
  CHECK(coplanar4({0, 0, 0}, {2, 0, 0}, {0, 2, 0}, {1, 1, 0}));
  CHECK(coplanar4({0, 0, 0}, {1, 1, 1}, {2, 2, 2}, {5, -3, 7}));
}

TEST_CASE("segment degeneracy flag") {
  CHECK(Segment3{{1, 2, 3}, {1, 2, 3}}.is_degenerate());
  CHECK_FALSE(Segment3{{1, 2, 3}, {1, 2, 4}}.is_degenerate());
}

TEST_CASE("property: coplanar intersection is symmetric") {
  auto r = gen::rng(11);
  for (int n = 0; n < 5000; ++n) {
    // Integer grid points make touching and collinear cases common.
    auto grid = [&] { return Vec3{double(gen::integer(r, -3, 3)), double(gen::integer(r, -3, 3)), 0.0}; };
    const Segment3 a{grid(), grid()};
    const Segment3 b{grid(), grid()};
    const auto ab = segments_intersect_coplanar(a, b);
    const auto ba = segments_intersect_coplanar(b, a);
    REQUIRE(ab.index() == ba.index());
    if (const auto* p = std::get_if<seg_hit::Point>(&ab)) CHECK(p->at == std::get<seg_hit::Point>(ba).at);
  }
}

TEST_CASE("property: plane crossing point lies on the plane") {
  auto r = gen::rng(12);
  for (int n = 0; n < 5000; ++n) {
    const Triangle3 tri{gen::vec(r, 100), gen::vec(r, 100), gen::vec(r, 100)};
    const auto plane = plane_from_triangle(tri);
    if (!plane) continue;
    const Segment3 seg{gen::vec(r, 100), gen::vec(r, 100)};
    const auto c = classify_segment_vs_plane(seg, *plane);
    if (const auto* x = std::get_if<plane_contact::Crosses>(&c)) {
      CHECK(std::abs(plane->signed_distance(x->point)) <= 1e-9 * 100 * 10);
      CHECK(x->delta >= 0.0);
      CHECK(x->delta <= 1.0);
    }
  }
}

TEST_CASE("property: interference is invariant under rigid motions") {
  auto r = gen::rng(13);
  int compared = 0;
  for (int n = 0; n < 5000; ++n) {
    const Triangle3 tri{gen::vec(r, 50), gen::vec(r, 50), gen::vec(r, 50)};
    Segment3 seg{gen::vec(r, 50), gen::vec(r, 50)};
    if (n % 2 == 0) {
      // Force a crossing through a random interior point.
      double a = gen::uniform(r, 0, 1), b = gen::uniform(r, 0, 1);
      if (a + b > 1) a = 1 - a, b = 1 - b;
      const Vec3 q = tri.p0 + (tri.p1 - tri.p0) * a + (tri.p2 - tri.p0) * b;
      const Vec3 d = gen::unit(r) * gen::uniform(r, 1, 20);
      seg = {q - d, q + d};
    }
    const bool before = segment_interferes_triangle(seg, tri);
    const auto m = gen::rigid(r, 50);
    const bool after = segment_interferes_triangle({m(seg.a), m(seg.b)}, {m(tri.p0), m(tri.p1), m(tri.p2)});
    // Skip pairs whose contact is within rounding of the boundary.
    const double margin = 1e-6;
    const auto plane = plane_from_triangle(tri);
    if (plane && (std::abs(plane->signed_distance(seg.a)) < margin || std::abs(plane->signed_distance(seg.b)) < margin)) continue;
    ++compared;
    CHECK(before == after);
  }
  CHECK(compared > 4000);
}
