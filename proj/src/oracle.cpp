#include "mmrelay/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include <fmt/format.h>

namespace mmrelay::oracle {

namespace {

struct P2 {
  double u, v;
};

double seg2_distance(P2 p, P2 a, P2 b) {
  const double dx = b.u - a.u;
  const double dy = b.v - a.v;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0.0 ? ((p.u - a.u) * dx + (p.v - a.v) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p.u - (a.u + t * dx), p.v - (a.v + t * dy));
}

double seg3_distance(const Vec3& p, const Vec3& a, const Vec3& b) {
  const Vec3 d = b - a;
  const double len2 = dot(d, d);
  const double t = len2 > 0.0 ? std::clamp(dot(p - a, d) / len2, 0.0, 1.0) : 0.0;
  return norm(p - (a + d * t));
}

// Triangle expressed in an orthonormal frame anchored at p0: in-plane
// coordinates (u, v) and height h along the unit normal.
class LocalFrame {
 public:
  explicit LocalFrame(const Triangle3& tri) : tri_(tri) {
    const Vec3 e1 = tri.p1 - tri.p0;
    const Vec3 e2 = tri.p2 - tri.p0;
    const Vec3 n = cross(e1, e2);
    const double l1 = norm(e1);
    const double area2 = norm(n);
    const double scale = std::max({norm(e1), norm(e2), norm(tri.p2 - tri.p1)});
    degenerate_ = !(area2 > 1e-12 * scale * scale) || l1 == 0.0;
    if (degenerate_) return;
    ex_ = e1 / l1;
    nz_ = n / area2;
    ey_ = cross(nz_, ex_);
    a_ = {0.0, 0.0};
    b_ = {l1, 0.0};
    c_ = {dot(e2, ex_), dot(e2, ey_)};
  }

  bool degenerate() const { return degenerate_; }

  std::array<double, 3> coords(const Vec3& p) const {
    const Vec3 r = p - tri_.p0;
    return {dot(r, ex_), dot(r, ey_), dot(r, nz_)};
  }

  double distance_at(double u, double v, double h) const {
    const P2 p{u, v};
    // c_ lies on the +v side by construction, so the vertices run counter-clockwise.
    const bool inside = edge(a_, b_, p) >= 0.0 && edge(b_, c_, p) >= 0.0 && edge(c_, a_, p) >= 0.0;
    if (inside) return std::abs(h);
    const double d2 = std::min({seg2_distance(p, a_, b_), seg2_distance(p, b_, c_), seg2_distance(p, c_, a_)});
    return std::hypot(d2, h);
  }

  double distance(const Vec3& p) const {
    if (degenerate_) {
      return std::min({seg3_distance(p, tri_.p0, tri_.p1), seg3_distance(p, tri_.p1, tri_.p2),
                       seg3_distance(p, tri_.p2, tri_.p0)});
    }
    const auto c = coords(p);
    return distance_at(c[0], c[1], c[2]);
  }

 private:
  static double edge(P2 a, P2 b, P2 p) { return (b.u - a.u) * (p.v - a.v) - (b.v - a.v) * (p.u - a.u); }

  Triangle3 tri_;
  bool degenerate_ = false;
  Vec3 ex_, ey_, nz_;
  P2 a_{}, b_{}, c_{};
};

std::mt19937_64 case_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    0x6f7261u};
  return std::mt19937_64(seq);
}

Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  while (true) {
    const Vec3 v{g(rng), g(rng), g(rng)};
    const double n = norm(v);
    if (n > 1e-6) return v / n;
  }
}

std::string vec(const Vec3& v) { return fmt::format("({:.17g}, {:.17g}, {:.17g})", v.x, v.y, v.z); }

void tally(AgreementReport& r, const std::vector<CaseResult>& results, std::uint64_t seed,
           const Options& opt) {
  r.samples = results.size();
  for (std::uint64_t k = 0; k < results.size(); ++k) {
    const CaseResult& c = results[k];
    if (c.excluded) {
      ++r.excluded;
      continue;
    }
    ++r.compared;
    if (c.oracle_hit) ++r.oracle_hits;
    if (c.agrees()) {
      ++r.agreed;
    } else if (!r.worst || c.min_distance > r.worst_distance) {
      r.worst = random_case(seed, k, opt.half_extent);
      r.worst_distance = c.min_distance;
      r.worst_index = k;
    }
  }
}

}  // namespace

double point_triangle_distance(const Vec3& p, const Triangle3& tri) { return LocalFrame(tri).distance(p); }

template <typename F>
double sampled_minimum(F f, int samples) {
  const int n = std::max(samples, 2);
  int best_k = 0;
  double best = f(0.0);
  for (int k = 1; k < n; ++k) {
    const double d = f(static_cast<double>(k) / (n - 1));
    if (d < best) {
      best = d;
      best_k = k;
    }
  }

  // The distance to a convex set is convex along a line; golden-section search
  // inside the bracket around the best sample.
  double lo = std::max(0.0, static_cast<double>(best_k - 1) / (n - 1));
  double hi = std::min(1.0, static_cast<double>(best_k + 1) / (n - 1));
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < 90; ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = f(x2);
    }
  }
  return std::min({best, f1, f2});
}

double min_distance(const Segment3& seg, const Triangle3& tri, int samples) {
  const LocalFrame frame(tri);
  if (frame.degenerate()) {
    return sampled_minimum([&](double s) { return frame.distance(seg.a + (seg.b - seg.a) * s); }, samples);
  }
  // Local coordinates are affine in s, so interpolate instead of re-projecting.
  const auto c0 = frame.coords(seg.a);
  const auto c1 = frame.coords(seg.b);
  return sampled_minimum(
      [&](double s) {
        return frame.distance_at(c0[0] + (c1[0] - c0[0]) * s, c0[1] + (c1[1] - c0[1]) * s,
                                 c0[2] + (c1[2] - c0[2]) * s);
      },
      samples);
}

Case random_case(std::uint64_t seed, std::uint64_t index, double half_extent) {
  auto rng = case_rng(seed, index);
  std::uniform_real_distribution<double> coord(-half_extent, half_extent);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto point = [&] { return Vec3{coord(rng), coord(rng), coord(rng)}; };

  Case c;
  c.tri = {point(), point(), point()};
  const Vec3 e1 = c.tri.p1 - c.tri.p0;
  const Vec3 e2 = c.tri.p2 - c.tri.p0;

  switch (index % 4) {
    case 0:
      c.seg = {point(), point()};
      break;
    case 1: {
      double a = unit(rng);
      double b = unit(rng);
      if (a + b > 1.0) {
        a = 1.0 - a;
        b = 1.0 - b;
      }
      const Vec3 q = c.tri.p0 + e1 * a + e2 * b;
      const Vec3 d = random_unit(rng);
      c.seg = {q - d * (1.0 + 99.0 * unit(rng)), q + d * (1.0 + 99.0 * unit(rng))};
      break;
    }
    case 2: {
      const std::array<Vec3, 3> v{c.tri.p0, c.tri.p1, c.tri.p2};
      const int e = static_cast<int>(unit(rng) * 3.0) % 3;
      const Vec3& a = v[static_cast<std::size_t>(e)];
      const Vec3& b = v[static_cast<std::size_t>((e + 1) % 3)];
      const Vec3& opposite = v[static_cast<std::size_t>((e + 2) % 3)];
      const Vec3 on_edge = a + (b - a) * unit(rng);
      const Vec3 n = cross(e1, e2);
      Vec3 out = cross(b - a, n);
      if (dot(out, opposite - a) > 0.0) out = out * -1.0;
      const double len = norm(out);
      const Vec3 q = len > 0.0 ? on_edge + out * (0.5 * unit(rng) / len) : on_edge;
      const Vec3 d = random_unit(rng);
      c.seg = {q - d * (1.0 + 99.0 * unit(rng)), q + d * (1.0 + 99.0 * unit(rng))};
      break;
    }
    default: {
      auto in_plane = [&] { return c.tri.p0 + e1 * (2.0 * unit(rng) - 0.5) + e2 * (2.0 * unit(rng) - 0.5); };
      c.seg = {in_plane(), in_plane()};
      break;
    }
  }
  return c;
}

CaseResult check_case(const Case& c, const Options& opt) {
  CaseResult r;
  r.predicate = segment_interferes_triangle(c.seg, c.tri);
  r.min_distance = min_distance(c.seg, c.tri, opt.samples);
  r.oracle_hit = r.min_distance <= opt.hit_distance;
  r.excluded = !r.oracle_hit && r.min_distance <= opt.band;
  return r;
}

AgreementReport run_agreement_serial(std::uint64_t n, std::uint64_t seed, const Options& opt) {
  std::vector<CaseResult> results(n);
  for (std::uint64_t k = 0; k < n; ++k) results[k] = check_case(random_case(seed, k, opt.half_extent), opt);
  AgreementReport r;
  tally(r, results, seed, opt);
  return r;
}

AgreementReport run_agreement_parallel(std::uint64_t n, std::uint64_t seed, int workers,
                                       const Options& opt) {
  std::vector<CaseResult> results(n);
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static) num_threads(std::max(workers, 1))
  for (std::int64_t k = 0; k < count; ++k) {
    const auto idx = static_cast<std::uint64_t>(k);
    results[idx] = check_case(random_case(seed, idx, opt.half_extent), opt);
  }
  AgreementReport r;
  tally(r, results, seed, opt);
  return r;
}

std::string format_report(const AgreementReport& r) {
  std::string out;
  out += fmt::format("samples: {}\n", r.samples);
  out += fmt::format("compared: {}\n", r.compared);
  out += fmt::format("boundary_band_excluded: {}\n", r.excluded);
  out += fmt::format("oracle_hits: {}\n", r.oracle_hits);
  out += fmt::format("agreement_rate: {:.6f}\n", r.agreement_rate());
  if (r.worst) {
    out += fmt::format("worst_disagreement: case={} min_distance={:.17g}\n", r.worst_index, r.worst_distance);
    out += fmt::format("  segment: {} -> {}\n", vec(r.worst->seg.a), vec(r.worst->seg.b));
    out += fmt::format("  triangle: {} {} {}\n", vec(r.worst->tri.p0), vec(r.worst->tri.p1), vec(r.worst->tri.p2));
  } else {
    out += "worst_disagreement: none\n";
  }
  return out;
}

}  // namespace mmrelay::oracle
