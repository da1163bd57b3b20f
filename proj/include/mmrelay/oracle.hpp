#pragma once

// Brute-force reference for segment/triangle interference: dense sampling of
// the point-to-triangle distance along the segment, refined around the best
// sample. Shares no code with the analytic predicates it checks.

#include <cstdint>
#include <optional>
#include <random>
#include <string>

#include "mmrelay/geometry3d.hpp"

namespace mmrelay::oracle {

struct Options {
  int samples = 10000;
  /// Refined minimum distance at or below this counts as touching.
  double hit_distance = 1e-6;
  /// Cases with hit_distance < d_min <= band are too close to call.
  double band = 0.02;
  double half_extent = 100.0;
};

double point_triangle_distance(const Vec3& p, const Triangle3& tri);

/// Minimum distance between the segment and the (closed) triangle.
double min_distance(const Segment3& seg, const Triangle3& tri, int samples = 10000);

struct Case {
  Segment3 seg;
  Triangle3 tri;
};

/// Mix of uniform pairs in [-h, h]^3 and constructed crossings, near misses
/// and in-plane segments. Depends only on (seed, index).
Case random_case(std::uint64_t seed, std::uint64_t index, double half_extent = 100.0);

struct CaseResult {
  bool predicate = false;
  bool oracle_hit = false;
  bool excluded = false;
  double min_distance = 0.0;
  bool agrees() const { return excluded || predicate == oracle_hit; }
};

CaseResult check_case(const Case& c, const Options& opt);

struct AgreementReport {
  std::uint64_t samples = 0;
  std::uint64_t compared = 0;
  std::uint64_t agreed = 0;
  std::uint64_t excluded = 0;
  std::uint64_t oracle_hits = 0;
  std::optional<Case> worst;
  double worst_distance = 0.0;
  std::uint64_t worst_index = 0;

  double agreement_rate() const {
    return compared ? static_cast<double>(agreed) / static_cast<double>(compared) : 1.0;
  }
};

AgreementReport run_agreement_serial(std::uint64_t n, std::uint64_t seed, const Options& opt = {});
AgreementReport run_agreement_parallel(std::uint64_t n, std::uint64_t seed, int workers,
                                       const Options& opt = {});

std::string format_report(const AgreementReport& r);

}  // namespace mmrelay::oracle
