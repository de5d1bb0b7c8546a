#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "multitile/asymptotics.hpp"
#include "multitile/flow.hpp"
#include "multitile/geometry.hpp"
#include "multitile/real.hpp"

namespace multitile {

struct CensusCell {
  std::size_t type = 0;
  ScaleInterval interval;
  std::uint64_t count = 0;
  Rational rate;  // count / u^d
};

struct TileCensus {
  Rational factor{1};  // u
  int dimension = 2;
  Rational volume;     // exact patch volume
  std::uint64_t total = 0;
  std::vector<std::uint64_t> per_type;
  std::vector<CensusCell> cells;
  /// Exact scale histogram per type, largest scale first.
  std::vector<std::vector<std::pair<Rational, std::uint64_t>>> by_scale;
};

/// partitions[j] lists the intervals counted for type j (may be empty).
TileCensus census(const Scheme& scheme, const Patch& patch, const std::vector<std::vector<ScaleInterval>>& partitions);
TileCensus census(const Scheme& scheme, const ScaleSpectrum& spectrum,
                  const std::vector<std::vector<ScaleInterval>>& partitions);

struct ComplexityProfile {
  std::vector<std::uint64_t> c;  // c[k] for k = 0..k_max
  std::vector<std::vector<std::pair<std::size_t, Rational>>> scales;  // distinct (type, scale) per k
};

/// Distinct (type, scale) pairs of stationary_patch(k), k = 0..k_max.
ComplexityProfile complexity(const Scheme& scheme, const StationaryAnchor& anchor, int k_max,
                             std::uint64_t budget = 10'000'000);

struct DiscrepancyRow {
  TimePoint time;
  std::uint64_t count = 0;
  Real expected;
  Real discrepancy;       // |count - expected|
  std::uint64_t distinct = 0;  // distinct (type, scale) pairs
  double ceiling = 0;     // n * prod_e (1 + t / len_e), a C t^|E| bound
};

std::vector<DiscrepancyRow> discrepancy_series(const Densities& densities, std::size_t root,
                                               const std::vector<TimePoint>& times, int digits = 50,
                                               std::uint64_t budget = 10'000'000);

/// Closed, half-open or degenerate ({lo}) range of dilations.
struct DilationRange {
  Rational lo{1};
  Rational hi{1};
  bool lo_closed = true;
  bool hi_closed = true;
  bool contains(const Rational& x) const;
};

struct OccurrenceCount {
  std::uint64_t L = 0;  // support inside the region
  std::uint64_t N = 0;  // support meets the region
};

/// Occurrences g + lambda * needle in the haystack with lambda in `dilations`.
/// The needle is normalized so its largest tile scale is 1.
OccurrenceCount count_occurrences(const Scheme& scheme, const Patch& haystack, const Patch& needle,
                                  const DilationRange& dilations, const geometry::Box& region, unsigned workers = 1);

/// Tiles whose support lies in the box, as a patch with the same meta.
Patch extract_box(const Scheme& scheme, const Patch& patch, const geometry::Box& box);

/// Largest distance from a point of (lo, hi] to the nearest listed scale.
Rational coverage_radius(std::vector<Rational> scales, const Rational& lo, const Rational& hi);

}  // namespace multitile
