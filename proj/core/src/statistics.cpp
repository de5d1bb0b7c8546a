#include "multitile/statistics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <set>
#include <thread>
#include <unordered_set>

#include "multitile/errors.hpp"

namespace multitile {

using geometry::Box;
using geometry::Point;
using geometry::Polygon;

namespace {

TileCensus census_from(const Scheme& scheme, const ScaleSpectrum& spectrum,
                       const std::vector<std::vector<ScaleInterval>>& partitions) {
  if (partitions.size() > scheme.size()) throw DomainError("more census partitions than prototiles");
  TileCensus out;
  out.factor = spectrum.factor;
  out.dimension = spectrum.dimension;
  out.per_type.assign(scheme.size(), 0);
  out.by_scale.assign(scheme.size(), {});
  const Rational inflated = spectrum.factor.pow(spectrum.dimension);
  for (const ScaleClass& c : spectrum.classes) {
    out.total += c.count;
    out.per_type[c.type] += c.count;
    out.by_scale[c.type].push_back({c.scale, c.count});
    out.volume += Rational(static_cast<long>(c.count)) * c.scale.pow(spectrum.dimension) *
                  scheme.prototiles[c.type].volume;
  }
  for (std::size_t j = 0; j < partitions.size(); ++j) {
    for (const ScaleInterval& I : partitions[j]) {
      std::uint64_t count = 0;
      for (const auto& [scale, n] : out.by_scale[j]) {
        if (I.contains(scale)) count += n;
      }
      out.cells.push_back({j, I, count, Rational(static_cast<long>(count)) / inflated});
    }
  }
  return out;
}

}  // namespace

TileCensus census(const Scheme& scheme, const Patch& patch, const std::vector<std::vector<ScaleInterval>>& partitions) {
  return census_from(scheme, spectrum_of(patch), partitions);
}

TileCensus census(const Scheme& scheme, const ScaleSpectrum& spectrum,
                  const std::vector<std::vector<ScaleInterval>>& partitions) {
  return census_from(scheme, spectrum, partitions);
}

ComplexityProfile complexity(const Scheme& scheme, const StationaryAnchor& anchor, int k_max, std::uint64_t budget) {
  if (k_max < 0) throw DomainError("k_max must be >= 0");
  ComplexityProfile profile;
  const Rational expansion = Rational(1) / anchor.contraction;
  for (int k = 0; k <= k_max; ++k) {
    // Translation does not change (type, scale), so the spectrum suffices.
    const ScaleSpectrum s = scale_spectrum(scheme, anchor.root_type, TimePoint::exact(expansion.pow(k)), budget);
    std::vector<std::pair<std::size_t, Rational>> pairs;
    for (const ScaleClass& c : s.classes) pairs.push_back({c.type, c.scale});
    profile.c.push_back(pairs.size());
    profile.scales.push_back(std::move(pairs));
  }
  return profile;
}

std::vector<DiscrepancyRow> discrepancy_series(const Densities& densities, std::size_t root,
                                               const std::vector<TimePoint>& times, int digits,
                                               std::uint64_t budget) {
  const Scheme& scheme = densities.scheme();
  const mpfr_prec_t bits = Real::bits_for_digits(digits);
  const Real rate = densities.phi_total().evaluate(bits);
  std::vector<double> lengths;
  for (const GraphEdge& e : densities.graph().edges) lengths.push_back(e.length.to_double());
  std::vector<DiscrepancyRow> rows;
  for (const TimePoint& t : times) {
    const ScaleSpectrum s = scale_spectrum(scheme, root, t, budget);
    DiscrepancyRow row;
    row.time = t;
    row.count = s.total();
    row.expected = rate * Real(t.factor().pow(scheme.dimension), bits);
    row.discrepancy = (Real(Rational(static_cast<long>(row.count)), bits) - row.expected).abs();
    row.distinct = s.distinct();
    double bound = static_cast<double>(scheme.size());
    const double tv = t.value();
    for (const double len : lengths) bound *= 1.0 + tv / len;
    row.ceiling = bound;
    rows.push_back(std::move(row));
  }
  return rows;
}

bool DilationRange::contains(const Rational& x) const {
  const bool above = lo_closed ? x >= lo : x > lo;
  const bool below = hi_closed ? x <= hi : x < hi;
  return above && below;
}

namespace {

struct Key {
  std::uint16_t type;
  Rational scale;
  Point offset;
  bool operator==(const Key&) const = default;
};

struct KeyHash {
  std::size_t operator()(const Key& k) const {
    std::size_t h = k.type;
    h = h * 1000003u ^ k.scale.hash();
    h = h * 1000003u ^ k.offset.x.hash();
    h = h * 1000003u ^ k.offset.y.hash();
    return h;
  }
};

Polygon box_polygon(const Box& b) { return {{b.x0, b.y0}, {b.x1, b.y0}, {b.x1, b.y1}, {b.x0, b.y1}}; }

bool box_contains(const Box& b, const Point& p) { return b.x0 <= p.x && p.x <= b.x1 && b.y0 <= p.y && p.y <= b.y1; }

bool boxes_overlap(const Box& a, const Box& b) {
  return a.x0 < b.x1 && b.x0 < a.x1 && a.y0 < b.y1 && b.y0 < a.y1;
}

// Support of a placed tile relative to a region: 2 inside, 1 meets, 0 apart.
int region_relation(const Scheme& scheme, std::size_t type, const Rational& scale, const Point& offset,
                    const Box& region) {
  const Polygon shape = placed_geometry(scheme, type, scale, offset);
  if (scheme.dimension == 1) {
    const Rational& lo = shape[0].x;
    const Rational& hi = shape[1].x;
    if (region.x0 <= lo && hi <= region.x1) return 2;
    return (lo < region.x1 && region.x0 < hi) ? 1 : 0;
  }
  if (std::all_of(shape.begin(), shape.end(), [&](const Point& p) { return box_contains(region, p); })) return 2;
  if (!boxes_overlap(geometry::bounding_box(shape), region)) return 0;
  return geometry::intersection_area(shape, box_polygon(region)).sign() > 0 ? 1 : 0;
}

}  // namespace

OccurrenceCount count_occurrences(const Scheme& scheme, const Patch& haystack, const Patch& needle,
                                  const DilationRange& dilations, const Box& region, unsigned workers) {
  if (needle.tiles.empty()) throw DomainError("needle patch is empty");
  if (!(region.x0 < region.x1) || (scheme.dimension == 2 && !(region.y0 < region.y1))) {
    throw DomainError("occurrence region is degenerate");
  }
  // Canonical needle: anchor at the least offset, largest scale 1.
  std::size_t anchor = 0;
  Rational largest = needle.tiles[0].scale;
  for (std::size_t k = 1; k < needle.tiles.size(); ++k) {
    const PlacedTile& t = needle.tiles[k];
    const PlacedTile& a = needle.tiles[anchor];
    if (std::tie(t.offset.x, t.offset.y, t.type) < std::tie(a.offset.x, a.offset.y, a.type)) anchor = k;
    largest = max(largest, t.scale);
  }
  const PlacedTile& a = needle.tiles[anchor];
  struct Rel {
    std::uint16_t type;
    Rational scale;
    Point offset;  // relative to the anchor, in normalized units
  };
  std::vector<Rel> rest;
  for (std::size_t k = 0; k < needle.tiles.size(); ++k) {
    if (k == anchor) continue;
    const PlacedTile& t = needle.tiles[k];
    rest.push_back({t.type, t.scale / largest,
                    {(t.offset.x - a.offset.x) / largest, (t.offset.y - a.offset.y) / largest}});
  }
  const Rational anchor_scale = a.scale / largest;

  std::unordered_set<Key, KeyHash> index;
  index.reserve(haystack.tiles.size());
  for (const PlacedTile& t : haystack.tiles) index.insert({t.type, t.scale, t.offset});

  auto scan = [&](std::size_t begin, std::size_t end) {
    OccurrenceCount c;
    for (std::size_t h = begin; h < end; ++h) {
      const PlacedTile& base = haystack.tiles[h];
      if (base.type != a.type) continue;
      const Rational lambda = base.scale / anchor_scale;
      if (!dilations.contains(lambda)) continue;
      bool match = true;
      for (const Rel& r : rest) {
        const Key want{r.type, lambda * r.scale,
                       {base.offset.x + lambda * r.offset.x, base.offset.y + lambda * r.offset.y}};
        if (index.find(want) == index.end()) {
          match = false;
          break;
        }
      }
      if (!match) continue;
      int worst = region_relation(scheme, base.type, base.scale, base.offset, region);
      bool meets = worst > 0;
      for (const Rel& r : rest) {
        const int rel = region_relation(scheme, r.type, lambda * r.scale,
                                        {base.offset.x + lambda * r.offset.x, base.offset.y + lambda * r.offset.y},
                                        region);
        worst = std::min(worst, rel);
        meets = meets || rel > 0;
      }
      if (worst == 2) ++c.L;
      if (meets) ++c.N;
    }
    return c;
  };

  const std::size_t n = haystack.tiles.size();
  const unsigned w = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(1, n / 1024))));
  if (w == 1) return scan(0, n);
  std::vector<OccurrenceCount> parts(w);
  std::vector<std::thread> pool;
  for (unsigned k = 0; k < w; ++k) {
    pool.emplace_back([&, k] { parts[k] = scan(n * k / w, n * (k + 1) / w); });
  }
  for (auto& th : pool) th.join();
  OccurrenceCount total;
  for (const auto& p : parts) {
    total.L += p.L;
    total.N += p.N;
  }
  return total;
}

Patch extract_box(const Scheme& scheme, const Patch& patch, const Box& box) {
  Patch out;
  out.meta = patch.meta;
  for (const PlacedTile& t : patch.tiles) {
    if (region_relation(scheme, t.type, t.scale, t.offset, box) == 2) out.tiles.push_back(t);
  }
  return out;
}

Rational coverage_radius(std::vector<Rational> scales, const Rational& lo, const Rational& hi) {
  std::erase_if(scales, [&](const Rational& s) { return s <= lo || s > hi; });
  if (scales.empty()) return hi - lo;
  std::sort(scales.begin(), scales.end());
  scales.erase(std::unique(scales.begin(), scales.end()), scales.end());
  Rational radius = max(scales.front() - lo, hi - scales.back());
  for (std::size_t k = 1; k < scales.size(); ++k) radius = max(radius, (scales[k] - scales[k - 1]) / Rational(2));
  return radius;
}

}  // namespace multitile
