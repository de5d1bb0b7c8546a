#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "multitile/errors.hpp"
#include "multitile/graph.hpp"
#include "multitile/statistics.hpp"

using namespace multitile;
using geometry::Box;

namespace {

TimePoint T(long p, long q = 1) { return TimePoint::exact(Rational(p, q)); }

StationaryAnchor square_anchor() { return find_stationary_anchors(fixtures::square(), 0, T(5, 3)).front(); }

Box box(long x0, long y0, long x1, long y1, long den = 1) {
  return {Rational(x0, den), Rational(y0, den), Rational(x1, den), Rational(y1, den)};
}

}  // namespace

TEST_SUITE("statistics") {

TEST_CASE("census of one square substitution step") {
  const Scheme& s = fixtures::square();
  const TileCensus c = census(s, generate(s, 0, T(5, 3)), {});
  CHECK(c.total == 17);
  REQUIRE(c.by_scale[0].size() == 2);
  CHECK(c.by_scale[0][0] == std::make_pair(Rational(1), std::uint64_t{1}));
  CHECK(c.by_scale[0][1] == std::make_pair(Rational(1, 3), std::uint64_t{16}));
  CHECK(c.volume == Rational(25, 9));
}

TEST_CASE("property: census partitions add up and match the path oracle") {
  for (const char* name : {"square", "triangles", "kakutani-1-3"}) {
    const Scheme& s = fixtures::scheme(name);
    const SubstGraph g = build_graph(s);
    for (const Rational& u : {Rational(7, 2), Rational(11), Rational(125, 9)}) {
      std::vector<std::vector<ScaleInterval>> parts(s.size());
      for (std::size_t j = 0; j < s.size(); ++j) {
        const Rational beta = beta_min(s, j);
        const Rational mid = (beta + Rational(1)) / Rational(2);
        parts[j].emplace_back(beta, mid, false, true);
        parts[j].emplace_back(mid, Rational(1), false, true);
        parts[j].emplace_back(beta, Rational(1), false, true);
      }
      const TileCensus c = census(s, scale_spectrum(s, 0, TimePoint::exact(u)), parts);
      CHECK(c.total == path_count_oracle(g, 0, LogLinearValue::log_of(u)));
      for (std::size_t j = 0; j < s.size(); ++j) {
        const auto& cells = c.cells;
        std::uint64_t a = 0, b = 0, whole = 0;
        for (const CensusCell& cell : cells) {
          if (cell.type != j) continue;
          if (cell.interval.b == Rational(1) && cell.interval.a == beta_min(s, j)) whole = cell.count;
          else if (cell.interval.b == Rational(1)) b = cell.count;
          else a = cell.count;
        }
        CHECK(a + b == whole);
        CHECK(whole == c.per_type[j]);
      }
      CHECK(c.volume == u.pow(s.dimension));
    }
  }
}

TEST_CASE("complexity profiles") {
  const ComplexityProfile p = complexity(fixtures::square(), square_anchor(), 8);
  for (std::size_t k = 0; k < p.c.size(); ++k) CHECK(p.c[k] == k + 1);
  CHECK(p.scales[5].size() == 6);

  const StationaryAnchor h = find_stationary_anchors(fixtures::fixed_half(), 0, T(4)).front();
  const ComplexityProfile fh = complexity(fixtures::fixed_half(), h, 6);
  for (const auto c : fh.c) CHECK(c == 1);

  const StationaryAnchor t = find_stationary_anchors(fixtures::triangles(), 0, T(5)).front();
  const ComplexityProfile tp = complexity(fixtures::triangles(), t, 3);
  CHECK(tp.c[0] == 1);
  for (std::size_t k = 1; k < tp.c.size(); ++k) CHECK(tp.c[k] > tp.c[k - 1]);
}

TEST_CASE("complexity from the spectrum equals complexity of generated patches") {
  const Scheme& s = fixtures::triangles();
  const StationaryAnchor t = find_stationary_anchors(s, 0, T(5)).front();
  const ComplexityProfile p = complexity(s, t, 2);
  for (int k = 0; k <= 2; ++k) CHECK(spectrum_of(stationary_patch(s, t, k)).distinct() == p.c[k]);
}

TEST_CASE("discrepancy series") {
  const Densities d(fixtures::square());
  std::vector<TimePoint> times{T(1)};
  for (int k = 1; k <= 6; ++k) times.push_back(TimePoint::exact(Rational(5, 3).pow(k)));
  const auto rows = discrepancy_series(d, 0, times);
  REQUIRE(rows.size() == 7);
  CHECK(rows[0].count == 1);
  const double rate = d.phi_total().to_double();
  CHECK(rows[0].discrepancy.to_double() == doctest::Approx(std::fabs(1 - rate)));
  for (const auto& r : rows) {
    CHECK(r.discrepancy.sign() > 0);
    CHECK(static_cast<double>(r.distinct) <= r.ceiling);
  }
}

TEST_CASE("single-tile needle reduces to a census") {
  const Scheme& s = fixtures::square();
  const Patch hay = stationary_patch(s, square_anchor(), 4);
  Patch needle;
  needle.meta = hay.meta;
  needle.tiles.push_back({0, Rational(1), {}, {}});
  const Box region = box(-3, -2, 4, 5);
  DilationRange range{Rational(1, 3), Rational(1)};
  const OccurrenceCount c = count_occurrences(s, hay, needle, range, region);
  std::uint64_t expect = 0, meets = 0;
  for (const PlacedTile& t : hay.tiles) {
    if (!range.contains(t.scale)) continue;
    const bool inside = region.x0 <= t.offset.x && t.offset.x + t.scale <= region.x1 && region.y0 <= t.offset.y &&
                        t.offset.y + t.scale <= region.y1;
    const bool overlap = t.offset.x < region.x1 && region.x0 < t.offset.x + t.scale && t.offset.y < region.y1 &&
                         region.y0 < t.offset.y + t.scale;
    expect += inside;
    meets += overlap;
  }
  CHECK(c.L == expect);
  CHECK(c.N == meets);
  CHECK(c.L <= c.N);
}

TEST_CASE("self match and translation invariance") {
  const Scheme& s = fixtures::square();
  const Patch hay = stationary_patch(s, square_anchor(), 3);
  const Patch needle = extract_box(s, hay, box(-1, -1, 1, 1));
  REQUIRE(needle.tiles.size() > 1);
  const Box whole = box(-10, -10, 10, 10);
  const OccurrenceCount c = count_occurrences(s, hay, needle, DilationRange{}, whole);
  CHECK(c.L >= 1);
  Patch shifted_hay = hay, shifted_needle = needle;
  const geometry::Point v{Rational(7, 3), Rational(-2, 9)};
  for (auto* p : {&shifted_hay, &shifted_needle}) {
    for (PlacedTile& t : p->tiles) t.offset = {t.offset.x + v.x, t.offset.y + v.y};
  }
  const Box moved{whole.x0 + v.x, whole.y0 + v.y, whole.x1 + v.x, whole.y1 + v.y};
  const OccurrenceCount d = count_occurrences(s, shifted_hay, shifted_needle, DilationRange{}, moved);
  CHECK(d.L == c.L);
  CHECK(d.N == c.N);
  // Moving only the needle changes nothing either: the needle is canonicalized.
  CHECK(count_occurrences(s, hay, shifted_needle, DilationRange{}, whole).L == c.L);
  CHECK(count_occurrences(s, hay, needle, DilationRange{}, whole, 4).L == c.L);
}

TEST_CASE("occurrence errors") {
  const Scheme& s = fixtures::square();
  const Patch hay = generate(s, 0, T(5, 3));
  Patch empty;
  CHECK_THROWS_AS(count_occurrences(s, hay, empty, DilationRange{}, box(0, 0, 1, 1)), DomainError);
  CHECK_THROWS_AS(count_occurrences(s, hay, hay, DilationRange{}, box(0, 0, 0, 1)), DomainError);
}

TEST_CASE("coverage radius") {
  const std::vector<Rational> s{Rational(1, 2), Rational(1)};
  CHECK(coverage_radius(s, Rational(0), Rational(1)) == Rational(1, 2));
  CHECK(coverage_radius({Rational(1, 4), Rational(1, 2), Rational(3, 4), Rational(1)}, Rational(0), Rational(1)) ==
        Rational(1, 4));
  CHECK(coverage_radius({}, Rational(0), Rational(1)) == Rational(1));
}

}  // TEST_SUITE
