// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
// Criteria 6-12 each write a transcript; criterion 13 reruns them with eight
// workers and compares transcript digests.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "multitile/asymptotics.hpp"
#include "multitile/digest.hpp"
#include "multitile/flow.hpp"
#include "multitile/graph.hpp"
#include "multitile/patch_io.hpp"
#include "multitile/statistics.hpp"
#include "oracles.hpp"

using namespace multitile;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail.clear();
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
  void note(const std::string& what) {
    if (pass) detail += (detail.empty() ? "" : "; ") + what;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

const std::vector<std::string> kSchemes = {"square", "triangles", "kakutani-1-3", "fixed-half"};

LogLinearValue ln(long p, long q = 1) { return LogLinearValue::log_of(Rational(p, q)); }

bool independent(const LogLinearValue& a, const LogLinearValue& b) {
  if (a.is_zero() || b.is_zero()) return false;
  const auto& [prime, weight] = *b.terms().begin();
  const auto it = a.terms().find(prime);
  if (it == a.terms().end()) return true;
  return !(b * (it->second / weight) == a);
}

bool is_closed_cycle(const SubstGraph& g, const Cycle& c) {
  if (c.edges.empty()) return false;
  LogLinearValue sum;
  for (std::size_t k = 0; k < c.edges.size(); ++k) {
    const GraphEdge& e = g.edges[c.edges[k]];
    const GraphEdge& next = g.edges[c.edges[(k + 1) % c.edges.size()]];
    if (e.to != next.from) return false;
    sum += e.length;
  }
  return sum == c.length;
}

Rational rational_near(double x, long den) { return Rational(std::lround(x * static_cast<double>(den)), den); }

const StationaryAnchor& pick_anchor(const std::vector<StationaryAnchor>& anchors, const LogLinearValue& period,
                                    const geometry::Point* control) {
  for (const StationaryAnchor& a : anchors) {
    if (a.period == period && (control == nullptr || a.control_point == *control)) return a;
  }
  throw DomainError("no stationary anchor with period " + period.str());
}

StationaryAnchor square_anchor() {
  const Scheme& s = fixtures::square();
  const geometry::Point center{Rational(1, 2), Rational(1, 2)};
  return pick_anchor(find_stationary_anchors(s, 0, TimePoint::exact(25)), ln(5, 3), &center);
}

StationaryAnchor triangle_anchor() {
  const Scheme& s = fixtures::triangles();
  return pick_anchor(find_stationary_anchors(s, 0, TimePoint::exact(25)), ln(5), nullptr);
}

// ---------------------------------------------------------------------------

Outcome criterion1() {
  Outcome o;
  for (const std::string& name : kSchemes) {
    const Scheme& s = fixtures::scheme(name);
    const ValidationReport r = validate(s);
    for (std::size_t i = 0; i < s.size(); ++i) {
      Rational sum;
      for (const RuleChild& c : s.rules[i]) sum += c.scale.pow(s.dimension) * s.prototiles[c.child_type].volume;
      o.require(sum == s.prototiles[i].volume, name + " rule " + std::to_string(i + 1) + " sums to " + sum.str());
      o.require(r.rules[i].volume_identity, name + " validator rejects rule " + std::to_string(i + 1));
    }
  }
  o.note("4 schemes exact");
  return o;
}

Outcome criterion2() {
  Outcome o;
  const SubstGraph sq = build_graph(fixtures::square());
  std::map<LogLinearValue, int> loops;
  for (const GraphEdge& e : sq.edges) {
    o.require(e.from == 0 && e.to == 0, "square edge is not a loop");
    ++loops[e.length];
  }
  o.require(sq.vertex_count == 1, "square has " + std::to_string(sq.vertex_count) + " vertices");
  o.require(loops.size() == 2 && loops[ln(5, 3)] == 1 && loops[ln(5)] == 16, "square loop multiset wrong");

  const SubstGraph kk = build_graph(fixtures::kakutani());
  std::vector<LogLinearValue> lengths;
  for (const GraphEdge& e : kk.edges) lengths.push_back(e.length);
  std::sort(lengths.begin(), lengths.end());
  o.require(kk.vertex_count == 1 && lengths == std::vector<LogLinearValue>{ln(3, 2), ln(3)},
            "Kakutani loops wrong");
  o.note("square 1 x ln(5/3) + 16 x ln5; Kakutani ln(3/2), ln3");
  return o;
}

Outcome criterion3() {
  Outcome o;
  const std::map<std::string, std::pair<LogLinearValue, LogLinearValue>> expected = {
      {"square", {ln(5), ln(5, 3)}},
      {"triangles", {ln(5, 2), ln(2)}},
      {"kakutani-1-3", {ln(3), ln(3, 2)}},
  };
  for (const auto& [name, pair] : expected) {
    const SubstGraph g = build_graph(fixtures::scheme(name));
    const CommensurabilityVerdict v = classify_commensurability(g);
    o.require(v.kind == CommensurabilityVerdict::Kind::Incommensurable, name + ": " + v.summary());
    if (v.witnesses.empty()) {
      o.require(false, name + ": no witness");
      continue;
    }
    for (const auto& [a, b] : v.witnesses) {
      o.require(is_closed_cycle(g, a) && is_closed_cycle(g, b), name + ": witness is not a closed path");
      o.require(independent(a.length, b.length), name + ": witness lengths are dependent");
    }
    o.require(v.witnesses.front().first.length == pair.first && v.witnesses.front().second.length == pair.second,
              name + ": witness " + v.summary());
  }
  const SubstGraph fh = build_graph(fixtures::fixed_half());
  const CommensurabilityVerdict v = classify_commensurability(fh);
  o.require(v.kind == CommensurabilityVerdict::Kind::Commensurable && v.generator == ln(2),
            "fixed-half: " + v.summary());
  for (const Cycle& c : simple_cycles(fh)) {
    const auto ratio = c.length.terms().at(BigInt(2)) / v.generator.terms().at(BigInt(2));
    o.require(c.length == v.generator * ratio && ratio.is_integer() && ratio.sign() > 0,
              "fixed-half cycle " + c.length.str() + " is not a multiple of the generator");
  }
  o.note("3 incommensurable with witnesses; fixed-half generator ln2");
  return o;
}

Outcome criterion4() {
  Outcome o;
  const Scheme& s = fixtures::triangles();
  const QMatrix Q = compute_Q(s);
  const std::vector<std::vector<Rational>> want = {{Rational(1, 4), Rational(8, 25)}, {Rational(1, 4), Rational(8, 25)}};
  o.require(Q.numerator == want, "Q numerator differs");
  const LogLinearValue Z = ln(2) * Rational(4, 25) + ln(5) * Rational(1, 4);
  o.require(Q.denominator == Z, "Q denominator is " + Q.denominator.str());
  const std::vector<Real> ref = oracle::perron_q(s, 256);
  for (std::size_t h = 0; h < 2; ++h) {
    const Real exact = Q.q(h).evaluate(256);
    const double gap = (exact - ref[h]).abs().to_double();
    o.require(gap <= 1e-6, "q" + std::to_string(h + 1) + " " + exact.fixed(6) + " vs oracle " + ref[h].fixed(6));
  }
  o.note("q = " + Q.q(0).decimal(6) + ", " + Q.q(1).decimal(6));
  return o;
}

Outcome criterion5() {
  Outcome o;
  const Scheme& s = fixtures::triangles();
  const Densities dens(s);
  const ScaleInterval I(Rational(3, 5), Rational(4, 5));
  const Rational c11 = dens.phi_coefficient(0, 0, I);
  const Rational c21 = dens.phi_coefficient(1, 0, I);
  o.require(c11 == Rational(119, 288), "c11 = " + c11.str());
  o.require(c21 == Rational(175, 1152), "c21 = " + c21.str());
  o.require(std::fabs(oracle::quadrature_coefficient(s, 0, 0, 0.6, 0.8) - c11.to_double()) <= 1e-8,
            "c11 quadrature disagrees");
  o.require(std::fabs(oracle::quadrature_coefficient(s, 1, 0, 0.6, 0.8) - c21.to_double()) <= 1e-8,
            "c21 quadrature disagrees");
  const double phi = dens.phi(0, I).to_double();
  o.require(std::fabs(phi - 0.29597) <= 1e-5, "phi = " + fmt(phi));
  const double tu = dens.phi_total_type(0).to_double();
  const double td = dens.phi_total_type(1).to_double();
  o.require(std::fabs(tu - 2.0165) <= 5e-4, "phi total U = " + fmt(tu));
  o.require(std::fabs(td - 1.8411) <= 5e-4, "phi total D = " + fmt(td));
  const Rational rel = dens.relative_fraction(0, I);
  o.require(rel == Rational(4375, 57024), "relative fraction = " + rel.str());
  o.require(std::fabs(rel.to_double() - 0.0767) <= 5e-5, "relative fraction decimal " + fmt(rel.to_double()));
  o.note("phi = " + fmt(phi, 5) + ", totals " + fmt(tu, 4) + ", " + fmt(td, 4) + ", fraction " + rel.str());
  return o;
}

// ---------------------------------------------------------------------------
// Criteria 6-12 take a worker count and append what they computed to a
// transcript.

constexpr std::uint64_t kBijectionCap = 100'000;

std::vector<std::pair<std::size_t, Rational>> bijection_times(const Scheme& s) {
  // Grow u by 5/4 while every root stays under the cap.
  Rational u_max(2);
  while (true) {
    const Rational next = u_max * Rational(5, 4);
    bool ok = true;
    for (std::size_t r = 0; r < s.size() && ok; ++r) {
      ok = scale_spectrum(s, r, TimePoint::exact(next)).total() <= kBijectionCap;
    }
    if (!ok) break;
    u_max = next;
  }
  // Ten event times (a tile of scale exactly 1 appears) and ten generic ones.
  const SubstGraph g = build_graph(s);
  std::vector<std::pair<std::size_t, Rational>> out;
  for (int k = 0; k < 10; ++k) {
    const std::size_t root = static_cast<std::size_t>(k) % s.size();
    std::vector<Rational> events;
    for (std::size_t j = 0; j < s.size(); ++j) {
      for (const PathTime& p : enumerate_path_times(g, root, j, LogLinearValue::log_of(u_max))) {
        events.push_back(Rational(1) / p.product);
      }
    }
    std::sort(events.begin(), events.end());
    events.erase(std::unique(events.begin(), events.end()), events.end());
    out.push_back({root, events[events.size() * static_cast<std::size_t>(k + 1) / 11]});
  }
  for (int k = 1; k <= 10; ++k) {
    const std::size_t root = static_cast<std::size_t>(k) % s.size();
    const Rational u = Rational(1) + (u_max - Rational(1)) * Rational(k, 10) - Rational(1, 97);
    out.push_back({root, u});
  }
  return out;
}

struct BijectionRun {
  Outcome bijection;
  Outcome volume;
};

BijectionRun criteria6and7(unsigned workers, std::string& t6, std::string& t7) {
  BijectionRun run;
  std::size_t patches = 0;
  std::uint64_t largest = 0;
  for (const std::string& name : kSchemes) {
    const Scheme& s = fixtures::scheme(name);
    for (const auto& [root, u] : bijection_times(s)) {
      const TimePoint t = TimePoint::exact(u);
      GenerateOptions options;
      options.workers = workers;
      const Patch p = generate(s, root, t, options);
      const std::uint64_t paths = path_count_oracle(build_graph(s), root, t.log_value());
      const std::string tag = name + " root " + std::to_string(root + 1) + " u=" + u.str();
      run.bijection.require(p.tiles.size() == paths, tag + ": " + std::to_string(p.tiles.size()) + " tiles vs " +
                                                         std::to_string(paths) + " paths");
      run.bijection.require(p.tiles.size() <= kBijectionCap, tag + ": patch exceeds 1e5 tiles");
      const Rational volume = patch_volume(s, p);
      const Rational want = u.pow(s.dimension) * s.prototiles[root].volume;
      run.volume.require(volume == want, tag + ": volume " + volume.str() + " vs " + want.str());
      const std::string digest = hex64(fnv1a64(encode_patch(p)));
      t6 += tag + " tiles=" + std::to_string(p.tiles.size()) + " paths=" + std::to_string(paths) + " " + digest + "\n";
      t7 += tag + " volume=" + volume.str() + "\n";
      ++patches;
      largest = std::max<std::uint64_t>(largest, p.tiles.size());
    }
  }
  run.bijection.note(std::to_string(patches) + " patches, largest " + std::to_string(largest) + " tiles");
  run.volume.note(std::to_string(patches) + " patches exact");
  return run;
}

Outcome criterion8(unsigned workers, std::string& transcript) {
  Outcome o;
  const struct {
    const Scheme* scheme;
    StationaryAnchor anchor;
    int k_max;
  } cases[] = {{&fixtures::square(), square_anchor(), 10}, {&fixtures::triangles(), triangle_anchor(), 4}};
  for (const auto& c : cases) {
    GenerateOptions options;
    options.workers = workers;
    Patch prev = stationary_patch(*c.scheme, c.anchor, 0, options);
    for (int k = 1; k <= c.k_max; ++k) {
      Patch cur = stationary_patch(*c.scheme, c.anchor, k, options);
      const bool nested = is_subpatch(prev, cur);
      o.require(nested, c.scheme->name + ": patch " + std::to_string(k - 1) + " not inside patch " + std::to_string(k));
      transcript += c.scheme->name + " k=" + std::to_string(k) + " tiles=" + std::to_string(cur.tiles.size()) + " " +
                    hex64(fnv1a64(encode_patch(cur))) + (nested ? " nested\n" : " NOT nested\n");
      prev = std::move(cur);
    }
    o.note(c.scheme->name + " k<=" + std::to_string(c.k_max) + " (" + std::to_string(prev.tiles.size()) + " tiles)");
  }
  return o;
}

Outcome criterion9(unsigned workers, std::string& transcript) {
  Outcome o;
  const Scheme& sq = fixtures::square();
  const StationaryAnchor anchor = square_anchor();
  const ComplexityProfile profile = complexity(sq, anchor, 12);
  for (int k = 0; k <= 12; ++k) {
    o.require(profile.c[k] == static_cast<std::uint64_t>(k + 1),
              "square c(" + std::to_string(k) + ") = " + std::to_string(profile.c[k]));
    transcript += "square c(" + std::to_string(k) + ")=" + std::to_string(profile.c[k]) + "\n";
  }
  // The spectrum shortcut against distinct pairs of generated patches.
  GenerateOptions options;
  options.workers = workers;
  for (int k = 0; k <= 6; ++k) {
    const ScaleSpectrum direct = spectrum_of(stationary_patch(sq, anchor, k, options));
    o.require(direct.distinct() == profile.c[k], "square k=" + std::to_string(k) + ": generated patch has " +
                                                     std::to_string(direct.distinct()) + " pairs");
    transcript += "square generated k=" + std::to_string(k) + " distinct=" + std::to_string(direct.distinct()) + "\n";
  }

  const Scheme& fh = fixtures::fixed_half();
  const auto anchors = find_stationary_anchors(fh, 0, TimePoint::exact(16));
  o.require(!anchors.empty(), "fixed-half has no stationary anchor");
  if (!anchors.empty()) {
    const ComplexityProfile control = complexity(fh, anchors.front(), 12);
    std::string seq;
    for (int k = 0; k <= 12; ++k) seq += (k ? "," : "") + std::to_string(control.c[k]);
    transcript += "fixed-half c=" + seq + "\n";
    const bool settled = std::all_of(control.c.begin() + 6, control.c.end(),
                                     [&](std::uint64_t v) { return v == control.c.back(); });
    o.require(settled, "fixed-half c(k) not constant from k=6: " + seq);
    o.note("square c(k)=k+1 for k<=12; fixed-half c=" + seq);
  }
  return o;
}

struct RateSample {
  double phi = 0;
  double total = 0;
};

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2;
}

Outcome criterion10(std::string& transcript) {
  Outcome o;
  const Scheme& s = fixtures::triangles();
  const Densities dens(s);
  const ScaleInterval I(Rational(3, 5), Rational(4, 5));
  const double phi = 0.29597;
  const double total = dens.phi_total().to_double();
  std::map<int, std::pair<double, double>> errors;
  for (const int T : {4, 5, 6}) {
    std::vector<double> phis, totals;
    for (int k = 0; k < 8; ++k) {
      const Rational u = rational_near(std::exp(T - 1 + k / 7.0), 1000);
      const ScaleSpectrum spec = scale_spectrum(s, 0, TimePoint::exact(u));
      const TileCensus c = census(s, spec, {{I}});
      const double vol = u.pow(s.dimension).to_double();
      phis.push_back(c.cells[0].rate.to_double());
      totals.push_back(static_cast<double>(c.total) / vol);
      transcript += "T=" + std::to_string(T) + " u=" + u.str() + " tiles=" + std::to_string(c.total) +
                    " in_I=" + std::to_string(c.cells[0].count) + "\n";
    }
    const double ephi = std::fabs(median(phis) / phi - 1);
    const double etot = std::fabs(median(totals) / total - 1);
    errors[T] = {ephi, etot};
  }
  o.require(errors[6].first <= 0.15, "phi error at T=6 is " + fmt(errors[6].first, 4));
  o.require(errors[6].first <= errors[4].first, "phi error grew from T=4 to T=6");
  o.require(errors[6].second <= 0.15, "total-rate error at T=6 is " + fmt(errors[6].second, 4));
  o.require(errors[6].second <= errors[4].second, "total-rate error grew from T=4 to T=6");
  std::string detail = "phi err";
  for (const auto& [T, e] : errors) detail += " " + fmt(e.first, 4);
  detail += ", total err";
  for (const auto& [T, e] : errors) detail += " " + fmt(e.second, 4);
  detail += " (T=4,5,6)";
  if (o.pass) o.note(detail);
  else o.detail += "; " + detail;
  return o;
}

Outcome criterion11(unsigned workers, std::string& transcript) {
  Outcome o;
  const Scheme& s = fixtures::triangles();
  GenerateOptions options;
  options.workers = workers;
  const Patch p = stationary_patch(s, triangle_anchor(), 4, options);
  std::vector<Rational> scales;
  for (const ScaleClass& c : spectrum_of(p).classes) {
    if (c.type == 0) scales.push_back(c.scale);
  }
  std::sort(scales.begin(), scales.end());
  // Independent scale set: memoized recursion over (type, scale).
  std::set<Rational> reached;
  std::set<std::pair<std::size_t, Rational>> seen;
  std::function<void(std::size_t, const Rational&)> walk = [&](std::size_t type, const Rational& scale) {
    if (!seen.insert({type, scale}).second) return;
    if (scale <= Rational(1)) {
      if (type == 0) reached.insert(scale);
      return;
    }
    for (const RuleChild& c : s.rules[type]) walk(c.child_type, scale * c.scale);
  };
  walk(0, Rational(5).pow(4));
  o.require(std::vector<Rational>(reached.begin(), reached.end()) == scales, "U-scales differ from the oracle set");
  const Rational radius = coverage_radius(scales, Rational(1, 5), Rational(1));
  if (radius > Rational(1, 20)) {
    std::string first = "none up to k=16";
    for (int k = 5; k <= 16; ++k) {
      std::vector<Rational> deeper;
      for (const ScaleClass& c : scale_spectrum(s, 0, TimePoint::exact(Rational(5).pow(k))).classes) {
        if (c.type == 0) deeper.push_back(c.scale);
      }
      if (coverage_radius(deeper, Rational(1, 5), Rational(1)) <= Rational(1, 20)) {
        first = "k=" + std::to_string(k);
        break;
      }
    }
    o.require(false, std::to_string(scales.size()) + " U-scales, coverage radius " + radius.str() + " = " +
                         fmt(radius.to_double(), 4) + "; 0.05-dense first at " + first);
  }
  transcript += "U scales=" + std::to_string(scales.size()) + " radius=" + radius.str() + "\n";
  o.note(std::to_string(scales.size()) + " U-scales, radius " + fmt(radius.to_double(), 4));
  return o;
}

Outcome criterion12(unsigned workers, std::string& transcript) {
  Outcome o;
  const Scheme& s = fixtures::square();
  GenerateOptions options;
  options.workers = workers;
  const Patch p = stationary_patch(s, square_anchor(), 8, options);
  Rational x0 = p.tiles[0].offset.x, x1 = x0, y0 = p.tiles[0].offset.y, y1 = y0;
  for (const PlacedTile& t : p.tiles) {
    x0 = min(x0, t.offset.x);
    y0 = min(y0, t.offset.y);
    x1 = max(x1, t.offset.x + t.scale);
    y1 = max(y1, t.offset.y + t.scale);
  }
  Patch needle;
  needle.meta = p.meta;
  needle.tiles.push_back({0, Rational(1), {Rational(0), Rational(0)}, {}});
  const ScaleInterval intervals[] = {ScaleInterval(Rational(3, 5), Rational(4, 5)),
                                     ScaleInterval(Rational(1, 5), Rational(1), false, true),
                                     ScaleInterval(Rational(9, 25), Rational(3, 5), true, false)};
  std::mt19937 rng(20240607u);
  auto coord = [&](const Rational& lo, const Rational& hi) {
    return lo + (hi - lo) * Rational(static_cast<long>(rng() % 1001), 1000);
  };
  std::uint64_t checked = 0;
  for (int b = 0; b < 10; ++b) {
    Rational ax = coord(x0, x1), bx = coord(x0, x1), ay = coord(y0, y1), by = coord(y0, y1);
    if (bx < ax) std::swap(ax, bx);
    if (by < ay) std::swap(ay, by);
    if (ax == bx) bx += Rational(1);
    if (ay == by) by += Rational(1);
    const geometry::Box box{ax, ay, bx, by};
    const Patch inside = extract_box(s, p, box);
    std::vector<ScaleInterval> cells(std::begin(intervals), std::end(intervals));
    const TileCensus c = census(s, inside, {cells});
    for (std::size_t k = 0; k < cells.size(); ++k) {
      const ScaleInterval& I = cells[k];
      const DilationRange range{I.a, I.b, I.left_closed, I.right_closed};
      const OccurrenceCount occ = count_occurrences(s, p, needle, range, box, workers);
      // Independent count: axis-aligned square tiles inside the box.
      std::uint64_t brute = 0;
      for (const PlacedTile& t : p.tiles) {
        if (I.contains(t.scale) && ax <= t.offset.x && t.offset.x + t.scale <= bx && ay <= t.offset.y &&
            t.offset.y + t.scale <= by) {
          ++brute;
        }
      }
      const std::string tag = "box " + std::to_string(b) + " " + I.str();
      o.require(occ.L == c.cells[k].count, tag + ": L=" + std::to_string(occ.L) + " census=" +
                                               std::to_string(c.cells[k].count));
      o.require(occ.L == brute, tag + ": L=" + std::to_string(occ.L) + " direct=" + std::to_string(brute));
      transcript += tag + " L=" + std::to_string(occ.L) + " N=" + std::to_string(occ.N) + "\n";
      checked += occ.L;
    }
  }
  o.note("10 boxes x 3 intervals, " + std::to_string(checked) + " occurrences");
  return o;
}

struct Criterion {
  int id;
  double limit_s;
  Outcome outcome;
  double elapsed = 0;
};

void report(const Criterion& c, bool& all) {
  Outcome o = c.outcome;
  if (c.limit_s > 0 && c.elapsed > c.limit_s) {
    o.require(false, "took " + fmt(c.elapsed, 1) + " s, limit " + fmt(c.limit_s, 0) + " s");
  }
  all = all && o.pass;
  std::printf("criterion %2d: %s  %s [%.2f s]\n", c.id, o.pass ? "PASS" : "FAIL", o.detail.c_str(), c.elapsed);
  std::fflush(stdout);
}

Outcome guarded(const std::function<Outcome()>& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    Outcome o;
    o.require(false, std::string("exception: ") + e.what());
    return o;
  }
}

using Transcripts = std::map<int, std::string>;

// Runs 6-12 with the given worker count; fills outcomes when asked.
void heavy_criteria(unsigned workers, Transcripts& t, std::vector<Criterion>* out) {
  auto timed = [&](int id, double limit, const std::function<Outcome()>& body) {
    const auto start = Clock::now();
    Criterion c{id, limit, guarded(body)};
    c.elapsed = seconds_since(start);
    if (out) out->push_back(c);
  };
  {
    const auto start = Clock::now();
    BijectionRun run;
    try {
      run = criteria6and7(workers, t[6], t[7]);
    } catch (const std::exception& e) {
      run.bijection.require(false, std::string("exception: ") + e.what());
      run.volume = run.bijection;
    }
    const double elapsed = seconds_since(start);
    if (out) {
      out->push_back({6, 60, run.bijection, elapsed});
      out->push_back({7, 60, run.volume, elapsed});
    }
  }
  timed(8, 120, [&] { return criterion8(workers, t[8]); });
  timed(9, 120, [&] { return criterion9(workers, t[9]); });
  timed(10, 600, [&] { return criterion10(t[10]); });
  timed(11, 120, [&] { return criterion11(workers, t[11]); });
  timed(12, 120, [&] { return criterion12(workers, t[12]); });
}

}  // namespace

int main() {
  bool all = true;
  const struct {
    int id;
    double limit;
    Outcome (*fn)();
  } light[] = {{1, 1, criterion1}, {2, 0, criterion2}, {3, 1, criterion3}, {4, 0, criterion4}, {5, 1, criterion5}};
  for (const auto& l : light) {
    const auto start = Clock::now();
    Criterion c{l.id, l.limit, guarded(l.fn)};
    c.elapsed = seconds_since(start);
    report(c, all);
  }

  Transcripts serial, parallel;
  std::vector<Criterion> heavy;
  heavy_criteria(1, serial, &heavy);
  for (const Criterion& c : heavy) report(c, all);

  const auto start = Clock::now();
  heavy_criteria(8, parallel, nullptr);
  Outcome det;
  for (const auto& [id, text] : serial) {
    det.require(text == parallel[id], "criterion " + std::to_string(id) + " output differs");
    det.require(!text.empty(), "criterion " + std::to_string(id) + " wrote nothing");
  }
  det.note("criteria 6-12 identical at 1 and 8 workers");
  report({13, 0, det, seconds_since(start)}, all);

  std::printf("%s\n", all ? "all criteria passed" : "some criteria FAILED");
  return all ? 0 : 1;
}
