#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "multitile/asymptotics.hpp"
#include "multitile/digest.hpp"
#include "multitile/errors.hpp"
#include "multitile/flow.hpp"
#include "multitile/graph.hpp"
#include "multitile/patch_io.hpp"
#include "multitile/render.hpp"
#include "multitile/scheme.hpp"
#include "multitile/statistics.hpp"

namespace multitile::cli {

namespace {

using nlohmann::json;

struct Context {
  std::uint64_t budget = 10'000'000;
  unsigned workers = 1;
  int digits = 5;
  std::ostringstream out;
  std::map<std::string, std::string> outputs;  // name -> digest
  std::optional<std::uint64_t> scheme_hash;

  Scheme load(const std::string& path) {
    Scheme s = load_scheme(path);
    scheme_hash = multitile::scheme_hash(s);
    return s;
  }

  // A patch generated from the scheme loaded last.
  Patch load_matching(const std::string& path) const {
    Patch p = load_patch(path);
    if (scheme_hash && p.meta.scheme_hash != *scheme_hash) {
      throw DomainError(path + " was generated from a different scheme");
    }
    return p;
  }

  void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open " + path + " for writing");
    f << content;
    outputs[path] = hex64(fnv1a64(content));
  }
};

std::size_t resolve_type(const Scheme& scheme, const std::string& text) {
  for (std::size_t j = 0; j < scheme.size(); ++j) {
    if (scheme.prototiles[j].label == text || std::to_string(scheme.prototiles[j].id) == text) return j;
  }
  throw DomainError("unknown prototile \"" + text + "\"");
}

TimePoint exact_time(const std::string& text) {
  TimePoint t = TimePoint::parse(text);
  if (!t.is_exact()) throw DomainError("time \"" + text + "\" is not exact; use 0, ln(p/q) or k*ln(p/q)");
  return t;
}

std::string approx(const Real& v, int digits) { return v.fixed(digits); }

std::string row_text(const std::vector<Rational>& row) {
  std::string s = "[";
  for (std::size_t k = 0; k < row.size(); ++k) s += (k ? ", " : "") + row[k].str();
  return s + "]";
}

Rational parse_rational(const std::string& text) { return Rational::parse(text); }

geometry::Box parse_box(const std::vector<std::string>& v) {
  return {parse_rational(v.at(0)), parse_rational(v.at(1)), parse_rational(v.at(2)), parse_rational(v.at(3))};
}

geometry::Box patch_bounds(const Scheme& scheme, const Patch& patch) {
  geometry::Box b;
  bool first = true;
  for (const PlacedTile& t : patch.tiles) {
    for (const geometry::Point& p : placed_geometry(scheme, t.type, t.scale, t.offset)) {
      if (first) {
        b = {p.x, p.y, p.x, p.y};
        first = false;
      }
      b.x0 = min(b.x0, p.x);
      b.y0 = min(b.y0, p.y);
      b.x1 = max(b.x1, p.x);
      b.y1 = max(b.y1, p.y);
    }
  }
  if (scheme.dimension == 1) b.y1 = b.y0 + Rational(1);
  return b;
}

// --- anchors ---

struct AnchorArgs {
  std::string root = "1";
  std::string max_period;
  std::size_t index = 0;
  std::vector<int> path;
};

void add_anchor_options(CLI::App* cmd, AnchorArgs& a) {
  cmd->add_option("--root", a.root, "root prototile id or label");
  cmd->add_option("--max-period", a.max_period, "longest closed path searched (default: twice the longest edge)");
  cmd->add_option("--anchor", a.index, "index into the anchor list");
  cmd->add_option("--path", a.path, "explicit closed path of rule child indices")->delimiter(',');
}

Rational default_period_factor(const Scheme& scheme) {
  Rational smallest(1);
  for (const auto& rule : scheme.rules) {
    for (const RuleChild& c : rule) smallest = min(smallest, c.scale);
  }
  return (Rational(1) / smallest).pow(2);
}

std::vector<StationaryAnchor> list_anchors(const Scheme& scheme, const AnchorArgs& a) {
  const std::size_t root = resolve_type(scheme, a.root);
  const TimePoint horizon =
      a.max_period.empty() ? TimePoint::exact(default_period_factor(scheme)) : exact_time(a.max_period);
  return find_stationary_anchors(scheme, root, horizon);
}

StationaryAnchor choose_anchor(const Scheme& scheme, const AnchorArgs& a) {
  const std::size_t root = resolve_type(scheme, a.root);
  if (!a.path.empty()) {
    TilePath path;
    for (const int k : a.path) {
      if (k < 0) throw DomainError("path indices must be non-negative");
      path.push_back(static_cast<std::uint16_t>(k));
    }
    StationaryAnchor anchor;
    if (!anchor_for_path(scheme, root, path, anchor)) {
      throw DomainError("path is not a closed path with an interior fixed point");
    }
    return anchor;
  }
  const auto anchors = list_anchors(scheme, a);
  if (anchors.empty()) throw DomainError("no stationary anchor within the period horizon");
  if (a.index >= anchors.size()) {
    throw DomainError("anchor index " + std::to_string(a.index) + " out of range (" +
                      std::to_string(anchors.size()) + " anchors)");
  }
  return anchors[a.index];
}

std::string path_text(const TilePath& path) {
  std::string s;
  for (std::size_t k = 0; k < path.size(); ++k) s += (k ? "," : "") + std::to_string(path[k]);
  return s;
}

// --- commands ---

int cmd_validate(Context& ctx, const std::string& file) {
  const Scheme scheme = ctx.load(file);
  const ValidationReport report = validate(scheme);
  ctx.out << report.text(scheme);
  return report.ok() ? kOk : kFailure;
}

int cmd_graph(Context& ctx, const std::string& file, const std::string& dot_path) {
  const Scheme scheme = ctx.load(file);
  const SubstGraph g = build_graph(scheme);
  auto& out = ctx.out;
  out << "scheme: " << scheme.name << "\n";
  out << "vertices: " << g.vertex_count << " (";
  for (std::size_t v = 0; v < g.vertex_count; ++v) out << (v ? ", " : "") << scheme.prototiles[v].label;
  out << ")\n";
  out << "edges: " << g.edges.size() << "\n";
  for (const GraphEdge& e : g.edges) {
    out << "  " << scheme.prototiles[e.from].label << " -> " << scheme.prototiles[e.to].label << "  "
        << e.length.str() << "  (scale " << e.scale.str() << ", child " << e.rule_child_index << ")\n";
  }
  const bool irreducible = is_irreducible(g);
  out << "irreducible: " << (irreducible ? "yes" : "no") << "\n";
  if (irreducible) {
    const CommensurabilityVerdict v = classify_commensurability(g, ctx.budget);
    out << "simple cycles: " << v.cycle_count << "\n";
    out << v.summary() << "\n";
    const GraphMatrixEval m = eval_M(scheme, scheme.dimension);
    out << "M(" << scheme.dimension << "):\n";
    for (const auto& row : m.value) out << "  " << row_text(row) << "\n";
    if (is_normalized(scheme)) {
      const QMatrix q = compute_Q(scheme);
      const mpfr_prec_t bits = Real::bits_for_digits(ctx.digits + 10);
      out << "Q numerator:\n";
      for (const auto& row : q.numerator) out << "  " << row_text(row) << "\n";
      out << "Q denominator: Z = " << q.denominator.prime_form() << " ≈ " << approx(q.denominator.evaluate(bits), ctx.digits)
          << "\n";
      for (std::size_t h = 0; h < scheme.size(); ++h) {
        const FreqValue fv = q.q(h);
        out << "q[" << scheme.prototiles[h].label << "] = " << fv.symbolic() << " ≈ "
            << approx(fv.evaluate(bits), ctx.digits) << "\n";
      }
    } else {
      out << "Q: scheme is not normalized\n";
    }
  }
  if (!dot_path.empty()) ctx.write_file(dot_path, g.dot(scheme));
  return kOk;
}

struct PatchOutputs {
  std::string bin, csv, json;
};

void write_patch_outputs(Context& ctx, const Patch& patch, const PatchOutputs& o) {
  if (!o.bin.empty()) ctx.write_file(o.bin, encode_patch(patch));
  if (!o.csv.empty()) {
    std::ostringstream csv;
    write_patch_csv(csv, patch);
    ctx.write_file(o.csv, csv.str());
  }
  if (!o.json.empty()) ctx.write_file(o.json, export_json(patch));
}

void describe_patch(Context& ctx, const Scheme& scheme, const Patch& patch) {
  const Rational volume = patch_volume(scheme, patch);
  ctx.out << "tiles: " << patch.tiles.size() << "\n";
  ctx.out << "volume: " << volume.str() << "\n";
  std::vector<std::uint64_t> per_type(scheme.size(), 0);
  for (const PlacedTile& t : patch.tiles) per_type[t.type]++;
  for (std::size_t j = 0; j < scheme.size(); ++j) {
    ctx.out << "type " << scheme.prototiles[j].label << ": " << per_type[j] << "\n";
  }
  ctx.out << "digest: " << hex64(fnv1a64(encode_patch(patch))) << "\n";
}

int cmd_generate(Context& ctx, const std::string& file, const std::string& root, const std::string& time,
                 const PatchOutputs& o) {
  const Scheme scheme = ctx.load(file);
  GenerateOptions opts;
  opts.budget = ctx.budget;
  opts.workers = ctx.workers;
  const Patch patch = generate(scheme, resolve_type(scheme, root), exact_time(time), opts);
  ctx.out << "patch: " << scheme.name << " root " << scheme.prototiles[patch.meta.root].label << " t = "
          << exact_time(time).str() << "\n";
  describe_patch(ctx, scheme, patch);
  write_patch_outputs(ctx, patch, o);
  return kOk;
}

int cmd_stats(Context& ctx, const std::string& file, const std::string& type, const std::vector<std::string>& interval,
              bool as_json) {
  const Scheme scheme = ctx.load(file);
  const Densities dens(scheme);
  const std::size_t j = resolve_type(scheme, type);
  const ScaleInterval I = interval.empty() ? legal_interval(scheme, j)
                                           : ScaleInterval(parse_rational(interval.at(0)), parse_rational(interval.at(1)));
  const mpfr_prec_t bits = Real::bits_for_digits(ctx.digits + 10);
  const auto label = [&](std::size_t k) { return scheme.prototiles[k].label; };
  const FreqValue phi = dens.phi(j, I);
  const VolumeFraction nu = dens.nu(j, I);
  const Rational rel = dens.relative_fraction(j, I);
  const LogLinearValue& Z = dens.Q().denominator;
  if (as_json) {
    json doc;
    doc["schema"] = "multitile.stats/1";
    doc["scheme"] = scheme.name;
    doc["type"] = label(j);
    doc["interval"] = {I.a.str(), I.b.str()};
    doc["beta_min"] = beta_min(scheme, j).str();
    doc["Z"] = {{"symbolic", Z.prime_form()}, {"decimal", approx(Z.evaluate(bits), ctx.digits)}};
    json coeffs = json::object();
    json nu_coeffs = json::object();
    for (std::size_t h = 0; h < scheme.size(); ++h) {
      coeffs[label(h)] = dens.phi_coefficient(h, j, I).str();
      nu_coeffs[label(h)] = dens.nu_coefficient(h, j, I).prime_form();
    }
    doc["c"] = coeffs;
    doc["d"] = nu_coeffs;
    doc["phi"] = {{"numerator", phi.numerator.str()}, {"decimal", approx(phi.evaluate(bits), ctx.digits)}};
    doc["nu"] = {{"numerator", nu.numerator.prime_form()}, {"decimal", approx(nu.evaluate(bits), ctx.digits)}};
    json totals = json::object();
    for (std::size_t k = 0; k < scheme.size(); ++k) {
      const FreqValue t = dens.phi_total_type(k);
      totals[label(k)] = {{"phi_numerator", t.numerator.str()},
                          {"phi_decimal", approx(t.evaluate(bits), ctx.digits)},
                          {"nu_decimal", approx(dens.nu_total_type(k).evaluate(bits), ctx.digits)}};
    }
    doc["totals"] = totals;
    doc["relative_fraction"] = {{"exact", rel.str()}, {"decimal", approx(Real(rel, bits), ctx.digits)}};
    ctx.out << doc.dump(1) << "\n";
    return kOk;
  }
  auto& out = ctx.out;
  out << "scheme: " << scheme.name << " (" << dens.verdict().summary() << ")\n";
  out << "Z = " << Z.prime_form() << " ≈ " << approx(Z.evaluate(bits), ctx.digits) << "\n";
  out << "type " << label(j) << ", scales in " << I.str() << ", beta_min = " << beta_min(scheme, j).str() << "\n";
  for (std::size_t h = 0; h < scheme.size(); ++h) {
    out << "c[" << label(h) << "," << label(j) << "] = " << dens.phi_coefficient(h, j, I).str() << "\n";
  }
  out << "phi = " << phi.symbolic() << " ≈ " << approx(phi.evaluate(bits), ctx.digits) << "\n";
  for (std::size_t h = 0; h < scheme.size(); ++h) {
    out << "d[" << label(h) << "," << label(j) << "] = " << dens.nu_coefficient(h, j, I).prime_form() << "\n";
  }
  out << "nu = " << approx(nu.evaluate(bits), ctx.digits) << "\n";
  for (std::size_t k = 0; k < scheme.size(); ++k) {
    const FreqValue t = dens.phi_total_type(k);
    out << "phi_total[" << label(k) << "] = " << t.symbolic() << " ≈ " << approx(t.evaluate(bits), ctx.digits)
        << ", nu_total[" << label(k) << "] ≈ " << approx(dens.nu_total_type(k).evaluate(bits), ctx.digits) << "\n";
  }
  out << "relative fraction = " << rel.str() << " ≈ " << approx(Real(rel, bits), ctx.digits) << "\n";
  return kOk;
}

std::vector<std::vector<ScaleInterval>> parse_partitions(const Scheme& scheme, const std::vector<std::string>& flat) {
  if (flat.size() % 3 != 0) throw DomainError("--interval takes: type a b");
  std::vector<std::vector<ScaleInterval>> parts(scheme.size());
  for (std::size_t k = 0; k < flat.size(); k += 3) {
    parts[resolve_type(scheme, flat[k])].emplace_back(parse_rational(flat[k + 1]), parse_rational(flat[k + 2]));
  }
  return parts;
}

int cmd_census(Context& ctx, const std::string& file, const std::string& root, const std::string& time,
               const std::string& patch_file, const std::vector<std::string>& intervals, bool as_json) {
  const Scheme scheme = ctx.load(file);
  const auto parts = parse_partitions(scheme, intervals);
  TileCensus c = [&] {
    if (!patch_file.empty()) return census(scheme, ctx.load_matching(patch_file), parts);
    if (time.empty()) throw DomainError("census needs --time or --patch");
    return census(scheme, scale_spectrum(scheme, resolve_type(scheme, root), exact_time(time), ctx.budget), parts);
  }();
  if (as_json) {
    ctx.out << export_json(scheme, c);
    return kOk;
  }
  auto& out = ctx.out;
  out << "factor u = " << c.factor.str() << ", tiles = " << c.total << ", volume = " << c.volume.str() << "\n";
  for (std::size_t j = 0; j < scheme.size(); ++j) {
    out << "type " << scheme.prototiles[j].label << ": " << c.per_type[j] << "\n";
    for (const auto& [s, n] : c.by_scale[j]) out << "  scale " << s.str() << ": " << n << "\n";
  }
  for (const CensusCell& cell : c.cells) {
    out << "cell " << scheme.prototiles[cell.type].label << " " << cell.interval.str() << ": " << cell.count
        << " (rate " << cell.rate.to_double() << ")\n";
  }
  return kOk;
}

int cmd_complexity(Context& ctx, const std::string& file, const AnchorArgs& a, int kmax, bool as_json) {
  const Scheme scheme = ctx.load(file);
  const StationaryAnchor anchor = choose_anchor(scheme, a);
  const ComplexityProfile p = complexity(scheme, anchor, kmax, ctx.budget);
  if (as_json) {
    ctx.out << export_json(p);
    return kOk;
  }
  ctx.out << "k,c_k\n";
  for (std::size_t k = 0; k < p.c.size(); ++k) ctx.out << k << "," << p.c[k] << "\n";
  return kOk;
}

int cmd_discrepancy(Context& ctx, const std::string& file, const std::string& root, std::vector<std::string> times,
                    const std::string& period, int kmax, bool distinct) {
  const Scheme scheme = ctx.load(file);
  const Densities dens(scheme);
  std::vector<TimePoint> points;
  for (const auto& t : times) points.push_back(exact_time(t));
  if (!period.empty()) {
    const Rational f = exact_time(period).factor();
    for (int k = 1; k <= kmax; ++k) points.push_back(TimePoint::exact(f.pow(k)));
  }
  if (points.empty()) throw DomainError("discrepancy needs --time values or --period with --kmax");
  const auto rows = discrepancy_series(dens, resolve_type(scheme, root), points, 50, ctx.budget);
  ctx.out << "t_num,t_den,count,expected,discrepancy" << (distinct ? ",distinct,ceiling" : "") << "\n";
  for (const DiscrepancyRow& r : rows) {
    ctx.out << r.time.factor().numerator().get_str() << "," << r.time.factor().denominator().get_str() << ","
            << r.count << "," << r.expected.fixed(ctx.digits) << "," << r.discrepancy.fixed(ctx.digits);
    if (distinct) ctx.out << "," << r.distinct << "," << r.ceiling;
    ctx.out << "\n";
  }
  return kOk;
}

int cmd_occurrences(Context& ctx, const std::string& file, const std::string& haystack_file,
                    const std::string& needle_file, const std::vector<std::string>& extract,
                    const std::vector<std::string>& dilation, const std::vector<std::string>& region) {
  const Scheme scheme = ctx.load(file);
  const Patch haystack = ctx.load_matching(haystack_file);
  Patch needle;
  if (!extract.empty()) {
    needle = extract_box(scheme, needle_file.empty() ? haystack : ctx.load_matching(needle_file), parse_box(extract));
  } else if (!needle_file.empty()) {
    needle = ctx.load_matching(needle_file);
  } else {
    throw DomainError("occurrences needs --needle or --extract-box");
  }
  DilationRange range;
  if (!dilation.empty()) {
    range.lo = parse_rational(dilation.at(0));
    range.hi = parse_rational(dilation.at(1));
    if (range.hi < range.lo) throw DomainError("dilation range needs lo <= hi");
  }
  const geometry::Box box = region.empty() ? patch_bounds(scheme, haystack) : parse_box(region);
  const OccurrenceCount c = count_occurrences(scheme, haystack, needle, range, box, ctx.workers);
  ctx.out << "needle tiles: " << needle.tiles.size() << "\n";
  ctx.out << "L = " << c.L << "\n";
  ctx.out << "N = " << c.N << "\n";
  return kOk;
}

int cmd_stationary(Context& ctx, const std::string& file, const AnchorArgs& a, std::optional<int> k,
                   const PatchOutputs& o) {
  const Scheme scheme = ctx.load(file);
  if (!k && a.path.empty()) {
    const auto anchors = list_anchors(scheme, a);
    ctx.out << "anchors: " << anchors.size() << "\n";
    for (std::size_t n = 0; n < anchors.size(); ++n) {
      const StationaryAnchor& s = anchors[n];
      ctx.out << "  [" << n << "] period " << s.period.str() << ", path " << path_text(s.child_path)
              << ", control point (" << s.control_point.x.str() << ", " << s.control_point.y.str() << ")\n";
    }
    return kOk;
  }
  const StationaryAnchor anchor = choose_anchor(scheme, a);
  ctx.out << "anchor: period " << anchor.period.str() << ", path " << path_text(anchor.child_path)
          << ", control point (" << anchor.control_point.x.str() << ", " << anchor.control_point.y.str() << ")\n";
  if (!k) return kOk;
  GenerateOptions opts;
  opts.budget = ctx.budget;
  opts.workers = ctx.workers;
  const Patch patch = stationary_patch(scheme, anchor, *k, opts);
  ctx.out << "k = " << *k << "\n";
  describe_patch(ctx, scheme, patch);
  write_patch_outputs(ctx, patch, o);
  return kOk;
}

int cmd_render(Context& ctx, const std::vector<std::string>& patch_files, const std::string& scheme_file,
               const std::string& style_name, const std::string& out_path, std::optional<int> supertiles,
               const std::string& period) {
  const Scheme scheme = ctx.load(scheme_file);
  std::vector<Patch> patches;
  for (const auto& f : patch_files) {
    patches.push_back(ctx.load_matching(f));
  }
  RenderStyle style;
  if (style_name == "by-type") style.color = RenderStyle::Color::ByType;
  else if (style_name == "by-scale") style.color = RenderStyle::Color::ByScale;
  else if (style_name == "by-supertile") style.color = RenderStyle::Color::BySupertile;
  else throw DomainError("unknown style \"" + style_name + "\"");
  std::string svg;
  if (scheme.dimension == 1) {
    svg = render_1d(scheme, patches, style);
  } else {
    if (patches.size() != 1) throw DomainError("2-dimensional render takes exactly one patch");
    std::vector<Supertile> groups;
    const bool want_groups = supertiles.has_value() || style.color == RenderStyle::Color::BySupertile;
    if (want_groups) {
      if (!supertiles || period.empty()) throw DomainError("supertiles need --supertiles m and --period s");
      groups = supertile_decompose(scheme, patches[0], exact_time(period).factor().pow(*supertiles));
      style.supertile_outlines = true;
    }
    svg = render_svg(scheme, patches[0], style, want_groups ? &groups : nullptr);
  }
  if (out_path.empty() || out_path == "-") {
    ctx.out << svg;
  } else {
    ctx.write_file(out_path, svg);
    ctx.out << "wrote " << out_path << "\n";
  }
  return kOk;
}

int cmd_oracle(Context& ctx, const std::string& file, const std::string& root, const std::string& time) {
  const Scheme scheme = ctx.load(file);
  const SubstGraph g = build_graph(scheme);
  ctx.out << path_count_oracle(g, resolve_type(scheme, root), exact_time(time).log_value(), ctx.budget * 16) << "\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const auto started = std::chrono::steady_clock::now();
  Context ctx;
  if (const char* env = std::getenv("MULTITILE_BUDGET")) {
    try {
      ctx.budget = std::stoull(env);
    } catch (const std::exception&) {
      err << "error: MULTITILE_BUDGET must be a positive integer\n";
      return kUsage;
    }
  }

  CLI::App app{"Multiscale substitution tilings: generation, statistics and rendering", "multitile"};
  app.require_subcommand(1);
  app.fallthrough();
  std::optional<std::uint64_t> budget;
  std::optional<long> seed;
  std::string manifest_path;
  app.add_option("--budget", budget, "tile cap for generation (default 1e7, or MULTITILE_BUDGET)");
  app.add_option("--workers", ctx.workers, "worker threads; never changes outputs")->check(CLI::Range(1u, 1024u));
  app.add_option("--precision", ctx.digits, "decimal digits in printed values")->check(CLI::Range(1, 1000));
  app.add_option("--seed", seed, "reserved; every algorithm is deterministic");
  app.add_option("--manifest", manifest_path, "write the run manifest here instead of stderr");

  std::string scheme_file, root = "1", time, type, dot_path, patch_file, needle_file, period, style = "by-type",
                           out_path;
  std::vector<std::string> interval, intervals, times, extract, dilation, region, patch_files;
  PatchOutputs outputs;
  AnchorArgs anchor;
  int kmax = 10;
  bool as_json = false, distinct = false;
  std::optional<int> k, supertiles;

  auto* validate_cmd = app.add_subcommand("validate", "check the volume identity, containment and disjointness");
  validate_cmd->add_option("scheme", scheme_file)->required();

  auto* graph_cmd = app.add_subcommand("graph", "graph report: edges, cycles, commensurability, Q");
  graph_cmd->add_option("scheme", scheme_file)->required();
  graph_cmd->add_option("--dot", dot_path, "write a DOT rendering of the graph");

  auto add_patch_outputs = [&](CLI::App* cmd) {
    cmd->add_option("--out", outputs.bin, "binary patch file");
    cmd->add_option("--csv", outputs.csv, "CSV tile list");
    cmd->add_option("--json", outputs.json, "JSON patch document");
  };
  auto* generate_cmd = app.add_subcommand("generate", "generate F_t(T_i)");
  generate_cmd->add_option("scheme", scheme_file)->required();
  generate_cmd->add_option("--root", root, "root prototile id or label");
  generate_cmd->add_option("--time", time, "time as 0, ln(p/q) or k*ln(p/q)")->required();
  add_patch_outputs(generate_cmd);

  auto* stats_cmd = app.add_subcommand("stats", "asymptotic densities of one tile type");
  stats_cmd->add_option("scheme", scheme_file)->required();
  stats_cmd->add_option("--type", type, "prototile id or label")->required();
  stats_cmd->add_option("--interval", interval, "scale interval a b")->expected(2);
  stats_cmd->add_flag("--json", as_json, "emit JSON");

  auto* census_cmd = app.add_subcommand("census", "tile counts by type and exact scale");
  census_cmd->add_option("scheme", scheme_file)->required();
  census_cmd->add_option("--root", root, "root prototile id or label");
  census_cmd->add_option("--time", time, "time of F_t(T_i)");
  census_cmd->add_option("--patch", patch_file, "count a stored patch instead");
  census_cmd->add_option("--interval", intervals, "cell: type a b (repeatable)")->expected(3)->take_all();
  census_cmd->add_flag("--json", as_json, "emit JSON");

  auto* complexity_cmd = app.add_subcommand("complexity", "distinct (type, scale) pairs of stationary patches");
  complexity_cmd->add_option("scheme", scheme_file)->required();
  add_anchor_options(complexity_cmd, anchor);
  complexity_cmd->add_option("--kmax", kmax, "largest k");
  complexity_cmd->add_flag("--json", as_json, "emit JSON");

  auto* discrepancy_cmd = app.add_subcommand("discrepancy", "tile-count discrepancy against the asymptotic rate");
  discrepancy_cmd->add_option("scheme", scheme_file)->required();
  discrepancy_cmd->add_option("--root", root, "root prototile id or label");
  discrepancy_cmd->add_option("--time", times, "sample times (repeatable)")->take_all();
  discrepancy_cmd->add_option("--period", period, "sample t = k * period for k = 1..kmax");
  discrepancy_cmd->add_option("--kmax", kmax, "number of period multiples");
  discrepancy_cmd->add_flag("--distinct", distinct, "add distinct-tile counts and the polynomial ceiling");

  auto* occ_cmd = app.add_subcommand("occurrences", "count dilated translates of a needle patch");
  occ_cmd->add_option("scheme", scheme_file)->required();
  occ_cmd->add_option("haystack", patch_file, "binary patch file")->required();
  occ_cmd->add_option("--needle", needle_file, "needle patch file (or source for --extract-box)");
  occ_cmd->add_option("--extract-box", extract, "needle = tiles inside x0 y0 x1 y1")->expected(4);
  occ_cmd->add_option("--dilation", dilation, "dilation range lo hi (default 1 1)")->expected(2);
  occ_cmd->add_option("--region", region, "region x0 y0 x1 y1 (default: patch bounds)")->expected(4);

  auto* stationary_cmd = app.add_subcommand("stationary", "list anchors or build stationary_patch(k)");
  stationary_cmd->add_option("scheme", scheme_file)->required();
  add_anchor_options(stationary_cmd, anchor);
  stationary_cmd->add_option("--k", k, "build the k-th nested patch");
  add_patch_outputs(stationary_cmd);

  auto* render_cmd = app.add_subcommand("render", "SVG rendering of patch files");
  render_cmd->add_option("patches", patch_files, "binary patch files")->required();
  render_cmd->add_option("--scheme", scheme_file, "scheme the patches came from")->required();
  render_cmd->add_option("--style", style, "by-type | by-scale | by-supertile");
  render_cmd->add_option("--out", out_path, "SVG destination (default stdout)");
  render_cmd->add_option("--supertiles", supertiles, "overlay order-m supertile boundaries");
  render_cmd->add_option("--period", period, "stationary period s used for supertiles");

  auto* oracle_cmd = app.add_subcommand("oracle", "count metric paths of length t by graph traversal");
  oracle_cmd->add_option("scheme", scheme_file)->required();
  oracle_cmd->add_option("--root", root, "root prototile id or label");
  oracle_cmd->add_option("--time", time, "path length as ln(p/q)")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }
  if (budget) ctx.budget = *budget;

  int code = kOk;
  std::string command = app.get_subcommands().front()->get_name();
  try {
    if (command == "validate") code = cmd_validate(ctx, scheme_file);
    else if (command == "graph") code = cmd_graph(ctx, scheme_file, dot_path);
    else if (command == "generate") code = cmd_generate(ctx, scheme_file, root, time, outputs);
    else if (command == "stats") code = cmd_stats(ctx, scheme_file, type, interval, as_json);
    else if (command == "census") code = cmd_census(ctx, scheme_file, root, time, patch_file, intervals, as_json);
    else if (command == "complexity") code = cmd_complexity(ctx, scheme_file, anchor, kmax, as_json);
    else if (command == "discrepancy") code = cmd_discrepancy(ctx, scheme_file, root, times, period, kmax, distinct);
    else if (command == "occurrences") code = cmd_occurrences(ctx, scheme_file, patch_file, needle_file, extract, dilation, region);
    else if (command == "stationary") code = cmd_stationary(ctx, scheme_file, anchor, k, outputs);
    else if (command == "render") code = cmd_render(ctx, patch_files, scheme_file, style, out_path, supertiles, period);
    else if (command == "oracle") code = cmd_oracle(ctx, scheme_file, root, time);
  } catch (const BudgetExceeded& e) {
    err << "error: budget exceeded: " << e.what() << "\n";
    code = kBudget;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    code = kFailure;
  }

  const std::string text = ctx.out.str();
  out << text;
  out.flush();
  ctx.outputs["stdout"] = hex64(fnv1a64(text));

  json manifest;
  manifest["schema"] = "multitile.manifest/1";
  manifest["command"] = std::vector<std::string>(args.begin() + (args.empty() ? 0 : 1), args.end());
  manifest["scheme_hash"] = ctx.scheme_hash ? json(hex64(*ctx.scheme_hash)) : json(nullptr);
  manifest["budget"] = ctx.budget;
  manifest["workers"] = ctx.workers;
  manifest["precision"] = ctx.digits;
  manifest["seed"] = seed ? json(*seed) : json(nullptr);
  manifest["outputs"] = ctx.outputs;
  manifest["exit_code"] = code;
  manifest["wall_time_s"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  if (manifest_path.empty()) {
    err << manifest.dump() << "\n";
  } else {
    std::ofstream f(manifest_path);
    f << manifest.dump(1) << "\n";
    if (!f) {
      err << "error: cannot write manifest " << manifest_path << "\n";
      if (code == kOk) code = kFailure;
    }
  }
  return code;
}

}  // namespace multitile::cli
