#include "multitile/scheme.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "multitile/digest.hpp"
#include "multitile/errors.hpp"

namespace multitile {

using geometry::Point;
using geometry::Polygon;
using nlohmann::json;

Rational geometry_volume(int dimension, const Polygon& shape) {
  if (dimension == 1) return abs(shape.at(1).x - shape.at(0).x);
  return geometry::area(shape);
}

Polygon placed_geometry(const Scheme& scheme, std::size_t type, const Rational& scale, const Point& offset) {
  return geometry::place(scheme.prototiles.at(type).vertices, scale, offset);
}

namespace {

Rational rational_field(const json& value, const std::string& where) {
  if (value.is_string()) {
    try {
      return Rational::parse(value.get<std::string>());
    } catch (const ParseError& e) {
      throw ParseError(where + ": " + e.what());
    }
  }
  if (value.is_number_integer()) return Rational(value.get<long>());
  throw ParseError(where + ": expected a rational string \"p/q\"");
}

Point point_field(const json& value, int dimension, const std::string& where) {
  if (!value.is_array() || value.size() != static_cast<std::size_t>(dimension)) {
    throw ParseError(where + ": expected " + std::to_string(dimension) + " coordinate(s)");
  }
  Point p;
  p.x = rational_field(value[0], where);
  if (dimension == 2) p.y = rational_field(value[1], where);
  return p;
}

const json& member(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) throw ParseError(where + ": missing field \"" + key + "\"");
  return obj.at(key);
}

json rational_json(const Rational& r) { return r.str(); }

json point_json(const Point& p, int dimension) {
  json out = json::array();
  out.push_back(rational_json(p.x));
  if (dimension == 2) out.push_back(rational_json(p.y));
  return out;
}

}  // namespace

Scheme parse_scheme(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document.begin(), document.end());
  } catch (const json::parse_error& e) {
    throw ParseError("syntax error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  Scheme scheme;
  try {
    scheme.name = member(doc, "name", "scheme").get<std::string>();
    scheme.dimension = member(doc, "dimension", "scheme").get<int>();
  } catch (const json::type_error& e) {
    throw ParseError(std::string("scheme: ") + e.what());
  }
  if (scheme.dimension != 1 && scheme.dimension != 2) {
    throw SchemeError("unsupported dimension " + std::to_string(scheme.dimension));
  }
  const int d = scheme.dimension;

  const json& tiles = member(doc, "prototiles", "scheme");
  if (!tiles.is_array() || tiles.empty()) throw ParseError("scheme: \"prototiles\" must be a non-empty array");
  std::map<int, Prototile> by_id;
  std::set<std::string> labels;
  for (const json& t : tiles) {
    Prototile p;
    p.dimension = d;
    try {
      p.id = member(t, "id", "prototile").get<int>();
      p.label = member(t, "label", "prototile").get<std::string>();
    } catch (const json::type_error& e) {
      throw ParseError(std::string("prototile: ") + e.what());
    }
    const std::string where = "prototile " + std::to_string(p.id);
    const json& verts = member(t, "vertices", where);
    if (!verts.is_array()) throw ParseError(where + ": \"vertices\" must be an array");
    for (const json& v : verts) p.vertices.push_back(point_field(v, d, where));
    if (d == 1) {
      if (p.vertices.size() != 2) throw SchemeError(where + ": an interval needs exactly two endpoints");
      if (p.vertices[1].x < p.vertices[0].x) std::swap(p.vertices[0], p.vertices[1]);
    } else if (!geometry::is_simple(p.vertices)) {
      throw SchemeError(where + ": polygon is not simple");
    }
    p.volume = geometry_volume(d, p.vertices);
    if (!labels.insert(p.label).second) throw SchemeError("duplicate prototile label \"" + p.label + "\"");
    if (!by_id.emplace(p.id, p).second) throw SchemeError("duplicate prototile id " + std::to_string(p.id));
  }
  const int n = static_cast<int>(by_id.size());
  for (const auto& [id, p] : by_id) {
    if (id < 1 || id > n) throw SchemeError("prototile ids must be 1.." + std::to_string(n) + ", got " + std::to_string(id));
  }
  for (auto& [id, p] : by_id) scheme.prototiles.push_back(std::move(p));

  scheme.rules.assign(scheme.prototiles.size(), {});
  std::vector<bool> seen(scheme.prototiles.size(), false);
  const json& rules = member(doc, "rules", "scheme");
  if (!rules.is_array()) throw ParseError("scheme: \"rules\" must be an array");
  for (const json& r : rules) {
    int parent = 0;
    try {
      parent = member(r, "parent", "rule").get<int>();
    } catch (const json::type_error& e) {
      throw ParseError(std::string("rule: ") + e.what());
    }
    if (parent < 1 || parent > n) throw SchemeError("unknown prototile id " + std::to_string(parent) + " in rule parent");
    const auto pi = static_cast<std::size_t>(parent - 1);
    if (seen[pi]) throw SchemeError("duplicate rule for prototile " + std::to_string(parent));
    seen[pi] = true;
    const std::string where = "rule " + std::to_string(parent);
    const json& children = member(r, "children", where);
    if (!children.is_array() || children.empty()) throw SchemeError(where + ": needs at least one child");
    for (const json& c : children) {
      RuleChild child;
      int type = 0;
      try {
        type = member(c, "type", where).get<int>();
      } catch (const json::type_error& e) {
        throw ParseError(where + ": " + e.what());
      }
      if (type < 1 || type > n) throw SchemeError("unknown prototile id " + std::to_string(type) + " in " + where);
      child.child_type = static_cast<std::size_t>(type - 1);
      child.scale = rational_field(member(c, "scale", where), where);
      if (child.scale <= Rational(0) || child.scale >= Rational(1)) {
        throw SchemeError("scale outside (0,1): " + child.scale.str() + " in " + where);
      }
      child.offset = point_field(member(c, "offset", where), d, where);
      scheme.rules[pi].push_back(std::move(child));
    }
  }
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (!seen[i]) throw SchemeError("missing rule for prototile " + std::to_string(i + 1));
  }
  return scheme;
}

Scheme load_scheme(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open scheme file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scheme(ss.str());
}

std::string serialize_scheme(const Scheme& scheme) {
  json doc;
  doc["name"] = scheme.name;
  doc["dimension"] = scheme.dimension;
  json tiles = json::array();
  for (const Prototile& p : scheme.prototiles) {
    json t;
    t["id"] = p.id;
    t["label"] = p.label;
    json verts = json::array();
    for (const Point& v : p.vertices) verts.push_back(point_json(v, scheme.dimension));
    t["vertices"] = verts;
    tiles.push_back(t);
  }
  doc["prototiles"] = tiles;
  json rules = json::array();
  for (std::size_t i = 0; i < scheme.rules.size(); ++i) {
    json r;
    r["parent"] = scheme.prototiles[i].id;
    json children = json::array();
    for (const RuleChild& c : scheme.rules[i]) {
      json cj;
      cj["type"] = scheme.prototiles[c.child_type].id;
      cj["scale"] = rational_json(c.scale);
      cj["offset"] = point_json(c.offset, scheme.dimension);
      children.push_back(cj);
    }
    r["children"] = children;
    rules.push_back(r);
  }
  doc["rules"] = rules;
  return doc.dump(2) + "\n";
}

std::uint64_t scheme_hash(const Scheme& scheme) { return fnv1a64(serialize_scheme(scheme)); }

bool is_normalized(const Scheme& scheme) {
  return std::all_of(scheme.prototiles.begin(), scheme.prototiles.end(),
                     [](const Prototile& p) { return p.volume == Rational(1); });
}

Scheme normalize(const Scheme& scheme) {
  const auto d = static_cast<unsigned>(scheme.dimension);
  std::vector<Rational> factor;
  for (const Prototile& p : scheme.prototiles) {
    if (p.volume.sign() == 0) throw DomainError("zero-volume prototile " + p.label);
    Rational root;
    if (!p.volume.exact_root(d, root)) {
      throw DomainError("normalizing prototile " + p.label + " needs the irrational factor vol^(-1/" +
                        std::to_string(d) + ") with vol = " + p.volume.str());
    }
    factor.push_back(Rational(1) / root);
  }
  Scheme out = scheme;
  for (std::size_t i = 0; i < out.size(); ++i) {
    Prototile& p = out.prototiles[i];
    for (Point& v : p.vertices) {
      v.x *= factor[i];
      v.y *= factor[i];
    }
    p.volume = geometry_volume(out.dimension, p.vertices);
    for (RuleChild& c : out.rules[i]) {
      c.scale = c.scale * factor[i] / factor[c.child_type];
      c.offset.x *= factor[i];
      c.offset.y *= factor[i];
    }
  }
  return out;
}

namespace {

Rational overlap_1d(const Polygon& a, const Polygon& b) {
  const Rational lo = max(a[0].x, b[0].x);
  const Rational hi = min(a[1].x, b[1].x);
  return hi > lo ? hi - lo : Rational(0);
}

}  // namespace

ValidationReport validate(const Scheme& scheme) {
  ValidationReport report;
  report.normalized = is_normalized(scheme);
  const int d = scheme.dimension;
  for (std::size_t i = 0; i < scheme.size(); ++i) {
    RuleCheck check;
    check.prototile = i;
    const Prototile& parent = scheme.prototiles[i];
    std::vector<Polygon> placed;
    for (const RuleChild& c : scheme.rules[i]) {
      check.volume_sum += c.scale.pow(d) * scheme.prototiles[c.child_type].volume;
      placed.push_back(placed_geometry(scheme, c.child_type, c.scale, c.offset));
    }
    check.deficit = parent.volume - check.volume_sum;
    check.volume_identity = check.deficit.sign() == 0;
    if (!check.volume_identity) check.problems.push_back("volume identity fails with deficit " + check.deficit.str());

    check.contained = true;
    for (std::size_t k = 0; k < placed.size(); ++k) {
      const Rational own = geometry_volume(d, placed[k]);
      const Rational inside = d == 1 ? overlap_1d(placed[k], parent.vertices)
                                     : geometry::intersection_area(placed[k], parent.vertices);
      if (inside != own) {
        check.contained = false;
        check.problems.push_back("child " + std::to_string(k) + " is not contained in its parent");
      }
    }
    check.disjoint = true;
    for (std::size_t a = 0; a < placed.size(); ++a) {
      for (std::size_t b = a + 1; b < placed.size(); ++b) {
        const Rational shared = d == 1 ? overlap_1d(placed[a], placed[b])
                                       : geometry::intersection_area(placed[a], placed[b]);
        if (shared.sign() != 0) {
          check.disjoint = false;
          check.problems.push_back("children " + std::to_string(a) + " and " + std::to_string(b) + " overlap");
        }
      }
    }
    report.rules.push_back(std::move(check));
  }
  return report;
}

bool ValidationReport::ok() const {
  return std::all_of(rules.begin(), rules.end(),
                     [](const RuleCheck& r) { return r.volume_identity && r.disjoint && r.contained; });
}

std::string ValidationReport::text(const Scheme& scheme) const {
  std::ostringstream os;
  os << "scheme: " << scheme.name << " (dimension " << scheme.dimension << ", " << scheme.size()
     << " prototile" << (scheme.size() == 1 ? "" : "s") << ")\n";
  os << "normalized: " << (normalized ? "yes" : "no") << "\n";
  for (const RuleCheck& r : rules) {
    const Prototile& p = scheme.prototiles[r.prototile];
    os << "rule " << p.id << " (" << p.label << "): " << scheme.rules[r.prototile].size() << " children\n";
    os << "  volume identity: " << (r.volume_identity ? "exact pass" : "FAIL") << " (sum " << r.volume_sum.str()
       << ", parent volume " << p.volume.str() << ", deficit " << r.deficit.str() << ")\n";
    os << "  interiors disjoint: " << (r.disjoint ? "pass" : "FAIL") << "\n";
    os << "  children contained: " << (r.contained ? "pass" : "FAIL") << "\n";
    for (const auto& problem : r.problems) os << "  problem: " << problem << "\n";
  }
  os << "result: " << (ok() ? "valid" : "invalid") << "\n";
  return os.str();
}

}  // namespace multitile
