#include "multitile/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "json.hpp"
#include "multitile/digest.hpp"
#include "multitile/errors.hpp"

namespace multitile {

using geometry::Point;
using geometry::Polygon;
using nlohmann::json;

namespace {

std::string num12(double v) {
  if (v == 0) v = 0;  // no "-0"
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string hex_color(double r, double g, double b) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(std::lround(r * 255)),
                static_cast<int>(std::lround(g * 255)), static_cast<int>(std::lround(b * 255)));
  return buf;
}

std::string hsl(double hue, double sat, double light) {
  hue = std::fmod(hue, 360.0);
  const double c = (1 - std::fabs(2 * light - 1)) * sat;
  const double x = c * (1 - std::fabs(std::fmod(hue / 60.0, 2.0) - 1));
  const double m = light - c / 2;
  double r = 0, g = 0, b = 0;
  if (hue < 60) { r = c; g = x; }
  else if (hue < 120) { r = x; g = c; }
  else if (hue < 180) { g = c; b = x; }
  else if (hue < 240) { g = x; b = c; }
  else if (hue < 300) { r = x; b = c; }
  else { r = c; b = x; }
  return hex_color(r + m, g + m, b + m);
}

const char* const kTypePalette[] = {"#e8b04a", "#4a7fb0", "#b0504a", "#5aa05a", "#8a5ab0", "#40a0a0", "#c07030", "#707070"};

std::string type_color(std::size_t type) {
  if (type < std::size(kTypePalette)) return kTypePalette[type];
  return hsl(static_cast<double>(type) * 137.508, 0.55, 0.55);
}

struct Frame {
  double x0, y0, x1, y1, scale, height;
  double px(const Rational& x) const { return (x.to_double() - x0) * scale; }
  double py(const Rational& y) const { return (y1 - y.to_double()) * scale; }
};

std::string points_attr(const Polygon& poly, const Frame& f) {
  std::string out;
  for (const Point& p : poly) {
    if (!out.empty()) out.push_back(' ');
    out += num12(f.px(p.x)) + "," + num12(f.py(p.y));
  }
  return out;
}

}  // namespace

std::string render_svg(const Scheme& scheme, const Patch& patch, const RenderStyle& style,
                       const std::vector<Supertile>* supertiles) {
  if (patch.meta.dimension != 2 || scheme.dimension != 2) throw DomainError("render_svg needs a 2-dimensional patch");
  if (patch.tiles.empty()) throw DomainError("nothing to render");
  if (style.color == RenderStyle::Color::BySupertile && supertiles == nullptr) {
    throw DomainError("supertile coloring needs a supertile decomposition");
  }
  std::vector<Polygon> shapes;
  shapes.reserve(patch.tiles.size());
  for (const PlacedTile& t : patch.tiles) shapes.push_back(placed_geometry(scheme, t.type, t.scale, t.offset));

  double x0, y0, x1, y1;
  if (style.has_viewport) {
    x0 = style.viewport.x0.to_double();
    y0 = style.viewport.y0.to_double();
    x1 = style.viewport.x1.to_double();
    y1 = style.viewport.y1.to_double();
  } else {
    x0 = y0 = INFINITY;
    x1 = y1 = -INFINITY;
    for (const Polygon& poly : shapes) {
      for (const Point& p : poly) {
        const double x = p.x.to_double(), y = p.y.to_double();
        x0 = std::min(x0, x);
        x1 = std::max(x1, x);
        y0 = std::min(y0, y);
        y1 = std::max(y1, y);
      }
    }
  }
  if (!(x1 > x0) || !(y1 > y0)) throw DomainError("degenerate viewport");
  const double margin = 4;
  Frame f{x0, y0, x1, y1, (style.width_px - 2 * margin) / (x1 - x0), 0};
  f.height = (y1 - y0) * f.scale + 2 * margin;

  std::map<Rational, std::size_t, std::greater<>> scale_rank;
  if (style.color == RenderStyle::Color::ByScale) {
    for (const PlacedTile& t : patch.tiles) scale_rank.emplace(t.scale, 0);
    std::size_t rank = 0;
    for (auto& [s, r] : scale_rank) r = rank++;
  }
  std::vector<std::size_t> group_of(patch.tiles.size(), 0);
  if (supertiles != nullptr) {
    for (std::size_t g = 0; g < supertiles->size(); ++g) {
      for (const std::size_t m : (*supertiles)[g].members) group_of.at(m) = g;
    }
  }

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num12(style.width_px) << "\" height=\""
      << num12(f.height) << "\" viewBox=\"" << num12(-margin) << ' ' << num12(-margin) << ' '
      << num12(style.width_px) << ' ' << num12(f.height) << "\">\n"
      << "<g stroke=\"#202020\" stroke-width=\"" << num12(style.stroke) << "\" stroke-linejoin=\"round\">\n";
  for (std::size_t k = 0; k < patch.tiles.size(); ++k) {
    const PlacedTile& t = patch.tiles[k];
    std::string fill;
    switch (style.color) {
      case RenderStyle::Color::ByType: fill = type_color(t.type); break;
      case RenderStyle::Color::ByScale: {
        const double n = static_cast<double>(scale_rank.size());
        fill = hsl(300.0 * static_cast<double>(scale_rank[t.scale]) / std::max(1.0, n - 1), 0.6, 0.6);
        break;
      }
      case RenderStyle::Color::BySupertile: fill = hsl(static_cast<double>(group_of[k]) * 137.508, 0.5, 0.62); break;
    }
    out << "<polygon points=\"" << points_attr(shapes[k], f) << "\" fill=\"" << fill << "\"/>\n";
  }
  out << "</g>\n";
  if (style.supertile_outlines && supertiles != nullptr) {
    out << "<g fill=\"none\" stroke=\"#000000\" stroke-width=\"" << num12(style.supertile_stroke)
        << "\" stroke-linejoin=\"round\">\n";
    for (const Supertile& s : *supertiles) {
      out << "<polygon points=\"" << points_attr(placed_geometry(scheme, s.type, s.scale, s.offset), f) << "\"/>\n";
    }
    out << "</g>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string render_1d(const Scheme& scheme, const std::vector<Patch>& patches, const RenderStyle& style) {
  if (scheme.dimension != 1) throw DomainError("render_1d needs a 1-dimensional scheme");
  if (patches.empty()) throw DomainError("nothing to render");
  double x0 = INFINITY, x1 = -INFINITY;
  std::vector<std::vector<Polygon>> rows;
  for (const Patch& p : patches) {
    if (p.meta.dimension != 1) throw DomainError("render_1d needs 1-dimensional patches");
    std::vector<Polygon> row;
    for (const PlacedTile& t : p.tiles) {
      row.push_back(placed_geometry(scheme, t.type, t.scale, t.offset));
      x0 = std::min(x0, row.back()[0].x.to_double());
      x1 = std::max(x1, row.back()[1].x.to_double());
    }
    rows.push_back(std::move(row));
  }
  if (!(x1 > x0)) throw DomainError("degenerate interval patch");
  const double margin = 10, bar = 18, gap = 22, tick = 5;
  const double scale = (style.width_px - 2 * margin) / (x1 - x0);
  const double height = 2 * margin + static_cast<double>(rows.size()) * (bar + gap) - gap;
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num12(style.width_px) << "\" height=\""
      << num12(height) << "\">\n";
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const double top = margin + static_cast<double>(r) * (bar + gap);
    out << "<g stroke=\"#202020\" stroke-width=\"" << num12(style.stroke) << "\">\n";
    for (std::size_t k = 0; k < rows[r].size(); ++k) {
      const double a = margin + (rows[r][k][0].x.to_double() - x0) * scale;
      const double b = margin + (rows[r][k][1].x.to_double() - x0) * scale;
      out << "<rect x=\"" << num12(a) << "\" y=\"" << num12(top) << "\" width=\"" << num12(b - a)
          << "\" height=\"" << num12(bar) << "\" fill=\"" << type_color(patches[r].tiles[k].type) << "\"/>\n";
      for (const double x : {a, b}) {
        out << "<line x1=\"" << num12(x) << "\" y1=\"" << num12(top - tick) << "\" x2=\"" << num12(x) << "\" y2=\""
            << num12(top + bar + tick) << "\"/>\n";
      }
    }
    out << "</g>\n";
  }
  out << "</svg>\n";
  return out.str();
}

namespace {

json point_json(const Point& p) { return json::array({p.x.str(), p.y.str()}); }

Point point_from(const json& j) {
  if (!j.is_array() || j.size() != 2) throw ParseError("offset must be a two-element array");
  return {Rational::parse(j[0].get<std::string>()), Rational::parse(j[1].get<std::string>())};
}

}  // namespace

std::string export_json(const Patch& patch) {
  json doc;
  doc["schema"] = "multitile.patch/1";
  doc["scheme"] = patch.meta.scheme_name;
  doc["scheme_hash"] = hex64(patch.meta.scheme_hash);
  doc["root"] = patch.meta.root + 1;
  doc["dimension"] = patch.meta.dimension;
  doc["time_factor"] = patch.meta.time_factor.str();
  doc["frame_offset"] = point_json(patch.meta.frame_offset);
  json tiles = json::array();
  for (const PlacedTile& t : patch.tiles) {
    tiles.push_back({{"type", t.type + 1}, {"scale", t.scale.str()}, {"offset", point_json(t.offset)}, {"path", t.path}});
  }
  doc["tiles"] = std::move(tiles);
  return doc.dump(1) + "\n";
}

Patch patch_from_json(const std::string& document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw ParseError("syntax error at byte " + std::to_string(e.byte));
  }
  try {
    if (doc.at("schema") != "multitile.patch/1") throw ParseError("unsupported patch schema");
    Patch patch;
    PatchMeta& m = patch.meta;
    m.scheme_name = doc.at("scheme").get<std::string>();
    m.scheme_hash = std::stoull(doc.at("scheme_hash").get<std::string>(), nullptr, 16);
    const int root = doc.at("root").get<int>();
    if (root < 1) throw ParseError("patch root id must be >= 1");
    m.root = static_cast<std::size_t>(root - 1);
    m.dimension = doc.at("dimension").get<int>();
    m.time_factor = Rational::parse(doc.at("time_factor").get<std::string>());
    m.frame_offset = point_from(doc.at("frame_offset"));
    for (const json& t : doc.at("tiles")) {
      PlacedTile tile;
      const int type = t.at("type").get<int>();
      if (type < 1) throw ParseError("tile type id must be >= 1");
      tile.type = static_cast<std::uint16_t>(type - 1);
      tile.scale = Rational::parse(t.at("scale").get<std::string>());
      tile.offset = point_from(t.at("offset"));
      tile.path = t.at("path").get<TilePath>();
      patch.tiles.push_back(std::move(tile));
    }
    return patch;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed patch document: ") + e.what());
  }
}

std::string export_json(const Scheme& scheme, const TileCensus& census) {
  json doc;
  doc["schema"] = "multitile.census/1";
  doc["factor"] = census.factor.str();
  doc["dimension"] = census.dimension;
  doc["volume"] = census.volume.str();
  doc["total"] = census.total;
  json per_type = json::object();
  json scales = json::object();
  for (std::size_t j = 0; j < census.per_type.size(); ++j) {
    const std::string& label = scheme.prototiles[j].label;
    per_type[label] = census.per_type[j];
    json hist = json::array();
    for (const auto& [s, n] : census.by_scale[j]) hist.push_back({{"scale", s.str()}, {"count", n}});
    scales[label] = std::move(hist);
  }
  doc["per_type"] = std::move(per_type);
  doc["scales"] = std::move(scales);
  json cells = json::array();
  for (const CensusCell& c : census.cells) {
    cells.push_back({{"type", scheme.prototiles[c.type].label},
                     {"interval", c.interval.str()},
                     {"count", c.count},
                     {"rate", c.rate.str()}});
  }
  doc["cells"] = std::move(cells);
  return doc.dump(1) + "\n";
}

std::string export_json(const ComplexityProfile& profile) {
  json doc;
  doc["schema"] = "multitile.complexity/1";
  json rows = json::array();
  for (std::size_t k = 0; k < profile.c.size(); ++k) rows.push_back({{"k", k}, {"c_k", profile.c[k]}});
  doc["profile"] = std::move(rows);
  return doc.dump(1) + "\n";
}

std::vector<std::uint64_t> profile_from_json(const std::string& document) {
  try {
    const json doc = json::parse(document);
    if (doc.at("schema") != "multitile.complexity/1") throw ParseError("unsupported complexity schema");
    std::vector<std::uint64_t> c;
    for (const json& row : doc.at("profile")) {
      if (row.at("k").get<std::size_t>() != c.size()) throw ParseError("complexity rows out of order");
      c.push_back(row.at("c_k").get<std::uint64_t>());
    }
    return c;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed complexity document: ") + e.what());
  }
}

}  // namespace multitile
