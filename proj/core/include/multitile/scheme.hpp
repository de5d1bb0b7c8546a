#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "multitile/geometry.hpp"
#include "multitile/rational.hpp"

namespace multitile {

/// A prototile. For dimension 1 the geometry is the interval
/// [vertices[0].x, vertices[1].x] and every y coordinate is zero.
struct Prototile {
  int id = 0;  // 1-based, as written in scheme files
  std::string label;
  int dimension = 2;
  geometry::Polygon vertices;
  Rational volume;
};

/// One tile of substitution: a copy of prototile `child_type` scaled by
/// `scale` and translated by `offset` inside the parent's frame.
struct RuleChild {
  std::size_t child_type = 0;  // 0-based prototile index
  Rational scale;
  geometry::Point offset;
};

struct Scheme {
  std::string name;
  int dimension = 2;
  std::vector<Prototile> prototiles;
  std::vector<std::vector<RuleChild>> rules;  // rules[i] substitutes prototiles[i]

  std::size_t size() const { return prototiles.size(); }
};

/// Geometry of a placed copy: offset + scale * prototile. For dimension 1 the
/// result is the two interval endpoints.
geometry::Polygon placed_geometry(const Scheme& scheme, std::size_t type, const Rational& scale,
                                  const geometry::Point& offset);

/// Volume of a (possibly degenerate) interval or polygon, exact.
Rational geometry_volume(int dimension, const geometry::Polygon& shape);

Scheme parse_scheme(std::string_view document);
Scheme load_scheme(const std::filesystem::path& path);
/// Canonical JSON text; parse_scheme(serialize_scheme(s)) reproduces s.
std::string serialize_scheme(const Scheme& scheme);
std::uint64_t scheme_hash(const Scheme& scheme);

/// Rescales every prototile to unit volume, adjusting rule scales and
/// offsets. Throws DomainError for zero volumes or when vol^(-1/d) is not
/// rational.
Scheme normalize(const Scheme& scheme);
bool is_normalized(const Scheme& scheme);

struct RuleCheck {
  std::size_t prototile = 0;
  Rational volume_sum;     // sum over children of scale^d * vol(child type)
  Rational deficit;        // vol(parent) - volume_sum
  bool volume_identity = false;
  bool disjoint = false;
  bool contained = false;
  std::vector<std::string> problems;
};

struct ValidationReport {
  std::vector<RuleCheck> rules;
  bool normalized = false;

  bool ok() const;
  std::string text(const Scheme& scheme) const;
};

ValidationReport validate(const Scheme& scheme);

}  // namespace multitile
