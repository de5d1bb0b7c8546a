#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "multitile/geometry.hpp"
#include "multitile/log_linear.hpp"
#include "multitile/rational.hpp"
#include "multitile/scheme.hpp"

namespace multitile {

/// A flow time. Exact times are t = ln(u) for a rational u >= 1, so every
/// substitution decision e^t * prod(alpha) > 1 is the rational comparison
/// u * prod(alpha) > 1. Approximate times are plain doubles.
class TimePoint {
public:
  static TimePoint exact(Rational factor);
  static TimePoint approx(double t);
  /// "0", "ln(p/q)", "ln5", "3*ln(5/3)" (exact) or a decimal literal (approximate).
  static TimePoint parse(std::string_view text);

  bool is_exact() const { return exact_; }
  /// e^t; exact mode only.
  const Rational& factor() const;
  double value() const;
  LogLinearValue log_value() const;
  std::string str() const;

private:
  bool exact_ = true;
  Rational factor_{1};
  double approx_ = 0.0;
};

using TilePath = std::vector<std::uint16_t>;

/// A tile of a generated patch: the region offset + scale * T_type. `path`
/// lists rule child indices from the root, i.e. the tile's metric path.
struct PlacedTile {
  std::uint16_t type = 0;  // 0-based prototile index
  Rational scale;
  geometry::Point offset;
  TilePath path;
};

struct PatchMeta {
  std::string scheme_name;
  std::uint64_t scheme_hash = 0;
  int dimension = 2;
  std::size_t root = 0;
  Rational time_factor{1};   // u = e^t
  geometry::Point frame_offset;  // offset of the inflated root
};

struct Patch {
  PatchMeta meta;
  std::vector<PlacedTile> tiles;
};

struct GenerateOptions {
  std::uint64_t budget = 10'000'000;  // tile cap
  unsigned workers = 1;
  geometry::Point frame_offset;
};

/// F_t(T_root): e^t * T_root with every tile of scale > 1 substituted. Tiles
/// of scale exactly 1 stay whole. Tiles come out in lexicographic path order.
Patch generate(const Scheme& scheme, std::size_t root, const TimePoint& t, const GenerateOptions& options = {});

struct ApproxTile {
  std::uint16_t type = 0;
  double scale = 0;
  double x = 0;
  double y = 0;
  std::uint32_t depth = 0;
};

/// Floating-point variant for arbitrary real t; approximate near events.
std::vector<ApproxTile> generate_approx(const Scheme& scheme, std::size_t root, double t,
                                        std::uint64_t budget = 10'000'000);

/// Tile counts of F_t(T_root) per (type, exact scale), computed without
/// geometry by merging equal (type, scale) states of the substitution tree.
struct ScaleClass {
  std::size_t type = 0;
  Rational scale;
  std::uint64_t count = 0;
};

struct ScaleSpectrum {
  Rational factor{1};
  int dimension = 2;
  std::vector<ScaleClass> classes;  // ordered by type, then decreasing scale

  std::uint64_t total() const;
  std::size_t distinct() const { return classes.size(); }
};

ScaleSpectrum scale_spectrum(const Scheme& scheme, std::size_t root, const TimePoint& t,
                             std::uint64_t state_budget = 10'000'000);
ScaleSpectrum spectrum_of(const Patch& patch);

struct StationaryAnchor {
  std::size_t root_type = 0;
  Rational contraction;      // lambda = prod(alpha) along child_path
  LogLinearValue period;     // s = ln(1/lambda)
  geometry::Point control_point;  // fixed point of x -> offset_chain + lambda x
  TilePath child_path;
};

/// Closed paths root -> root of length <= max_period whose self-copy has its
/// fixed point strictly inside T_root. Paths that repeat a shorter closed path
/// are skipped. Sorted by period, then path length, then path.
std::vector<StationaryAnchor> find_stationary_anchors(const Scheme& scheme, std::size_t root,
                                                      const TimePoint& max_period);

/// Anchor for an explicit path. False when the path does not return to the
/// root or its fixed point is not strictly interior.
bool anchor_for_path(const Scheme& scheme, std::size_t root, const TilePath& path, StationaryAnchor& out);

/// F_{ks}(T_root) translated so the control point sits at the origin.
Patch stationary_patch(const Scheme& scheme, const StationaryAnchor& anchor, int k, const GenerateOptions& options = {});

/// Exact tile-set inclusion (type, scale, offset).
bool is_subpatch(const Patch& small, const Patch& big);

struct Supertile {
  TilePath path;  // prefix shared by all members
  std::size_t type = 0;
  Rational scale;  // scale of the ancestor in the patch frame
  geometry::Point offset;
  std::vector<std::size_t> members;  // indices into patch.tiles
};

/// Groups tiles of stationary_patch(k) by their order-m ancestor: the shortest
/// path prefix whose scale in the patch frame is <= e^{ms}.
std::vector<Supertile> supertile_decompose(const Scheme& scheme, const Patch& patch, const StationaryAnchor& anchor,
                                           int m);
/// Same grouping with the inflation factor e^{ms} given directly.
std::vector<Supertile> supertile_decompose(const Scheme& scheme, const Patch& patch, const Rational& inflation);

/// Exact sum over tiles of scale^d * vol(type).
Rational patch_volume(const Scheme& scheme, const Patch& patch);

}  // namespace multitile
