#pragma once

#include <string>
#include <vector>

#include "multitile/flow.hpp"
#include "multitile/statistics.hpp"

namespace multitile {

struct RenderStyle {
  enum class Color { ByType, ByScale, BySupertile };
  Color color = Color::ByType;
  double width_px = 800;  // drawing width; height follows the aspect ratio
  double stroke = 0.6;    // tile outline width in px
  double supertile_stroke = 2.4;
  bool supertile_outlines = false;
  /// Optional viewport in patch coordinates; empty means the patch bounds.
  bool has_viewport = false;
  geometry::Box viewport;
};

/// One polygon per tile. `supertiles` (may be null) feeds BySupertile colors
/// and the bold outlines.
std::string render_svg(const Scheme& scheme, const Patch& patch, const RenderStyle& style = {},
                       const std::vector<Supertile>* supertiles = nullptr);

/// Stacked interval bars, one row per patch, with ticks at tile endpoints.
std::string render_1d(const Scheme& scheme, const std::vector<Patch>& patches, const RenderStyle& style = {});

std::string export_json(const Patch& patch);
Patch patch_from_json(const std::string& document);
std::string export_json(const Scheme& scheme, const TileCensus& census);
std::string export_json(const ComplexityProfile& profile);
std::vector<std::uint64_t> profile_from_json(const std::string& document);

}  // namespace multitile
