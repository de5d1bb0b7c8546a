#pragma once

#include <vector>

#include "multitile/rational.hpp"

// Exact planar predicates over rational coordinates. Nothing here touches
// floating point.
namespace multitile::geometry {

struct Point {
  Rational x;
  Rational y;
  friend bool operator==(const Point&, const Point&) = default;
};

using Polygon = std::vector<Point>;

struct Box {
  Rational x0, y0, x1, y1;
};

/// Shoelace area, positive for counter-clockwise vertex order.
Rational signed_area(const Polygon& poly);
Rational area(const Polygon& poly);

/// Sign of the cross product (b - a) x (c - a).
int orientation(const Point& a, const Point& b, const Point& c);

/// True when the closed segments [a,b] and [c,d] share at least one point.
bool segments_intersect(const Point& a, const Point& b, const Point& c, const Point& d);

/// Simple polygon: at least three vertices, nonzero area, and no two edges
/// meet except consecutive edges at their shared endpoint.
bool is_simple(const Polygon& poly);

/// Returns the polygon with counter-clockwise orientation.
Polygon counter_clockwise(Polygon poly);

/// Ear-clipping triangulation of a simple polygon.
std::vector<Polygon> triangulate(const Polygon& poly);

/// Intersection of two convex counter-clockwise polygons.
Polygon clip_convex(const Polygon& subject, const Polygon& clip);

/// Area of the intersection of two simple polygons.
Rational intersection_area(const Polygon& a, const Polygon& b);

bool strictly_inside(const Polygon& poly, const Point& p);
bool on_boundary(const Polygon& poly, const Point& p);

Box bounding_box(const Polygon& poly);

/// offset + scale * p for every vertex.
Polygon place(const Polygon& poly, const Rational& scale, const Point& offset);

}  // namespace multitile::geometry
