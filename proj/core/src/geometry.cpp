#include "multitile/geometry.hpp"

#include <algorithm>

#include "multitile/errors.hpp"

namespace multitile::geometry {

Rational signed_area(const Polygon& poly) {
  Rational twice;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = poly[i];
    const Point& b = poly[(i + 1) % n];
    twice += a.x * b.y - b.x * a.y;
  }
  return twice / Rational(2);
}

Rational area(const Polygon& poly) { return abs(signed_area(poly)); }

int orientation(const Point& a, const Point& b, const Point& c) {
  const Rational cross = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
  return cross.sign();
}

namespace {

bool on_segment(const Point& a, const Point& b, const Point& p) {
  return orientation(a, b, p) == 0 && min(a.x, b.x) <= p.x && p.x <= max(a.x, b.x) &&
         min(a.y, b.y) <= p.y && p.y <= max(a.y, b.y);
}

}  // namespace

bool segments_intersect(const Point& a, const Point& b, const Point& c, const Point& d) {
  const int o1 = orientation(a, b, c);
  const int o2 = orientation(a, b, d);
  const int o3 = orientation(c, d, a);
  const int o4 = orientation(c, d, b);
  if (o1 * o2 < 0 && o3 * o4 < 0) return true;
  return on_segment(a, b, c) || on_segment(a, b, d) || on_segment(c, d, a) || on_segment(c, d, b);
}

bool is_simple(const Polygon& poly) {
  const std::size_t n = poly.size();
  if (n < 3 || signed_area(poly).sign() == 0) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = poly[i];
    const Point& b = poly[(i + 1) % n];
    if (a == b) return false;
    for (std::size_t j = i + 1; j < n; ++j) {
      const Point& c = poly[j];
      const Point& d = poly[(j + 1) % n];
      const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      if (adjacent) {
        // Consecutive edges may only share their common vertex.
        const Point& shared = (j == i + 1) ? b : a;
        const Point& far_ab = (j == i + 1) ? a : b;
        const Point& far_cd = (j == i + 1) ? d : c;
        if (n == 3) continue;
        if (orientation(far_ab, shared, far_cd) == 0 &&
            (on_segment(shared, far_ab, far_cd) || on_segment(shared, far_cd, far_ab))) {
          return false;
        }
        continue;
      }
      if (segments_intersect(a, b, c, d)) return false;
    }
  }
  return true;
}

Polygon counter_clockwise(Polygon poly) {
  if (signed_area(poly).sign() < 0) std::reverse(poly.begin(), poly.end());
  return poly;
}

std::vector<Polygon> triangulate(const Polygon& input) {
  Polygon poly = counter_clockwise(input);
  // Drop collinear vertices; they only produce degenerate ears.
  for (bool changed = true; changed && poly.size() > 3;) {
    changed = false;
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const std::size_t n = poly.size();
      if (orientation(poly[(i + n - 1) % n], poly[i], poly[(i + 1) % n]) == 0) {
        poly.erase(poly.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
    }
  }
  std::vector<Polygon> out;
  while (poly.size() > 3) {
    const std::size_t n = poly.size();
    bool clipped = false;
    for (std::size_t i = 0; i < n && !clipped; ++i) {
      const Point& prev = poly[(i + n - 1) % n];
      const Point& cur = poly[i];
      const Point& next = poly[(i + 1) % n];
      if (orientation(prev, cur, next) <= 0) continue;
      bool empty = true;
      for (std::size_t k = 0; k < n && empty; ++k) {
        if (k == i || k == (i + 1) % n || k == (i + n - 1) % n) continue;
        const Point& p = poly[k];
        if (orientation(prev, cur, p) >= 0 && orientation(cur, next, p) >= 0 &&
            orientation(next, prev, p) >= 0) {
          empty = false;
        }
      }
      if (!empty) continue;
      out.push_back({prev, cur, next});
      poly.erase(poly.begin() + static_cast<std::ptrdiff_t>(i));
      clipped = true;
    }
    if (!clipped) throw DomainError("triangulation failed: polygon is not simple");
  }
  if (poly.size() == 3) out.push_back(poly);
  return out;
}

Polygon clip_convex(const Polygon& subject, const Polygon& clip) {
  Polygon output = subject;
  const std::size_t m = clip.size();
  for (std::size_t e = 0; e < m && !output.empty(); ++e) {
    const Point& a = clip[e];
    const Point& b = clip[(e + 1) % m];
    Polygon input = std::move(output);
    output.clear();
    const std::size_t n = input.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Point& p = input[i];
      const Point& q = input[(i + 1) % n];
      const int sp = orientation(a, b, p);
      const int sq = orientation(a, b, q);
      if (sp >= 0) output.push_back(p);
      if ((sp > 0 && sq < 0) || (sp < 0 && sq > 0)) {
        // Intersection of segment pq with line ab.
        const Rational dx = q.x - p.x;
        const Rational dy = q.y - p.y;
        const Rational ex = b.x - a.x;
        const Rational ey = b.y - a.y;
        const Rational denom = ex * dy - ey * dx;
        const Rational t = (ey * (p.x - a.x) - ex * (p.y - a.y)) / denom;
        output.push_back({p.x + t * dx, p.y + t * dy});
      }
    }
  }
  return output;
}

Rational intersection_area(const Polygon& a, const Polygon& b) {
  const auto ta = triangulate(a);
  const auto tb = triangulate(b);
  Rational total;
  for (const auto& s : ta) {
    const Box bs = bounding_box(s);
    for (const auto& c : tb) {
      const Box bc = bounding_box(c);
      if (bs.x1 <= bc.x0 || bc.x1 <= bs.x0 || bs.y1 <= bc.y0 || bc.y1 <= bs.y0) continue;
      const Polygon piece = clip_convex(s, c);
      if (piece.size() >= 3) total += area(piece);
    }
  }
  return total;
}

bool on_boundary(const Polygon& poly, const Point& p) {
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (on_segment(poly[i], poly[(i + 1) % n], p)) return true;
  }
  return false;
}

bool strictly_inside(const Polygon& poly, const Point& p) {
  if (on_boundary(poly, p)) return false;
  // Crossing number along the rightward horizontal ray, half-open in y.
  bool inside = false;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = poly[i];
    const Point& b = poly[(i + 1) % n];
    const bool straddles = (a.y > p.y) != (b.y > p.y);
    if (!straddles) continue;
    // x coordinate of the edge at height p.y compared against p.x.
    const Rational lhs = (b.x - a.x) * (p.y - a.y);
    const Rational rhs = (p.x - a.x) * (b.y - a.y);
    const bool right = (b.y > a.y) ? (lhs > rhs) : (lhs < rhs);
    if (right) inside = !inside;
  }
  return inside;
}

Box bounding_box(const Polygon& poly) {
  Box box{poly.front().x, poly.front().y, poly.front().x, poly.front().y};
  for (const Point& p : poly) {
    if (p.x < box.x0) box.x0 = p.x;
    if (p.y < box.y0) box.y0 = p.y;
    if (p.x > box.x1) box.x1 = p.x;
    if (p.y > box.y1) box.y1 = p.y;
  }
  return box;
}

Polygon place(const Polygon& poly, const Rational& scale, const Point& offset) {
  Polygon out;
  out.reserve(poly.size());
  for (const Point& p : poly) out.push_back({offset.x + scale * p.x, offset.y + scale * p.y});
  return out;
}

}  // namespace multitile::geometry
