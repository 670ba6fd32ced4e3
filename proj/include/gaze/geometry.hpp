#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "gaze/types.hpp"

namespace gaze {

// Index triple into a point set, stored sorted ascending.
struct Triangle {
  std::int32_t a = 0;
  std::int32_t b = 0;
  std::int32_t c = 0;

  friend bool operator==(const Triangle&, const Triangle&) = default;
  friend auto operator<=>(const Triangle&, const Triangle&) = default;
};

// Triangle set over a point cloud; triples sorted ascending internally and
// the list sorted lexicographically, so equal triangulations compare equal.
struct Triangulation {
  std::int32_t point_count = 0;
  std::vector<Triangle> triangles;

  friend bool operator==(const Triangulation&, const Triangulation&) = default;
};

// Sign guard applied to the orientation and in-circle determinants;
// magnitudes at or below it count as degenerate/cocircular.
constexpr double kPredicateEpsilon = 1e-12;

// > 0: p is strictly left of a->b (counter-clockwise); the 2x2 determinant.
double orient2d(const Vec2& a, const Vec2& b, const Vec2& p);

// > 0: p strictly inside the circumcircle of ccw triangle (a, b, c).
// The sign is orientation-corrected, so the triangle may be given in any
// winding order.
double incircle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& p);

double triangle_area(const Vec2& a, const Vec2& b, const Vec2& c);

// Delaunay triangulation with the empty-circumcircle property under the
// epsilon-guarded predicates. Cocircular ties resolve to the triangulation
// whose sorted triple list is lexicographically smallest. Throws on fewer
// than 3 points, coincident points (within 1e-9), or all-collinear input.
Triangulation delaunay(std::span<const Vec2> points);

// Interior angles at vertices a, b, c, each in (0, pi), summing to pi.
// Throws on a degenerate triangle (area <= kPredicateEpsilon).
std::array<double, 3> triangle_angles(const Vec2& a, const Vec2& b,
                                      const Vec2& c);

// Non-throwing variant for per-frame feature extraction; returns false on a
// degenerate triangle and leaves `out` untouched.
bool try_triangle_angles(const Vec2& a, const Vec2& b, const Vec2& c,
                         std::array<double, 3>& out);

// Indices of the convex hull in counter-clockwise order (monotone chain);
// collinear boundary points are not included.
std::vector<std::int32_t> convex_hull_indices(std::span<const Vec2> points);

double polygon_area(std::span<const Vec2> points,
                    std::span<const std::int32_t> hull);

}  // namespace gaze
