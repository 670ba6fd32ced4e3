#include "gaze/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "gaze/error.hpp"

namespace gaze {

double orient2d(const Vec2& a, const Vec2& b, const Vec2& p) {
  return (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
}

double incircle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& p) {
  const double adx = a.x - p.x, ady = a.y - p.y;
  const double bdx = b.x - p.x, bdy = b.y - p.y;
  const double cdx = c.x - p.x, cdy = c.y - p.y;
  const double ad = adx * adx + ady * ady;
  const double bd = bdx * bdx + bdy * bdy;
  const double cd = cdx * cdx + cdy * cdy;
  double det = adx * (bdy * cd - bd * cdy) - ady * (bdx * cd - bd * cdx) +
               ad * (bdx * cdy - bdy * cdx);
  if (orient2d(a, b, c) < 0.0) det = -det;
  return det;
}

double triangle_area(const Vec2& a, const Vec2& b, const Vec2& c) {
  return 0.5 * std::fabs(orient2d(a, b, c));
}

namespace {

Triangle make_triangle(std::int32_t i, std::int32_t j, std::int32_t k) {
  if (i > j) std::swap(i, j);
  if (j > k) std::swap(j, k);
  if (i > j) std::swap(i, j);
  return Triangle{i, j, k};
}

std::uint64_t edge_key(std::int32_t u, std::int32_t v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) |
         static_cast<std::uint32_t>(v);
}

void check_input(std::span<const Vec2> points) {
  const std::size_t n = points.size();
  if (n < 3) throw Error("delaunay: need at least 3 points");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = points[i].x - points[j].x;
      const double dy = points[i].y - points[j].y;
      if (std::sqrt(dx * dx + dy * dy) < 1e-9) {
        throw Error("delaunay: points " + std::to_string(i) + " and " +
                    std::to_string(j) + " coincide");
      }
    }
  }
  // All-collinear input has no triangulation.
  double max_orient = 0.0;
  for (std::size_t i = 2; i < n; ++i) {
    max_orient = std::max(
        max_orient, std::fabs(orient2d(points[0], points[1], points[i])));
    if (max_orient > kPredicateEpsilon) return;
  }
  throw Error("delaunay: all points are collinear");
}

// Sorted pair of triples describing one diagonal choice of a quad; used to
// compare the two configurations of a cocircular quad.
std::array<Triangle, 2> quad_config(std::int32_t shared1, std::int32_t shared2,
                                    std::int32_t opp1, std::int32_t opp2) {
  std::array<Triangle, 2> pair = {make_triangle(shared1, shared2, opp1),
                                  make_triangle(shared1, shared2, opp2)};
  if (pair[1] < pair[0]) std::swap(pair[0], pair[1]);
  return pair;
}

// Resolves cocircular quads toward the lexicographically smallest sorted
// triple list. Each accepted flip strictly decreases the local pair, so the
// loop terminates; the pass budget is a hard stop for pathological inputs.
void canonicalize_cocircular(std::span<const Vec2> pts,
                             std::vector<Triangle>& tris) {
  for (int pass = 0; pass < 64; ++pass) {
    std::map<std::uint64_t, std::vector<std::size_t>> edges;
    for (std::size_t t = 0; t < tris.size(); ++t) {
      edges[edge_key(tris[t].a, tris[t].b)].push_back(t);
      edges[edge_key(tris[t].a, tris[t].c)].push_back(t);
      edges[edge_key(tris[t].b, tris[t].c)].push_back(t);
    }
    bool changed = false;
    for (const auto& [key, owners] : edges) {
      if (owners.size() != 2) continue;
      const std::int32_t u = static_cast<std::int32_t>(key >> 32);
      const std::int32_t v = static_cast<std::int32_t>(key & 0xFFFFFFFFu);
      Triangle& t1 = tris[owners[0]];
      Triangle& t2 = tris[owners[1]];
      auto opposite = [&](const Triangle& t) {
        if (t.a != u && t.a != v) return t.a;
        if (t.b != u && t.b != v) return t.b;
        return t.c;
      };
      const std::int32_t p = opposite(t1);
      const std::int32_t q = opposite(t2);
      if (std::fabs(incircle(pts[t1.a], pts[t1.b], pts[t1.c], pts[q])) >
          kPredicateEpsilon) {
        continue;  // not a cocircular tie
      }
      // Flip is only valid when the quad is strictly convex.
      const double o1 = orient2d(pts[p], pts[q], pts[u]);
      const double o2 = orient2d(pts[p], pts[q], pts[v]);
      const double o3 = orient2d(pts[u], pts[v], pts[p]);
      const double o4 = orient2d(pts[u], pts[v], pts[q]);
      if (!(o1 * o2 < 0.0 && o3 * o4 < 0.0) ||
          std::min({std::fabs(o1), std::fabs(o2), std::fabs(o3),
                    std::fabs(o4)}) <= kPredicateEpsilon) {
        continue;
      }
      const auto current = quad_config(u, v, p, q);
      const auto flipped = quad_config(p, q, u, v);
      if (flipped < current) {
        t1 = flipped[0];
        t2 = flipped[1];
        changed = true;
      }
    }
    if (!changed) break;
  }
}

}  // namespace

Triangulation delaunay(std::span<const Vec2> points) {
  check_input(points);
  const std::int32_t n = static_cast<std::int32_t>(points.size());

  // Working copy with three far-away super-triangle vertices appended.
  std::vector<Vec2> pts(points.begin(), points.end());
  double mnx = pts[0].x, mny = pts[0].y, mxx = pts[0].x, mxy = pts[0].y;
  for (const Vec2& p : pts) {
    mnx = std::min(mnx, p.x);
    mny = std::min(mny, p.y);
    mxx = std::max(mxx, p.x);
    mxy = std::max(mxy, p.y);
  }
  const double cx = 0.5 * (mnx + mxx);
  const double cy = 0.5 * (mny + mxy);
  const double span = std::max({mxx - mnx, mxy - mny, 1.0});
  // Far enough that no circumcircle of a guarded-general-position input can
  // reach a super vertex; the one-super-vertex in-circle determinant scales
  // its signal with the same factor as its rounding noise, so the sign stays
  // reliable.
  const double big = 1e13 * span;
  pts.push_back(Vec2{cx - 2.0 * big, cy - big});
  pts.push_back(Vec2{cx + 2.0 * big, cy - big});
  pts.push_back(Vec2{cx, cy + 2.0 * big});

  std::vector<Triangle> tris;
  tris.push_back(Triangle{n, n + 1, n + 2});

  std::vector<char> bad;
  for (std::int32_t i = 0; i < n; ++i) {
    const Vec2& p = pts[i];
    bad.assign(tris.size(), 0);
    std::map<std::uint64_t, int> edge_count;
    std::map<std::uint64_t, std::pair<std::int32_t, std::int32_t>> edge_verts;
    bool any = false;
    for (std::size_t t = 0; t < tris.size(); ++t) {
      const Triangle& tr = tris[t];
      if (incircle(pts[tr.a], pts[tr.b], pts[tr.c], p) > kPredicateEpsilon) {
        bad[t] = 1;
        any = true;
        const std::int32_t vs[3] = {tr.a, tr.b, tr.c};
        for (int e = 0; e < 3; ++e) {
          const std::int32_t u = vs[e];
          const std::int32_t v = vs[(e + 1) % 3];
          const std::uint64_t key = edge_key(u, v);
          edge_count[key] += 1;
          edge_verts[key] = {std::min(u, v), std::max(u, v)};
        }
      }
    }
    if (!any) {
      // Interior points always fall strictly inside their containing
      // triangle's circumcircle; reaching here means the guards rejected a
      // nearly-degenerate configuration.
      throw Error("delaunay: degenerate configuration at point " +
                  std::to_string(i));
    }
    std::vector<Triangle> kept;
    kept.reserve(tris.size());
    for (std::size_t t = 0; t < tris.size(); ++t) {
      if (!bad[t]) kept.push_back(tris[t]);
    }
    for (const auto& [key, count] : edge_count) {
      if (count != 1) continue;  // interior cavity edge
      const auto [u, v] = edge_verts.at(key);
      kept.push_back(make_triangle(u, v, i));
    }
    tris.swap(kept);
  }

  std::vector<Triangle> result;
  result.reserve(tris.size());
  for (const Triangle& t : tris) {
    if (t.a < n && t.b < n && t.c < n) result.push_back(t);
  }
  if (result.empty()) throw Error("delaunay: no triangulation exists");

  canonicalize_cocircular(points, result);
  std::sort(result.begin(), result.end());
  result.erase(std::unique(result.begin(), result.end()), result.end());
  return Triangulation{n, std::move(result)};
}

bool try_triangle_angles(const Vec2& a, const Vec2& b, const Vec2& c,
                         std::array<double, 3>& out) {
  if (triangle_area(a, b, c) <= kPredicateEpsilon) return false;
  auto angle_at = [](const Vec2& v, const Vec2& p, const Vec2& q) {
    const double ux = p.x - v.x, uy = p.y - v.y;
    const double wx = q.x - v.x, wy = q.y - v.y;
    const double cross = ux * wy - uy * wx;
    const double dot = ux * wx + uy * wy;
    return std::atan2(std::fabs(cross), dot);
  };
  out[0] = angle_at(a, b, c);
  out[1] = angle_at(b, c, a);
  out[2] = angle_at(c, a, b);
  return true;
}

std::array<double, 3> triangle_angles(const Vec2& a, const Vec2& b,
                                      const Vec2& c) {
  std::array<double, 3> out;
  if (!try_triangle_angles(a, b, c, out)) {
    throw Error("triangle_angles: degenerate triangle");
  }
  return out;
}

std::vector<std::int32_t> convex_hull_indices(std::span<const Vec2> points) {
  const std::int32_t n = static_cast<std::int32_t>(points.size());
  std::vector<std::int32_t> idx(n);
  for (std::int32_t i = 0; i < n; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::int32_t i, std::int32_t j) {
    if (points[i].x != points[j].x) return points[i].x < points[j].x;
    return points[i].y < points[j].y;
  });
  auto build = [&](auto begin, auto end) {
    std::vector<std::int32_t> chain;
    for (auto it = begin; it != end; ++it) {
      while (chain.size() >= 2 &&
             orient2d(points[chain[chain.size() - 2]], points[chain.back()],
                      points[*it]) <= kPredicateEpsilon) {
        chain.pop_back();
      }
      chain.push_back(*it);
    }
    return chain;
  };
  std::vector<std::int32_t> lower = build(idx.begin(), idx.end());
  std::vector<std::int32_t> upper = build(idx.rbegin(), idx.rend());
  lower.pop_back();
  upper.pop_back();
  lower.insert(lower.end(), upper.begin(), upper.end());
  return lower;
}

double polygon_area(std::span<const Vec2> points,
                    std::span<const std::int32_t> hull) {
  double twice = 0.0;
  const std::size_t h = hull.size();
  for (std::size_t i = 0; i < h; ++i) {
    const Vec2& p = points[hull[i]];
    const Vec2& q = points[hull[(i + 1) % h]];
    twice += p.x * q.y - p.y * q.x;
  }
  return 0.5 * std::fabs(twice);
}

}  // namespace gaze
