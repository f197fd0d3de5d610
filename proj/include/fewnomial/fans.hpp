#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "fewnomial/polygon.hpp"
#include "fewnomial/sparse2.hpp"

namespace fewnomial {

struct RayZ {
  Int x, y;
  bool operator==(const RayZ& o) const { return x == o.x && y == o.y; }
};

inline Int cross(const RayZ& a, const RayZ& b) { return a.x * b.y - a.y * b.x; }

// Exact counterclockwise angular order starting at the positive x-axis:
// half-plane split first, cross product within a half.
inline bool angle_less(const RayZ& a, const RayZ& b) {
  auto half = [](const RayZ& v) { return (sgn(v.y) > 0 || (sgn(v.y) == 0 && sgn(v.x) > 0)) ? 0 : 1; };
  int ha = half(a), hb = half(b);
  if (ha != hb) return ha < hb;
  return sgn(cross(a, b)) > 0;
}

inline RayZ primitive(Int x, Int y) {
  Int g = gcd(x, y);
  if (sgn(g) == 0) throw Error("primitive vector of zero");
  return RayZ{x / g, y / g};
}

// Outward primitive edge normals of a polygon, in counterclockwise angular
// order. Rational vertices are fine: normals are scale-invariant.
class NormalFan {
 public:
  static NormalFan of(const LatticePolygon& poly) {
    if (poly.degenerate()) throw DegeneratePolygon("normal fan of a degenerate polygon");
    NormalFan fan;
    for (const auto& e : poly.edge_vectors()) {
      // outward normal of a CCW edge = clockwise rotation of the edge vector
      Rat nx = e.y, ny = -e.x;
      Int num_x = nx.get_num() * ny.get_den();
      Int num_y = ny.get_num() * nx.get_den();
      fan.rays_.push_back(primitive(num_x, num_y));
    }
    std::sort(fan.rays_.begin(), fan.rays_.end(), angle_less);
    return fan;
  }

  static NormalFan from_rays(std::vector<RayZ> rays) {
    NormalFan fan;
    for (auto& r : rays) fan.rays_.push_back(primitive(r.x, r.y));
    std::sort(fan.rays_.begin(), fan.rays_.end(), angle_less);
    for (size_t i = 0; i + 1 < fan.rays_.size(); ++i)
      if (fan.rays_[i] == fan.rays_[i + 1]) throw Error("duplicate rays");
    return fan;
  }

  const std::vector<RayZ>& rays() const { return rays_; }
  size_t size() const { return rays_.size(); }

 private:
  std::vector<RayZ> rays_;
};

struct MinkowskiSum {
  LatticePolygon polygon;
  size_t edge_count = 0;
  bool hexagon = false;
  // one entry per merged edge, in CCW order: 1, 2, or 3 (= both summands)
  std::vector<int> edge_origin;
};

// Edge-merge construction: concatenate the edge vectors of both summands in
// angular order; equal directions collapse into one edge.
inline MinkowskiSum minkowski_sum(const LatticePolygon& p1, const LatticePolygon& p2) {
  if (p1.degenerate() || p2.degenerate())
    throw DegeneratePolygon("Minkowski sum needs non-degenerate summands");
  struct Edge {
    Point2Q v;
    int origin;
  };
  std::vector<Edge> edges;
  for (const auto& e : p1.edge_vectors()) edges.push_back({e, 1});
  for (const auto& e : p2.edge_vectors()) edges.push_back({e, 2});
  auto dir = [](const Point2Q& v) {
    Int nx = v.x.get_num() * v.y.get_den();
    Int ny = v.y.get_num() * v.x.get_den();
    return primitive(nx, ny);
  };
  std::stable_sort(edges.begin(), edges.end(),
                   [&](const Edge& a, const Edge& b) { return angle_less(dir(a.v), dir(b.v)); });
  // merge equal directions
  std::vector<Edge> merged;
  for (auto& e : edges) {
    if (!merged.empty() && dir(merged.back().v) == dir(e.v)) {
      merged.back().v.x += e.v.x;
      merged.back().v.y += e.v.y;
      merged.back().origin = 3;
    } else {
      merged.push_back(e);
    }
  }
  MinkowskiSum out;
  out.edge_count = merged.size();
  out.hexagon = (merged.size() == 6);
  // The lexicographic minimum of the sum is the sum of the minima. Its
  // outgoing edge is the angularly first direction strictly below the
  // x-axis pointing right (they sit at the tail of the 0-based angular
  // order), or else the angularly first edge overall.
  Point2Q start{p1.min_vertex().x + p2.min_vertex().x, p1.min_vertex().y + p2.min_vertex().y};
  size_t first = 0;
  for (size_t i = 0; i < merged.size(); ++i) {
    RayZ d = dir(merged[i].v);
    if (sgn(d.y) < 0 && sgn(d.x) > 0) {
      first = i;
      break;
    }
  }
  std::vector<Point2Q> verts;
  std::vector<int> origins;
  Point2Q cur = start;
  for (size_t k = 0; k < merged.size(); ++k) {
    const Edge& e = merged[(first + k) % merged.size()];
    verts.push_back(cur);
    origins.push_back(e.origin);
    cur.x += e.v.x;
    cur.y += e.v.y;
  }
  if (!(cur == start)) throw Error("Minkowski edge walk did not close");
  out.polygon = LatticePolygon::hull_of(verts);
  out.edge_origin = std::move(origins);
  if (out.polygon.size() != out.edge_count) throw Error("Minkowski vertex/edge count mismatch");
  return out;
}

// True iff every open angular sector between consecutive rays of f2
// contains exactly one ray of f1. Any collinear pair (same or opposite
// direction) is degenerate and reported instead.
inline bool alternates(const NormalFan& f1, const NormalFan& f2) {
  if (f1.size() != 3 || f2.size() != 3)
    throw Error("alternation is defined here for triangle fans");
  for (const auto& a : f1.rays())
    for (const auto& b : f2.rays())
      if (sgn(cross(a, b)) == 0) throw ParallelRays("collinear rays between the two fans");
  for (size_t i = 0; i < 3; ++i) {
    const RayZ& b1 = f2.rays()[i];
    const RayZ& b2 = f2.rays()[(i + 1) % 3];
    unsigned inside = 0;
    for (const auto& a : f1.rays()) {
      // strict containment in the CCW sector from b1 to b2
      bool in;
      if (sgn(cross(b1, b2)) > 0)
        in = sgn(cross(b1, a)) > 0 && sgn(cross(a, b2)) > 0;
      else  // reflex wrap: complement of the CCW sector from b2 to b1
        in = !(sgn(cross(b2, a)) >= 0 && sgn(cross(a, b1)) >= 0);
      if (in) ++inside;
    }
    if (inside != 1) return false;
  }
  return true;
}

// Two consecutive edges of the hexagon p1 + p2 coming from the same summand
// are translates of two consecutive edges of that summand.
inline bool consecutive_translate_check(const LatticePolygon& p1, const LatticePolygon& p2) {
  MinkowskiSum ms = minkowski_sum(p1, p2);
  if (!ms.hexagon) throw NotHexagon("Minkowski sum is not a hexagon");
  size_t n = ms.edge_origin.size();
  for (size_t i = 0; i < n; ++i)
    if (ms.edge_origin[i] == ms.edge_origin[(i + 1) % n]) return true;
  return false;
}

}  // namespace fewnomial
