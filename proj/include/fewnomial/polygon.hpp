#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "fewnomial/errors.hpp"
#include "fewnomial/rational.hpp"

namespace fewnomial {

struct Point2Q {
  Rat x, y;
  bool operator==(const Point2Q& o) const { return x == o.x && y == o.y; }
  bool operator<(const Point2Q& o) const { return x < o.x || (x == o.x && y < o.y); }
};

inline Rat cross(const Point2Q& o, const Point2Q& a, const Point2Q& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Convex polygon with rational vertices, counterclockwise, strictly convex
// (no collinear triples survive construction). Degenerate hulls (a point or
// a segment) are kept with a flag so callers can decide.
class LatticePolygon {
 public:
  LatticePolygon() = default;

  static LatticePolygon hull_of(std::vector<Point2Q> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    LatticePolygon poly;
    if (pts.size() <= 2) {
      poly.vertices_ = std::move(pts);
      return poly;
    }
    // Andrew monotone chain with strict turns.
    std::vector<Point2Q> h(2 * pts.size());
    size_t k = 0;
    for (size_t i = 0; i < pts.size(); ++i) {
      while (k >= 2 && sgn(cross(h[k - 2], h[k - 1], pts[i])) <= 0) --k;
      h[k++] = pts[i];
    }
    for (size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
      while (k >= t && sgn(cross(h[k - 2], h[k - 1], pts[i])) <= 0) --k;
      h[k++] = pts[i];
    }
    h.resize(k - 1);
    if (h.size() <= 2) {
      // all points collinear
      std::vector<Point2Q> seg{pts.front(), pts.back()};
      if (pts.size() == 1) seg.resize(1);
      poly.vertices_ = std::move(seg);
      return poly;
    }
    poly.vertices_ = std::move(h);
    return poly;
  }

  const std::vector<Point2Q>& vertices() const { return vertices_; }
  size_t size() const { return vertices_.size(); }
  bool degenerate() const { return vertices_.size() < 3; }

  std::vector<Point2Q> edge_vectors() const {
    if (degenerate()) throw DegeneratePolygon("edge vectors of a degenerate polygon");
    std::vector<Point2Q> e;
    for (size_t i = 0; i < vertices_.size(); ++i) {
      const Point2Q& a = vertices_[i];
      const Point2Q& b = vertices_[(i + 1) % vertices_.size()];
      e.push_back(Point2Q{b.x - a.x, b.y - a.y});
    }
    return e;
  }

  Point2Q min_vertex() const {
    return *std::min_element(vertices_.begin(), vertices_.end());
  }

  bool operator==(const LatticePolygon& o) const { return vertices_ == o.vertices_; }

 private:
  std::vector<Point2Q> vertices_;  // CCW from the lexicographic minimum
};

}  // namespace fewnomial
