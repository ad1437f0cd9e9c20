#pragma once

#include <cmath>

namespace oceansrc {

// x3 (z) is depth, measured downward from the pressure-release surface.
struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Point3&, const Point3&) = default;
};

inline double horizontal_distance(const Point3& a, const Point3& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

inline double distance(const Point3& a, const Point3& b) {
  return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) +
                   (a.z - b.z) * (a.z - b.z));
}

// Axis-aligned cuboid [lo.x, hi.x] x [lo.y, hi.y] x [lo.z, hi.z].
struct Box {
  Point3 lo;
  Point3 hi;

  bool valid() const { return lo.x < hi.x && lo.y < hi.y && lo.z < hi.z; }

  // Closed-box membership.
  bool contains(const Point3& p) const {
    return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y && p.z >= lo.z &&
           p.z <= hi.z;
  }

  Point3 extent() const { return {hi.x - lo.x, hi.y - lo.y, hi.z - lo.z}; }
  Point3 center() const {
    return {0.5 * (lo.x + hi.x), 0.5 * (lo.y + hi.y), 0.5 * (lo.z + hi.z)};
  }

  friend bool operator==(const Box&, const Box&) = default;
};

}  // namespace oceansrc
