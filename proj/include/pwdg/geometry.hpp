#pragma once

#include <cmath>
#include <vector>

namespace pwdg {

// Planar point / vector with the handful of operations the rest of the
// library needs.  Kept as a plain aggregate so meshes stay trivially
// copyable and serializable.
struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
inline Point2 operator/(Point2 a, double s) { return {a.x / s, a.y / s}; }

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
// z-component of the 3D cross product; positive when b lies to the left of a.
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }

// Simple convex polygon, vertices in counterclockwise order, no repeats.
// Use validate_polygon() to enforce the invariants after construction.
struct ConvexPolygon {
  std::vector<Point2> vertices;
};

struct PolygonMetrics {
  double area = 0.0;        // positive for a counterclockwise polygon
  Point2 centroid;          // area centroid
  double diameter = 0.0;    // max pairwise vertex distance
};

// Shoelace area/centroid (computed about the first vertex for accuracy far
// from the origin) plus the diameter.  Requires at least 3 vertices.
PolygonMetrics polygon_metrics(const ConvexPolygon& poly);

// Throws std::invalid_argument unless the polygon has >= 3 distinct,
// finite vertices in strictly convex counterclockwise position.
void validate_polygon(const ConvexPolygon& poly);

// True iff every cross product of consecutive edge vectors is positive
// (strict convexity, counterclockwise orientation).
bool is_convex_ccw(const std::vector<Point2>& vertices);

}  // namespace pwdg
