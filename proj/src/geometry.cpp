#include "pwdg/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace pwdg {

PolygonMetrics polygon_metrics(const ConvexPolygon& poly) {
  const auto& v = poly.vertices;
  const std::size_t n = v.size();
  if (n < 3) throw std::invalid_argument("polygon_metrics: need at least 3 vertices");

  // Shoelace about v[0]: summing cross products of vertex differences keeps
  // the partial terms O(h^2) instead of O(|x|^2), so the 1e-12 area budget
  // of a whole mesh survives elements far from the origin.
  double twice_area = 0.0;
  double cx = 0.0, cy = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const Point2 a = v[i] - v[0];
    const Point2 b = v[i + 1] - v[0];
    const double c = cross(a, b);
    twice_area += c;
    cx += c * (a.x + b.x);
    cy += c * (a.y + b.y);
  }
  const double area = 0.5 * twice_area;

  PolygonMetrics m;
  m.area = area;
  // Centroid of the fan, shifted back; the v[0] contribution to each
  // triangle centroid is (c/3)*v0 which sums to (2A)*v0 overall.
  m.centroid = {v[0].x + cx / (3.0 * twice_area), v[0].y + cy / (3.0 * twice_area)};

  double d2 = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const Point2 d = v[j] - v[i];
      d2 = std::max(d2, dot(d, d));
    }
  m.diameter = std::sqrt(d2);
  return m;
}

bool is_convex_ccw(const std::vector<Point2>& vertices) {
  const std::size_t n = vertices.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = vertices[(i + 1) % n] - vertices[i];
    const Point2 b = vertices[(i + 2) % n] - vertices[(i + 1) % n];
    if (!(cross(a, b) > 0.0)) return false;
  }
  return true;
}

void validate_polygon(const ConvexPolygon& poly) {
  const auto& v = poly.vertices;
  if (v.size() < 3)
    throw std::invalid_argument("polygon: need at least 3 vertices, got " +
                                std::to_string(v.size()));
  for (const Point2& p : v)
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
      throw std::invalid_argument("polygon: non-finite vertex coordinate");
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i)
    if (distance(v[i], v[(i + 1) % n]) == 0.0)
      throw std::invalid_argument("polygon: repeated consecutive vertex " +
                                  std::to_string(i));
  if (!is_convex_ccw(v))
    throw std::invalid_argument(
        "polygon: vertices must be strictly convex in counterclockwise order");
}

}  // namespace pwdg
