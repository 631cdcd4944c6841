#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pwdg/geometry.hpp"

namespace pwdg {

// Oriented mesh edge.  `left` is the element whose counterclockwise
// traversal runs a -> b; `normal` is the unit outward normal of that
// element.  Boundary edges have right == -1.
struct Edge {
  Point2 a;
  Point2 b;
  int left = -1;
  int right = -1;
  Point2 normal;

  bool is_boundary() const { return right < 0; }
  double length() const { return distance(a, b); }
  Point2 midpoint() const { return 0.5 * (a + b); }
};

enum class MeshKind { quad, tri, poly };

// Conforming mesh of convex elements.  `element_edges[K]` lists the indices
// of the edges on the boundary of element K (each interior edge appears in
// exactly two lists, each boundary edge in exactly one).
struct Mesh {
  MeshKind kind = MeshKind::quad;
  std::vector<ConvexPolygon> elements;
  std::vector<Edge> edges;
  std::vector<std::vector<int>> element_edges;

  int n_elements() const { return static_cast<int>(elements.size()); }
  // Longest element diameter; the usual DG mesh-size parameter.
  double mesh_size() const;
};

// Single regular n-gon centered at the origin with one vertex on the
// positive x-axis, scaled so its diameter (max vertex distance) equals h.
// Returned as a 1-element mesh.  Rejects n < 3 and h <= 0.
Mesh regular_polygon(int n, double h);

// Single axis-aligned rectangle centered at the origin with side ratio
// `aspect` >= 1 (width : height) and diagonal h.  Rejects aspect < 1, h <= 0.
Mesh aniso_rectangle(double aspect, double h);

// Mesh of the unit square (0,1)^2.
//   quad: m x m uniform squares.
//   tri:  the squares split along the SW-NE diagonal (2 m^2 triangles).
//   poly: Lloyd-relaxed Voronoi diagram of m^2 seeded points, clipped to
//         the square; deterministic for a fixed seed.
// Rejects m < 1.
Mesh unit_square_mesh(MeshKind kind, int m, std::uint64_t seed = 1);

// Structural checks: per-element convexity, unit outward normals, interior
// edges consistent between their two elements, boundary edges single-sided.
// When expected_area >= 0, also requires |sum of element areas -
// expected_area| <= 1e-12 * max(1, expected_area).
// Throws std::invalid_argument on the first violation.
void validate_mesh(const Mesh& mesh, double expected_area = -1.0);

// Plain-text mesh format:
//   line 1:              NV NE NEDGE
//   NV lines:            x y
//   NE lines:            nverts v_1 ... v_n        (0-based vertex indices)
//   NEDGE lines:         a b left right            (right == -1 on boundary)
// Normals are recomputed on load; write/read round-trips coordinates
// exactly (shortest round-trip decimal form).
void write_mesh(const Mesh& mesh, const std::string& path);
Mesh read_mesh(const std::string& path);

}  // namespace pwdg
