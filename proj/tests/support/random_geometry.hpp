#pragma once

// Randomized geometry for comparison tests: convex polygons sampled on a
// circle (distinct sorted angles keep them strictly convex), hand-built
// one- and two-element conforming meshes over them, and a converter to the
// plain structs the quadrature reference assembler consumes.

#include <random>
#include <vector>

#include "pwdg/geometry.hpp"
#include "pwdg/mesh.hpp"
#include "support/flux_oracle.hpp"

namespace testsupport {

inline std::vector<pwdg::Point2> random_circle_polygon(std::mt19937_64& rng,
                                                       int n_vertices) {
  std::uniform_real_distribution<double> radius_dist(0.2, 0.7);
  std::uniform_real_distribution<double> angle_dist(0.0, 2 * 3.14159265358979323846);
  const double radius = radius_dist(rng);
  std::vector<double> angles(n_vertices);
  for (bool ok = false; !ok;) {
    for (double& a : angles) a = angle_dist(rng);
    std::sort(angles.begin(), angles.end());
    ok = true;
    for (int i = 0; i < n_vertices; ++i) {
      const double gap = (i + 1 < n_vertices)
                             ? angles[i + 1] - angles[i]
                             : angles[0] + 2 * 3.14159265358979323846 - angles[i];
      if (gap < 0.25) ok = false;
    }
  }
  std::vector<pwdg::Point2> vertices;
  for (double a : angles)
    vertices.push_back({0.5 + radius * std::cos(a), 0.5 + radius * std::sin(a)});
  return vertices;
}

inline pwdg::Edge oriented_edge(pwdg::Point2 a, pwdg::Point2 b, int left,
                                int right) {
  pwdg::Edge e;
  e.a = a;
  e.b = b;
  e.left = left;
  e.right = right;
  const pwdg::Point2 t = b - a;
  e.normal = pwdg::Point2{t.y, -t.x} / pwdg::norm(t);
  return e;
}

inline pwdg::Mesh single_element_mesh(const std::vector<pwdg::Point2>& v) {
  pwdg::Mesh mesh;
  mesh.kind = pwdg::MeshKind::poly;
  mesh.elements.push_back({v});
  mesh.element_edges.emplace_back();
  const int n = static_cast<int>(v.size());
  for (int i = 0; i < n; ++i) {
    mesh.element_edges[0].push_back(static_cast<int>(mesh.edges.size()));
    mesh.edges.push_back(oriented_edge(v[i], v[(i + 1) % n], 0, -1));
  }
  return mesh;
}

// Splits the polygon along the chord v[0] -- v[n/2] into two convex
// elements sharing one interior edge.  Needs at least 4 vertices.
inline pwdg::Mesh chord_split_mesh(const std::vector<pwdg::Point2>& v) {
  const int n = static_cast<int>(v.size());
  const int s = n / 2;
  pwdg::Mesh mesh;
  mesh.kind = pwdg::MeshKind::poly;
  std::vector<pwdg::Point2> first(v.begin(), v.begin() + s + 1);
  std::vector<pwdg::Point2> second(v.begin() + s, v.end());
  second.push_back(v[0]);
  mesh.elements.push_back({first});
  mesh.elements.push_back({second});
  mesh.element_edges.assign(2, {});
  for (int i = 0; i < s; ++i) {
    mesh.element_edges[0].push_back(static_cast<int>(mesh.edges.size()));
    mesh.edges.push_back(oriented_edge(v[i], v[i + 1], 0, -1));
  }
  const int chord = static_cast<int>(mesh.edges.size());
  mesh.element_edges[0].push_back(chord);
  mesh.element_edges[1].push_back(chord);
  mesh.edges.push_back(oriented_edge(v[s], v[0], 0, 1));
  for (int i = s; i < n; ++i) {
    mesh.element_edges[1].push_back(static_cast<int>(mesh.edges.size()));
    mesh.edges.push_back(oriented_edge(v[i], v[(i + 1) % n], 1, -1));
  }
  return mesh;
}

inline oracle::FluxMesh to_flux_mesh(const pwdg::Mesh& mesh) {
  oracle::FluxMesh out;
  for (const pwdg::ConvexPolygon& el : mesh.elements) {
    std::vector<oracle::Pt> loop;
    for (pwdg::Point2 p : el.vertices) loop.push_back({p.x, p.y});
    out.centers.push_back(oracle::shoelace_centroid(loop));
    out.elements.push_back(std::move(loop));
  }
  for (const pwdg::Edge& e : mesh.edges)
    out.edges.push_back({{e.a.x, e.a.y},
                         {e.b.x, e.b.y},
                         e.left,
                         e.right,
                         {e.normal.x, e.normal.y}});
  return out;
}

}  // namespace testsupport
