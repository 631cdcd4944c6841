#include "pwdg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "pwdg/format.hpp"

namespace pwdg {
namespace {

// Vertices closer than this are the same mesh vertex.  Voronoi vertices
// shared by neighbouring cells are recomputed independently per cell and
// agree to ~1e-12; genuine distinct vertices are separated by a few
// percent of the element size, so the gap around this tolerance is wide.
constexpr double kMergeTol = 1e-9;

double canonical(double x) { return x == 0.0 ? 0.0 : x; }

// -------------------------------------------------------------------------
// Topology construction from an indexed cell list.

std::uint64_t undirected_key(int u, int v) {
  const std::uint32_t lo = static_cast<std::uint32_t>(std::min(u, v));
  const std::uint32_t hi = static_cast<std::uint32_t>(std::max(u, v));
  return (static_cast<std::uint64_t>(hi) << 32) | lo;
}

Mesh build_from_cells(MeshKind kind, const std::vector<Point2>& vertices,
                      const std::vector<std::vector<int>>& cells) {
  Mesh mesh;
  mesh.kind = kind;
  mesh.elements.reserve(cells.size());
  mesh.element_edges.resize(cells.size());

  std::unordered_map<std::uint64_t, int> edge_index;
  for (std::size_t cell = 0; cell < cells.size(); ++cell) {
    const auto& idx = cells[cell];
    ConvexPolygon poly;
    poly.vertices.reserve(idx.size());
    for (int i : idx) poly.vertices.push_back(vertices.at(static_cast<std::size_t>(i)));
    mesh.elements.push_back(std::move(poly));

    const std::size_t n = idx.size();
    for (std::size_t i = 0; i < n; ++i) {
      const int u = idx[i];
      const int v = idx[(i + 1) % n];
      const std::uint64_t key = undirected_key(u, v);
      auto it = edge_index.find(key);
      if (it == edge_index.end()) {
        Edge e;
        e.a = vertices[static_cast<std::size_t>(u)];
        e.b = vertices[static_cast<std::size_t>(v)];
        e.left = static_cast<int>(cell);
        const Point2 t = (e.b - e.a) / distance(e.a, e.b);
        e.normal = {t.y, -t.x};
        edge_index.emplace(key, static_cast<int>(mesh.edges.size()));
        mesh.element_edges[cell].push_back(static_cast<int>(mesh.edges.size()));
        mesh.edges.push_back(e);
      } else {
        Edge& e = mesh.edges[static_cast<std::size_t>(it->second)];
        if (e.right >= 0)
          throw std::invalid_argument("mesh: edge shared by more than two elements");
        e.right = static_cast<int>(cell);
        mesh.element_edges[cell].push_back(it->second);
      }
    }
  }
  return mesh;
}

// -------------------------------------------------------------------------
// Voronoi machinery for the polygonal mesh.

// Keep the part of `poly` with dot(x, nrm) <= c (Sutherland-Hodgman).
std::vector<Point2> clip_half_plane(const std::vector<Point2>& poly, Point2 nrm,
                                    double c) {
  std::vector<Point2> out;
  out.reserve(poly.size() + 1);
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 p = poly[i];
    const Point2 q = poly[(i + 1) % n];
    const double dp = dot(p, nrm) - c;
    const double dq = dot(q, nrm) - c;
    if (dp <= 0.0) out.push_back(p);
    if ((dp <= 0.0) != (dq <= 0.0)) {
      const double t = dp / (dp - dq);
      out.push_back(p + t * (q - p));
    }
  }
  return out;
}

// Voronoi cell of seeds[i] clipped to the unit square.
std::vector<Point2> voronoi_cell(const std::vector<Point2>& seeds, std::size_t i) {
  std::vector<Point2> cell = {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}};
  const Point2 si = seeds[i];
  for (std::size_t j = 0; j < seeds.size(); ++j) {
    if (j == i) continue;
    const Point2 sj = seeds[j];
    // Keep the si side of the perpendicular bisector of (si, sj).
    const Point2 nrm = sj - si;
    const double c = 0.5 * (dot(sj, sj) - dot(si, si));
    cell = clip_half_plane(cell, nrm, c);
    if (cell.size() < 3) return {};
  }
  return cell;
}

Point2 polygon_centroid(const std::vector<Point2>& v) {
  ConvexPolygon poly;
  poly.vertices = v;
  return polygon_metrics(poly).centroid;
}

// Strip consecutive near-duplicate vertices and collinear kinks left over
// from clipping, so every retained corner is a genuine one.
std::vector<Point2> tidy_cell(std::vector<Point2> v) {
  std::vector<Point2> out;
  for (const Point2& p : v) {
    if (!out.empty() && distance(out.back(), p) < kMergeTol) continue;
    out.push_back(p);
  }
  while (out.size() > 1 && distance(out.front(), out.back()) < kMergeTol)
    out.pop_back();
  if (out.size() < 3) return out;
  std::vector<Point2> flat;
  const std::size_t n = out.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = out[i] - out[(i + n - 1) % n];
    const Point2 b = out[(i + 1) % n] - out[i];
    if (std::abs(cross(a, b)) <= 1e-12 * norm(a) * norm(b)) continue;
    flat.push_back(out[i]);
  }
  return flat;
}

// Deduplicates vertex coordinates across cells via a uniform grid hash,
// so that shared Voronoi vertices get a single global index.
class VertexMerger {
 public:
  int index_of(Point2 p) {
    const long long ix = static_cast<long long>(std::floor(p.x / kCell));
    const long long iy = static_cast<long long>(std::floor(p.y / kCell));
    for (long long dx = -1; dx <= 1; ++dx)
      for (long long dy = -1; dy <= 1; ++dy) {
        auto it = grid_.find(key(ix + dx, iy + dy));
        if (it == grid_.end()) continue;
        for (int id : it->second)
          if (distance(vertices_[static_cast<std::size_t>(id)], p) <= kMergeTol)
            return id;
      }
    const int id = static_cast<int>(vertices_.size());
    vertices_.push_back(p);
    grid_[key(ix, iy)].push_back(id);
    return id;
  }

  const std::vector<Point2>& vertices() const { return vertices_; }

 private:
  static constexpr double kCell = 1e-6;
  static std::uint64_t key(long long ix, long long iy) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(ix)) << 32) |
           static_cast<std::uint32_t>(iy);
  }
  std::vector<Point2> vertices_;
  std::unordered_map<std::uint64_t, std::vector<int>> grid_;
};

Mesh voronoi_mesh(int m, std::uint64_t seed) {
  const std::size_t count = static_cast<std::size_t>(m) * static_cast<std::size_t>(m);
  std::mt19937_64 rng(seed);
  // Explicit 53-bit mapping instead of std::uniform_real_distribution, whose
  // output is not pinned down by the standard across implementations.
  auto uniform01 = [&rng]() {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
  };
  std::vector<Point2> seeds(count);
  for (Point2& s : seeds) {
    s.x = uniform01();
    s.y = uniform01();
  }

  // Lloyd relaxation: move each seed to its cell centroid.  A fixed
  // iteration count keeps the construction deterministic.
  constexpr int kLloydIterations = 20;
  for (int it = 0; it < kLloydIterations; ++it) {
    std::vector<Point2> next(seeds.size());
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      const std::vector<Point2> cell = voronoi_cell(seeds, i);
      next[i] = cell.size() >= 3 ? polygon_centroid(cell) : seeds[i];
    }
    seeds.swap(next);
  }

  VertexMerger merger;
  std::vector<std::vector<int>> cells(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<Point2> cell = tidy_cell(voronoi_cell(seeds, i));
    if (cell.size() < 3)
      throw std::runtime_error("voronoi mesh: degenerate cell; try another seed");
    for (Point2& p : cell) {
      // Snap wall vertices so neighbouring cells agree on them exactly.
      if (std::abs(p.x) < kMergeTol) p.x = 0.0;
      if (std::abs(p.x - 1.0) < kMergeTol) p.x = 1.0;
      if (std::abs(p.y) < kMergeTol) p.y = 0.0;
      if (std::abs(p.y - 1.0) < kMergeTol) p.y = 1.0;
      p.x = canonical(p.x);
      p.y = canonical(p.y);
    }
    auto& idx = cells[i];
    for (const Point2& p : cell) {
      const int id = merger.index_of(p);
      if (idx.empty() || idx.back() != id) idx.push_back(id);
    }
    while (idx.size() > 1 && idx.front() == idx.back()) idx.pop_back();
    if (idx.size() < 3)
      throw std::runtime_error("voronoi mesh: cell collapsed during merge");
  }
  return build_from_cells(MeshKind::poly, merger.vertices(), cells);
}

}  // namespace

double Mesh::mesh_size() const {
  double h = 0.0;
  for (const ConvexPolygon& e : elements)
    h = std::max(h, polygon_metrics(e).diameter);
  return h;
}

Mesh regular_polygon(int n, double h) {
  if (n < 3) throw std::invalid_argument("regular_polygon: need n >= 3");
  if (!(h > 0.0)) throw std::invalid_argument("regular_polygon: need h > 0");
  // Diameter of a regular n-gon with circumradius R: 2R for even n,
  // 2R cos(pi/(2n)) for odd n (opposite vertex vs. farthest vertex pair).
  const double pi = std::numbers::pi;
  const double radius = (n % 2 == 0) ? 0.5 * h : h / (2.0 * std::cos(pi / (2.0 * n)));
  std::vector<Point2> vertices(static_cast<std::size_t>(n));
  std::vector<int> cell(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double angle = 2.0 * pi * i / n;
    vertices[static_cast<std::size_t>(i)] = {canonical(radius * std::cos(angle)),
                                             canonical(radius * std::sin(angle))};
    cell[static_cast<std::size_t>(i)] = i;
  }
  return build_from_cells(MeshKind::poly, vertices, {cell});
}

Mesh aniso_rectangle(double aspect, double h) {
  if (!(aspect >= 1.0)) throw std::invalid_argument("aniso_rectangle: need aspect >= 1");
  if (!(h > 0.0)) throw std::invalid_argument("aniso_rectangle: need h > 0");
  const double height = h / std::sqrt(1.0 + aspect * aspect);
  const double width = aspect * height;
  const double hw = 0.5 * width, hh = 0.5 * height;
  const std::vector<Point2> vertices = {
      {-hw, -hh}, {hw, -hh}, {hw, hh}, {-hw, hh}};
  return build_from_cells(MeshKind::poly, vertices, {{0, 1, 2, 3}});
}

Mesh unit_square_mesh(MeshKind kind, int m, std::uint64_t seed) {
  if (m < 1) throw std::invalid_argument("unit_square_mesh: need m >= 1");
  if (kind == MeshKind::poly) return voronoi_mesh(m, seed);

  const int nv = m + 1;
  std::vector<Point2> vertices(static_cast<std::size_t>(nv) * nv);
  for (int j = 0; j < nv; ++j)
    for (int i = 0; i < nv; ++i)
      vertices[static_cast<std::size_t>(j) * nv + i] = {
          static_cast<double>(i) / m, static_cast<double>(j) / m};

  std::vector<std::vector<int>> cells;
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) {
      const int sw = j * nv + i;
      const int se = sw + 1;
      const int ne = se + nv;
      const int nw = sw + nv;
      if (kind == MeshKind::quad) {
        cells.push_back({sw, se, ne, nw});
      } else {
        // Split along the SW-NE diagonal.
        cells.push_back({sw, se, ne});
        cells.push_back({sw, ne, nw});
      }
    }
  return build_from_cells(kind, vertices, cells);
}

void validate_mesh(const Mesh& mesh, double expected_area) {
  if (mesh.elements.empty()) throw std::invalid_argument("mesh: no elements");
  if (mesh.element_edges.size() != mesh.elements.size())
    throw std::invalid_argument("mesh: element_edges size mismatch");

  double total_area = 0.0;
  for (const ConvexPolygon& e : mesh.elements) {
    validate_polygon(e);
    total_area += polygon_metrics(e).area;
  }

  const int n_elem = mesh.n_elements();
  std::vector<int> references(mesh.edges.size(), 0);
  for (int cell = 0; cell < n_elem; ++cell) {
    const auto& poly = mesh.elements[static_cast<std::size_t>(cell)].vertices;
    const auto& eids = mesh.element_edges[static_cast<std::size_t>(cell)];
    if (eids.size() != poly.size())
      throw std::invalid_argument("mesh: element " + std::to_string(cell) +
                                  " edge count != vertex count");
    for (int eid : eids) {
      if (eid < 0 || eid >= static_cast<int>(mesh.edges.size()))
        throw std::invalid_argument("mesh: edge index out of range");
      ++references[static_cast<std::size_t>(eid)];
      const Edge& e = mesh.edges[static_cast<std::size_t>(eid)];
      if (e.left != cell && e.right != cell)
        throw std::invalid_argument("mesh: element lists an edge it does not own");
      // The edge endpoints must be consecutive vertices of the element, in
      // traversal order for the left element and reversed for the right.
      const std::size_t n = poly.size();
      bool found = false;
      for (std::size_t i = 0; i < n && !found; ++i) {
        const Point2& p = poly[i];
        const Point2& q = poly[(i + 1) % n];
        if (e.left == cell)
          found = distance(p, e.a) == 0.0 && distance(q, e.b) == 0.0;
        else
          found = distance(p, e.b) == 0.0 && distance(q, e.a) == 0.0;
      }
      if (!found)
        throw std::invalid_argument(
            "mesh: edge endpoints are not consecutive vertices of element " +
            std::to_string(cell));
    }
  }

  for (std::size_t i = 0; i < mesh.edges.size(); ++i) {
    const Edge& e = mesh.edges[i];
    const int expected_refs = e.is_boundary() ? 1 : 2;
    if (references[i] != expected_refs)
      throw std::invalid_argument("mesh: edge " + std::to_string(i) +
                                  " referenced " + std::to_string(references[i]) +
                                  " times, expected " + std::to_string(expected_refs));
    if (e.left < 0 || e.left >= n_elem || (!e.is_boundary() && e.right >= n_elem))
      throw std::invalid_argument("mesh: edge adjacency out of range");
    const Point2 t = e.b - e.a;
    const double len = norm(t);
    if (!(len > 0.0)) throw std::invalid_argument("mesh: zero-length edge");
    if (std::abs(norm(e.normal) - 1.0) > 1e-12 ||
        std::abs(dot(e.normal, t)) > 1e-12 * len)
      throw std::invalid_argument("mesh: edge normal not unit or not perpendicular");
    const Point2 centroid = polygon_metrics(mesh.elements[static_cast<std::size_t>(e.left)]).centroid;
    if (!(dot(e.normal, e.midpoint() - centroid) > 0.0))
      throw std::invalid_argument("mesh: edge normal does not point out of left element");
  }

  if (expected_area >= 0.0 &&
      std::abs(total_area - expected_area) > 1e-12 * std::max(1.0, expected_area))
    throw std::invalid_argument("mesh: element areas sum to " +
                                std::to_string(total_area) + ", expected " +
                                std::to_string(expected_area));
}

// -------------------------------------------------------------------------
// Plain-text serialization.

namespace {

struct BitKey {
  std::uint64_t x, y;
  bool operator==(const BitKey&) const = default;
};

struct BitKeyHash {
  std::size_t operator()(const BitKey& k) const {
    return std::hash<std::uint64_t>()(k.x * 0x9e3779b97f4a7c15ull ^ k.y);
  }
};

BitKey bit_key(Point2 p) {
  BitKey k;
  const double cx = canonical(p.x), cy = canonical(p.y);
  std::memcpy(&k.x, &cx, sizeof(double));
  std::memcpy(&k.y, &cy, sizeof(double));
  return k;
}

}  // namespace

void write_mesh(const Mesh& mesh, const std::string& path) {
  // Rebuild the global vertex table; element/edge coordinates are exact
  // copies of it, so bit-level identity is the right equality here.
  std::unordered_map<BitKey, int, BitKeyHash> index;
  std::vector<Point2> vertices;
  auto vertex_id = [&](Point2 p) {
    const auto [it, inserted] =
        index.try_emplace(bit_key(p), static_cast<int>(vertices.size()));
    if (inserted) vertices.push_back({canonical(p.x), canonical(p.y)});
    return it->second;
  };

  std::vector<std::vector<int>> cells(static_cast<std::size_t>(mesh.n_elements()));
  for (int k = 0; k < mesh.n_elements(); ++k)
    for (const Point2& p : mesh.elements[static_cast<std::size_t>(k)].vertices)
      cells[static_cast<std::size_t>(k)].push_back(vertex_id(p));

  std::string out;
  out += format_int(static_cast<long long>(vertices.size())) + " " +
         format_int(mesh.n_elements()) + " " +
         format_int(static_cast<long long>(mesh.edges.size())) + "\n";
  for (const Point2& p : vertices)
    out += format_double(canonical(p.x)) + " " + format_double(canonical(p.y)) + "\n";
  for (const auto& cell : cells) {
    out += format_int(static_cast<long long>(cell.size()));
    for (int v : cell) out += " " + format_int(v);
    out += "\n";
  }
  for (const Edge& e : mesh.edges) {
    auto ia = index.find(bit_key(e.a));
    auto ib = index.find(bit_key(e.b));
    if (ia == index.end() || ib == index.end())
      throw std::invalid_argument("write_mesh: edge endpoint is not an element vertex");
    out += format_int(ia->second) + " " + format_int(ib->second) + " " +
           format_int(e.left) + " " + format_int(e.right) + "\n";
  }

  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("write_mesh: cannot open " + path);
  file << out;
  if (!file) throw std::runtime_error("write_mesh: write failed for " + path);
}

Mesh read_mesh(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw std::runtime_error("read_mesh: cannot open " + path);
  auto fail = [&](const std::string& what) -> std::runtime_error {
    return std::runtime_error("read_mesh: " + path + ": " + what);
  };

  long long nv = 0, ne = 0, nedge = 0;
  if (!(file >> nv >> ne >> nedge)) throw fail("bad header line");
  if (nv < 3 || ne < 1 || nedge < 3) throw fail("implausible header counts");

  std::vector<Point2> vertices(static_cast<std::size_t>(nv));
  for (auto& p : vertices)
    if (!(file >> p.x >> p.y)) throw fail("bad vertex line");

  std::vector<std::vector<int>> cells(static_cast<std::size_t>(ne));
  for (auto& cell : cells) {
    int count = 0;
    if (!(file >> count) || count < 3) throw fail("bad element line");
    cell.resize(static_cast<std::size_t>(count));
    for (int& v : cell) {
      if (!(file >> v)) throw fail("bad element vertex index");
      if (v < 0 || v >= nv) throw fail("element vertex index out of range");
    }
  }

  // Topology (edge list, normals) is rebuilt from the cells; the stored
  // edge table is then cross-checked against it.
  Mesh mesh = build_from_cells(MeshKind::poly, vertices, cells);
  if (static_cast<long long>(mesh.edges.size()) != nedge)
    throw fail("edge count disagrees with element connectivity");

  std::unordered_map<std::uint64_t, const Edge*> rebuilt;
  std::unordered_map<const Edge*, int> seen;
  std::unordered_map<std::uint64_t, std::pair<int, int>> endpoint_ids;
  {
    std::unordered_map<BitKey, int, BitKeyHash> vid;
    for (long long i = 0; i < nv; ++i)
      vid.emplace(bit_key(vertices[static_cast<std::size_t>(i)]), static_cast<int>(i));
    for (const Edge& e : mesh.edges) {
      const int ia = vid.at(bit_key(e.a));
      const int ib = vid.at(bit_key(e.b));
      rebuilt[undirected_key(ia, ib)] = &e;
      endpoint_ids[undirected_key(ia, ib)] = {ia, ib};
    }
  }
  for (long long i = 0; i < nedge; ++i) {
    int a = 0, b = 0, left = 0, right = 0;
    if (!(file >> a >> b >> left >> right)) throw fail("bad edge line");
    if (a < 0 || a >= nv || b < 0 || b >= nv) throw fail("edge vertex index out of range");
    auto it = rebuilt.find(undirected_key(a, b));
    if (it == rebuilt.end()) throw fail("edge not present in element connectivity");
    const Edge* e = it->second;
    if (++seen[e] > 1) throw fail("duplicate edge record");
    // Accept either orientation of the stored record, as long as the
    // left/right roles are consistent with it.
    const auto [ra, rb] = endpoint_ids.at(undirected_key(a, b));
    const bool forward = (a == ra && b == rb);
    const int want_left = forward ? e->left : e->right;
    const int want_right = forward ? e->right : e->left;
    if (left != want_left || right != want_right)
      throw fail("edge adjacency disagrees with element connectivity");
  }

  validate_mesh(mesh);
  return mesh;
}

}  // namespace pwdg
