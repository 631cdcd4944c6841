#include "pwdg/assembly.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>
#include <vector>

#include "pwdg/format.hpp"
#include "pwdg/quadrature.hpp"

namespace pwdg {
namespace {

constexpr Complex kImag{0.0, 1.0};

// One edge's contribution couples every (trial element, test element) pair
// among its neighbours.  For trial wave j of element Ta (centroid ca,
// outward normal na on this edge) against test wave l of element Tb (cb,
// nb), eliminating the gradients of plane waves from the flux form leaves
//
//   (k/2) [ -(d_j + d_l) . nb + (d_j . na)(d_l . nb) + na . nb ]
//     * int_F phi_j^{Ta} conj(phi_l^{Tb}) ds,
//
// which covers the interior average/jump terms, the penalty terms, and (with
// Ta = Tb and na = nb) the boundary terms alike.  The remaining integral is
//   exp(i k d_l . (cb - ca)) * int_F exp(i k (d_j - d_l) . (x - ca)) ds,
// evaluated in closed form.
void accumulate_edge_pair(Eigen::MatrixXcd& a, double k,
                          const std::vector<Point2>& dirs, const Edge& edge,
                          int trial_elem, Point2 trial_center, Point2 trial_normal,
                          int test_elem, Point2 test_center, Point2 test_normal) {
  const int p = static_cast<int>(dirs.size());
  const Eigen::Index row0 = static_cast<Eigen::Index>(test_elem) * p;
  const Eigen::Index col0 = static_cast<Eigen::Index>(trial_elem) * p;
  for (int l = 0; l < p; ++l) {
    const Point2 dl = dirs[static_cast<std::size_t>(l)];
    const Complex carrier =
        std::polar(1.0, k * dot(dl, test_center - trial_center));
    for (int j = 0; j < p; ++j) {
      const Point2 dj = dirs[static_cast<std::size_t>(j)];
      const double coupling =
          0.5 * k *
          (-(dot(dj, test_normal) + dot(dl, test_normal)) +
           dot(dj, trial_normal) * dot(dl, test_normal) +
           dot(trial_normal, test_normal));
      const Complex integral =
          carrier * segment_exp_integral(k, dj - dl, edge.a, edge.b, trial_center);
      a(row0 + l, col0 + j) += coupling * integral;
    }
  }
}

}  // namespace

GlobalSystem assemble(const Mesh& mesh, double k, int p, double theta0,
                      const BoundarySource& g) {
  if (!(k > 0.0)) throw std::invalid_argument("assemble: need k > 0");
  if (p < 1) throw std::invalid_argument("assemble: need p >= 1");
  if (!g.eval) throw std::invalid_argument("assemble: boundary source not set");
  const int n_elem = mesh.n_elements();
  if (n_elem == 0) throw std::invalid_argument("assemble: empty mesh");

  const DirectionSet directions = make_directions(p, theta0);
  std::vector<Point2> centroids(static_cast<std::size_t>(n_elem));
  for (int e = 0; e < n_elem; ++e)
    centroids[static_cast<std::size_t>(e)] =
        polygon_metrics(mesh.elements[static_cast<std::size_t>(e)]).centroid;

  GlobalSystem system;
  system.n_elements = n_elem;
  system.block_size = p;
  const Eigen::Index n = static_cast<Eigen::Index>(n_elem) * p;
  system.matrix = Eigen::MatrixXcd::Zero(n, n);
  system.rhs = Eigen::VectorXcd::Zero(n);

  for (const Edge& edge : mesh.edges) {
    const int left = edge.left;
    const Point2 n_left = edge.normal;
    if (edge.is_boundary()) {
      accumulate_edge_pair(system.matrix, k, directions.directions, edge, left,
                           centroids[static_cast<std::size_t>(left)], n_left, left,
                           centroids[static_cast<std::size_t>(left)], n_left);
      continue;
    }
    const int right = edge.right;
    const Point2 n_right = -1.0 * n_left;
    const int elems[2] = {left, right};
    const Point2 normals[2] = {n_left, n_right};
    for (int ta = 0; ta < 2; ++ta)
      for (int tb = 0; tb < 2; ++tb)
        accumulate_edge_pair(system.matrix, k, directions.directions, edge,
                             elems[ta], centroids[static_cast<std::size_t>(elems[ta])],
                             normals[ta], elems[tb],
                             centroids[static_cast<std::size_t>(elems[tb])],
                             normals[tb]);
  }

  // Load vector: for test wave l on the boundary element K,
  //   b[(K, l)] = -(i/2) (1 + d_l . n) int_F g conj(phi_l) ds,
  // with the data integral done by Gauss quadrature resolved against the
  // k-oscillation of both g and the test wave.
  for (const Edge& edge : mesh.edges) {
    if (!edge.is_boundary()) continue;
    const int elem = edge.left;
    const Point2 nrm = edge.normal;
    const Point2 center = centroids[static_cast<std::size_t>(elem)];
    const double length = edge.length();
    const int order = static_cast<int>(std::ceil(k * length)) + 12;
    const GaussRule& rule = gauss_legendre(order);
    const Eigen::Index row0 = static_cast<Eigen::Index>(elem) * p;
    for (int l = 0; l < p; ++l) {
      const Point2 dl = directions.directions[static_cast<std::size_t>(l)];
      Complex integral = 0.0;
      for (int q = 0; q < rule.size(); ++q) {
        const double t = 0.5 * (rule.nodes[static_cast<std::size_t>(q)] + 1.0);
        const Point2 x = edge.a + t * (edge.b - edge.a);
        const Complex test_conj = std::polar(1.0, -k * dot(dl, x - center));
        integral += 0.5 * rule.weights[static_cast<std::size_t>(q)] * length *
                    g.eval(x, nrm) * test_conj;
      }
      system.rhs(row0 + l) += -0.5 * kImag * (1.0 + dot(dl, nrm)) * integral;
    }
  }
  return system;
}

Eigen::MatrixXcd local_block(const GlobalSystem& system, int element) {
  if (element < 0 || element >= system.n_elements)
    throw std::out_of_range("local_block: element index out of range");
  const int p = system.block_size;
  return system.matrix.block(static_cast<Eigen::Index>(element) * p,
                             static_cast<Eigen::Index>(element) * p, p, p);
}

void write_system(const GlobalSystem& system, const std::string& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("write_system: cannot open " + path);
  const Eigen::Index n = system.size();
  std::string out = format_int(n) + " " + format_int(system.block_size) + " " +
                    format_int(system.n_elements) + "\n";
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const Complex v = system.matrix(i, j);
      out += format_double(v.real()) + " " + format_double(v.imag());
      out += (j + 1 == n) ? "\n" : " ";
    }
    if (out.size() > (1u << 20)) {
      file << out;
      out.clear();
    }
  }
  for (Eigen::Index i = 0; i < n; ++i)
    out += format_double(system.rhs(i).real()) + " " +
           format_double(system.rhs(i).imag()) + "\n";
  file << out;
  if (!file) throw std::runtime_error("write_system: write failed for " + path);
}

}  // namespace pwdg
