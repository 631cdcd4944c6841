#include "pwdg/planewave.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pwdg {
namespace {

constexpr Complex kImag{0.0, 1.0};

// (exp(i y) - 1) / (i y), the normalized segment phase factor, written as
// exp(i y / 2) * sinc(y / 2) to avoid the cancellation in exp(i y) - 1 for
// small |y|.  Below the series threshold the truncation error is ~1e-28.
Complex phase_average(double y) {
  const double half = 0.5 * y;
  double sinc;
  if (std::abs(half) < 1e-4) {
    const double h2 = half * half;
    sinc = 1.0 - h2 / 6.0 + h2 * h2 / 120.0;
  } else {
    sinc = std::sin(half) / half;
  }
  return std::polar(sinc, half);
}

}  // namespace

DirectionSet make_directions(int p, double theta0) {
  if (p < 1) throw std::invalid_argument("make_directions: need p >= 1");
  DirectionSet set;
  set.p = p;
  set.theta0 = theta0;
  set.directions.resize(static_cast<std::size_t>(p));
  for (int j = 0; j < p; ++j) {
    const double angle = 2.0 * std::numbers::pi * j / p + theta0;
    set.directions[static_cast<std::size_t>(j)] = {std::cos(angle), std::sin(angle)};
  }
  return set;
}

PlaneWaveBasis make_basis(double k, Point2 center, int p, double theta0) {
  if (!(k > 0.0)) throw std::invalid_argument("make_basis: need k > 0");
  PlaneWaveBasis basis;
  basis.k = k;
  basis.center = center;
  basis.directions = make_directions(p, theta0);
  return basis;
}

Eigen::VectorXcd eval_basis(const PlaneWaveBasis& basis, Point2 x) {
  const Point2 r = x - basis.center;
  Eigen::VectorXcd values(basis.size());
  for (int j = 0; j < basis.size(); ++j) {
    const Point2 d = basis.directions.directions[static_cast<std::size_t>(j)];
    values(j) = std::polar(1.0, basis.k * dot(d, r));
  }
  return values;
}

Eigen::MatrixXcd eval_basis_gradient(const PlaneWaveBasis& basis, Point2 x) {
  const Eigen::VectorXcd values = eval_basis(basis, x);
  Eigen::MatrixXcd grad(2, basis.size());
  for (int j = 0; j < basis.size(); ++j) {
    const Point2 d = basis.directions.directions[static_cast<std::size_t>(j)];
    const Complex factor = kImag * basis.k * values(j);
    grad(0, j) = factor * d.x;
    grad(1, j) = factor * d.y;
  }
  return grad;
}

Complex segment_exp_integral(double k, Point2 w, Point2 a, Point2 b, Point2 center) {
  const double length = distance(a, b);
  if (!(length > 0.0))
    throw std::invalid_argument("segment_exp_integral: degenerate segment");
  // With x(t) = a + t (b - a):
  //   int = |b-a| exp(i k w.(a-c)) * (exp(i y) - 1)/(i y),  y = k w.(b-a).
  const double y = k * dot(w, b - a);
  return length * std::polar(1.0, k * dot(w, a - center)) * phase_average(y);
}

HermitianMatrix::HermitianMatrix(Eigen::MatrixXcd m) : mat_(std::move(m)) {
  if (mat_.rows() != mat_.cols())
    throw std::invalid_argument("HermitianMatrix: matrix must be square");
  const double scale = mat_.cwiseAbs().maxCoeff();
  const double defect = (mat_ - mat_.adjoint()).cwiseAbs().maxCoeff();
  if (defect > 1e-11 * std::max(scale, 1e-300))
    throw std::invalid_argument("HermitianMatrix: matrix is not Hermitian");
  mat_ = 0.5 * (mat_ + mat_.adjoint().eval());
}

HermitianMatrix local_mass_matrix(const ConvexPolygon& element,
                                  const PlaneWaveBasis& basis) {
  validate_polygon(element);
  const PolygonMetrics metrics = polygon_metrics(element);
  const int p = basis.size();
  const auto& dirs = basis.directions.directions;
  Eigen::MatrixXcd m(p, p);
  const std::size_t nv = element.vertices.size();
  for (int row = 0; row < p; ++row) {
    m(row, row) = metrics.area;
    for (int col = row + 1; col < p; ++col) {
      // Off-diagonal entry: area integral of exp(i k w.(x-c)), w = d_col -
      // d_row, turned into boundary terms by the divergence theorem:
      //   int_K = sum_F  -i (w . n_F) / (k |w|^2) * int_F exp(i k w.(x-c)) ds.
      const Point2 w = dirs[static_cast<std::size_t>(col)] - dirs[static_cast<std::size_t>(row)];
      const double w2 = dot(w, w);
      Complex entry = 0.0;
      for (std::size_t i = 0; i < nv; ++i) {
        const Point2 a = element.vertices[i];
        const Point2 b = element.vertices[(i + 1) % nv];
        const Point2 t = (b - a) / distance(a, b);
        const Point2 n{t.y, -t.x};
        entry += -kImag * dot(w, n) / (basis.k * w2) *
                 segment_exp_integral(basis.k, w, a, b, basis.center);
      }
      m(row, col) = entry;
      m(col, row) = std::conj(entry);
    }
  }
  return HermitianMatrix(std::move(m));
}

}  // namespace pwdg
