#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "pwdg/geometry.hpp"

namespace pwdg {

using Complex = std::complex<double>;

// p equispaced unit directions, the j-th at angle 2*pi*j/p + theta0
// (j = 0, ..., p-1).
struct DirectionSet {
  int p = 0;
  double theta0 = 0.0;
  std::vector<Point2> directions;
};

// Rejects p < 1.
DirectionSet make_directions(int p, double theta0 = 0.0);

// Local basis of propagating plane waves on one element:
//   phi_j(x) = exp(i k d_j . (x - center)),  center = element centroid.
// Centering makes every basis function equal to 1 at the centroid, which
// keeps local scaling uniform across the mesh.
struct PlaneWaveBasis {
  double k = 0.0;
  Point2 center;
  DirectionSet directions;

  int size() const { return directions.p; }
};

// Rejects k <= 0.
PlaneWaveBasis make_basis(double k, Point2 center, int p, double theta0 = 0.0);

// Values phi_j(x), j = 0, ..., p-1.
Eigen::VectorXcd eval_basis(const PlaneWaveBasis& basis, Point2 x);

// Gradients grad phi_j(x) = i k d_j phi_j(x); column j holds (d/dx, d/dy).
Eigen::MatrixXcd eval_basis_gradient(const PlaneWaveBasis& basis, Point2 x);

// Closed form of the oscillatory line integral
//   int_[a,b] exp(i k w . (x - center)) ds
// over the straight segment from a to b.  Exact up to rounding for every w,
// including w ~ 0 where the integrand degenerates to a constant; the small
// phase regime is evaluated by series so no accuracy cliff appears at a
// branch switch.  Rejects a == b.
Complex segment_exp_integral(double k, Point2 w, Point2 a, Point2 b, Point2 center);

// Dense Hermitian matrix wrapper; the constructor enforces Hermitian
// symmetry to a small multiple of the machine precision times the norm and
// then symmetrizes exactly.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(Eigen::MatrixXcd m);
  const Eigen::MatrixXcd& mat() const { return mat_; }
  int order() const { return static_cast<int>(mat_.rows()); }

 private:
  Eigen::MatrixXcd mat_;
};

// Element mass (Gram) matrix M[j][l] = int_K phi_l conj(phi_j) dx, by exact
// closed form: the divergence theorem turns the area integral of
// exp(i k w . (x - c)), w = d_l - d_j, into boundary segment integrals, and
// the diagonal (w = 0) is just |K|.  This is the matrix whose conditioning
// measures how close to dependent the local basis is.
HermitianMatrix local_mass_matrix(const ConvexPolygon& element,
                                  const PlaneWaveBasis& basis);

}  // namespace pwdg
