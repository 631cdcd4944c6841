#pragma once

#include <complex>
#include <functional>

#include "pwdg/fields.hpp"
#include "pwdg/geometry.hpp"
#include "pwdg/mesh.hpp"

namespace pwdg {

// Bessel functions of the first and second kind, orders 0 and 1.
// Implemented from scratch (power/logarithmic series up to x = 17, large-
// argument asymptotics beyond, both evaluated in extended precision) with a
// relative accuracy target of 1e-10 over (0, 200] measured against the
// amplitude envelope sqrt(2/(pi x)).  bessel_j* reject x < 0, bessel_y*
// reject x <= 0.
double bessel_j0(double x);
double bessel_j1(double x);
double bessel_y0(double x);
double bessel_y1(double x);

// Outgoing cylindrical waves H^(1)_nu = J_nu + i Y_nu.
std::complex<double> hankel1_0(double x);
std::complex<double> hankel1_1(double x);

// Reference field u(x) = H^(1)_0(k |x - source|): an outgoing line-source
// wave that solves the homogeneous Helmholtz equation away from the source.
// The default source sits left of the unit square, so u is smooth on it.
struct ExactSolution {
  double k = 0.0;
  Point2 source{-0.25, 0.0};
};

// Rejects evaluation at the source point.
std::complex<double> exact_value(const ExactSolution& sol, Point2 x);
Eigen::Vector2cd exact_gradient(const ExactSolution& sol, Point2 x);
FieldWithGradient exact_field(const ExactSolution& sol);

// || u_h - reference ||_L2 over the mesh, where u_h is the discrete field
// with the given coefficients (element-major blocks of p plane waves with
// wavenumber k and direction offset theta0).  Each element is integrated by
// a centroid fan of triangles under a tensor Gauss rule whose order tracks
// k * diam(K); the order is doubled until the result stabilizes.
double l2_error(const Mesh& mesh, double k, double theta0,
                const Eigen::VectorXcd& coefficients,
                const std::function<std::complex<double>(Point2)>& reference);

// || f ||_L2 over the mesh by the same quadrature (oscillation resolved for
// |f| varying on the scale 1/k).
double l2_norm(const Mesh& mesh, double k,
               const std::function<std::complex<double>(Point2)>& f);

// l2_error / l2_norm(reference); the figure reported by the experiments.
double relative_l2_error(const Mesh& mesh, double k, double theta0,
                         const Eigen::VectorXcd& coefficients,
                         const std::function<std::complex<double>(Point2)>& reference);

}  // namespace pwdg
