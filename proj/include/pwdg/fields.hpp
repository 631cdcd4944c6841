#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>

#include "pwdg/geometry.hpp"

namespace pwdg {

// A scalar complex field with its gradient, used both as manufactured
// boundary data and as the reference in error measurements.
struct FieldWithGradient {
  std::function<std::complex<double>(Point2)> value;
  std::function<Eigen::Vector2cd(Point2)> gradient;
};

// Boundary datum evaluated at a point together with the outward unit
// normal there; corner points get one value per incident edge.
struct BoundarySource {
  std::function<std::complex<double>(Point2 x, Point2 normal)> eval;
};

// Propagating plane wave exp(i k d . x) with |d| = 1.
FieldWithGradient plane_wave_field(double k, Point2 direction);

// Robin datum g = grad(u) . n + i k u matching the field u, so that u is
// the exact solution of the impedance problem with this g.
BoundarySource impedance_data(const FieldWithGradient& field, double k);

}  // namespace pwdg
