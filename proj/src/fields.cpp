#include "pwdg/fields.hpp"

#include <cmath>
#include <stdexcept>

namespace pwdg {

FieldWithGradient plane_wave_field(double k, Point2 direction) {
  if (!(k > 0.0)) throw std::invalid_argument("plane_wave_field: need k > 0");
  if (std::abs(norm(direction) - 1.0) > 1e-12)
    throw std::invalid_argument("plane_wave_field: direction must be a unit vector");
  FieldWithGradient field;
  field.value = [k, direction](Point2 x) {
    return std::polar(1.0, k * dot(direction, x));
  };
  field.gradient = [k, direction](Point2 x) {
    const std::complex<double> v =
        std::complex<double>(0.0, k) * std::polar(1.0, k * dot(direction, x));
    return Eigen::Vector2cd(v * direction.x, v * direction.y);
  };
  return field;
}

BoundarySource impedance_data(const FieldWithGradient& field, double k) {
  if (!(k > 0.0)) throw std::invalid_argument("impedance_data: need k > 0");
  BoundarySource source;
  source.eval = [field, k](Point2 x, Point2 n) {
    const Eigen::Vector2cd grad = field.gradient(x);
    return grad(0) * n.x + grad(1) * n.y +
           std::complex<double>(0.0, k) * field.value(x);
  };
  return source;
}

}  // namespace pwdg
