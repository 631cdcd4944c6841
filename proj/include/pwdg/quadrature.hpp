#pragma once

#include <vector>

namespace pwdg {

// Gauss-Legendre rule on [-1, 1]; exact for polynomials of degree 2n-1.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  int size() const { return static_cast<int>(nodes.size()); }
};

// Nodes/weights by Newton iteration on the Legendre recurrence; results are
// cached per order.  Rejects n < 1.
const GaussRule& gauss_legendre(int n);

}  // namespace pwdg
