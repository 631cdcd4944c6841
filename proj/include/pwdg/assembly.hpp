#pragma once

#include <Eigen/Dense>
#include <string>

#include "pwdg/fields.hpp"
#include "pwdg/mesh.hpp"
#include "pwdg/planewave.hpp"

namespace pwdg {

// Working precision of a linear system.  Containers always hold binary64;
// binary32 means entries have been rounded through float and downstream
// kernels (factorizations, orthogonalization, iteration) run in float.
enum class Precision { binary32, binary64 };

// Dense discrete system A x = b for the plane-wave DG discretization of the
// impedance Helmholtz problem.  Unknowns are element-major: the basis
// function j on element K has global index K * block_size + j.
struct GlobalSystem {
  Eigen::MatrixXcd matrix;
  Eigen::VectorXcd rhs;
  int n_elements = 0;
  int block_size = 0;
  Precision precision = Precision::binary64;

  Eigen::Index size() const { return matrix.rows(); }
};

// Assembles the upwind-flux DG system with impedance boundary data g.  All
// integrals of products of local plane waves are evaluated in closed form
// (every such product is again a complex exponential along each straight
// edge); only the boundary data integrals use numerical quadrature, with an
// order that grows with k times the edge length.  Rejects k <= 0, p < 1.
GlobalSystem assemble(const Mesh& mesh, double k, int p, double theta0,
                      const BoundarySource& g);

// Copy of the p x p diagonal block of element K.  This is the local
// sesquilinear form restricted to trial and test functions of K; its
// Hermitian part is the inner product used for the local re-basis.
Eigen::MatrixXcd local_block(const GlobalSystem& system, int element);

// Plain-text dump (size line, then matrix rows as re/im pairs, then the
// right-hand side) for offline inspection.
void write_system(const GlobalSystem& system, const std::string& path);

}  // namespace pwdg
