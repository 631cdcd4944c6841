#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "pwdg/assembly.hpp"
#include "pwdg/mesh.hpp"

namespace pwdg {

// Outcome of one local orthogonalization.  `breakdown_step` is the 1-based
// index of the coefficient basis vector whose projected norm fell below the
// pivot floor (only meaningful when ok == false).
struct MgsStatus {
  bool ok = true;
  int breakdown_step = -1;
};

struct MgsResult {
  Eigen::MatrixXcd q;  // upper triangular, positive real diagonal
  MgsStatus status;
};

// Pivot floor used when none is given: 1e-14 in binary64, 1e-6 in binary32
// (scaled by the diagonal of the quadratic form, see mgs_local).
double default_pivot_floor(Precision precision);

// Modified Gram-Schmidt of the canonical coefficient basis e_1, ..., e_p
// under the inner product <u, v> = v^H H u with H = (A_K + A_K^H)/2, the
// Hermitian part of the local block.  Columns are processed left to right
// and re-projected against each finished column immediately (the "modified"
// update order), then normalized to <q_j, q_j> = 1.
//
// Breakdown at column j is declared when the pre-normalization norm^2 is
// <= pivot_floor * <e_j, e_j>, or fails to be positive (indefinite H); it
// is reported in the status, never raised.  A breakdown leaves the
// remaining columns untouched (identity).
//
// In binary32 the entire computation (forming H, projections, norms) runs
// in complex<float>; the result is widened back for storage.
MgsResult mgs_local(const Eigen::MatrixXcd& local_block, double pivot_floor,
                    Precision precision = Precision::binary64);

// Per-element factors for the global block-diagonal basis change.
struct BlockTransform {
  std::vector<Eigen::MatrixXcd> blocks;
  std::vector<MgsStatus> status;
  double pivot_floor = 0.0;

  bool all_ok() const;
  // Smallest element index with a breakdown, or -1 if none.
  int first_breakdown() const;
};

// Runs mgs_local on the diagonal block of every element of the system, in
// the system's precision.  pivot_floor <= 0 selects the default for that
// precision.
BlockTransform build_block_transform(const GlobalSystem& system,
                                     double pivot_floor = 0.0);

// Which congruence is used for the global basis change.  `hermitian` is
// the transform consistent with a sesquilinear form (and the default);
// `transpose` applies the literal transpose instead.
enum class CongruenceMode { hermitian, transpose };

// Transformed system: A~ = Q^H A Q, b~ = Q^H b (or Q^T in transpose mode)
// with Q the block diagonal of the Q_K.  The solution of the original
// system is recovered as u = Q u~.  Throws std::invalid_argument if any
// block is in breakdown.  Runs in the system's precision.
GlobalSystem global_transform(const GlobalSystem& system,
                              const BlockTransform& transform,
                              CongruenceMode mode = CongruenceMode::hermitian);

// u = Q u~ for a solution of the transformed system.
Eigen::VectorXcd recover_solution(const BlockTransform& transform,
                                  const Eigen::VectorXcd& transformed_solution);

// Assembles the system for each p in increasing order (Hankel boundary
// data, given wavenumber), casts to the requested precision, and returns
// the first p whose block transform reports a breakdown; std::nullopt when
// none does.  pivot_floor <= 0 selects the precision default.
std::optional<int> breakdown_threshold_scan(const Mesh& mesh, double k,
                                            const std::vector<int>& p_values,
                                            Precision precision,
                                            double theta0 = 0.0,
                                            double pivot_floor = 0.0);

}  // namespace pwdg
