#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "pwdg/assembly.hpp"

namespace pwdg {

enum class SolveMethod { lu, gmres };

struct SolveReport {
  Eigen::VectorXcd coefficients;
  SolveMethod method = SolveMethod::lu;
  int iterations = 0;                    // Arnoldi steps (gmres only)
  std::vector<double> residual_history;  // absolute residual norms, entry 0 = ||b||
  bool converged = false;
  double relative_residual = 0.0;        // ||b - A x|| / ||b||, recomputed exactly
  std::string message;
};

struct GmresConfig {
  double tol = 1e-10;  // relative residual reduction target; 0 < tol < 1
  int max_iter = 0;    // Arnoldi step cap; 0 means the system size
};

// Dense LU with partial pivoting, in the system's precision.  A pivot that
// is exactly zero (singular to working precision) yields converged = false
// with an explanatory message instead of a throw.
SolveReport lu_solve(const GlobalSystem& system);

// Full (non-restarted) GMRES from the zero initial guess, in the system's
// precision.  Arnoldi uses modified Gram-Schmidt with one
// re-orthogonalization pass whenever a step loses more than a factor
// 1/sqrt(2) of its norm.  The residual history (from the Givens recurrence)
// is monotone non-increasing; exact zeros are recorded as 1e-300 so the
// history stays positive.  Non-convergence within max_iter is reported, not
// thrown.
SolveReport gmres_solve(const GlobalSystem& system, const GmresConfig& config = {});

// Diagnostic for the residual contraction bound
//   ||r_j|| / ||r_0|| <= (1 - lambda_min(H(A)) lambda_min(H(A^-1)))^(j/2),
// valid whenever the Hermitian part H(A) is positive definite.  Runs GMRES
// on the system and compares every iteration against the bound.
struct ContractionCheck {
  bool applicable = false;      // lambda_min(H(A)) > 0
  double lambda_min_h = 0.0;    // lambda_min(H(A))
  double lambda_min_h_inv = 0.0;  // lambda_min(H(A^-1)), set when applicable
  int violations = 0;           // iterations with ratio above the bound
  double min_margin = 0.0;      // min over j of bound(j) - ratio(j)
  SolveReport gmres;            // the run that was checked
};
ContractionCheck contraction_bound_check(const GlobalSystem& system,
                                         const GmresConfig& config = {});

// Entrywise rounding of the stored system to the target precision.  The
// returned system's tag makes all downstream kernels (LU, GMRES, the local
// orthogonalization and the global transform) execute in that arithmetic.
// Throws std::range_error if rounding overflows a finite entry to infinity.
GlobalSystem precision_cast(const GlobalSystem& system, Precision target);

}  // namespace pwdg
