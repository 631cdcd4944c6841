#pragma once

#include <Eigen/Dense>
#include <vector>

#include "pwdg/planewave.hpp"

namespace pwdg {

// H(A) = (A + A^H) / 2, the Hermitian part of a square matrix.  For the
// discrete wave operator its smallest eigenvalue governs how fast residual
// minimizing iterations can contract.
HermitianMatrix hermitian_part(const Eigen::MatrixXcd& a);

// Smallest/largest eigenvalue of a Hermitian matrix.
double lambda_min(const HermitianMatrix& m);
double lambda_max(const HermitianMatrix& m);

// Spectral (2-norm) condition number sigma_max / sigma_min via a full SVD;
// returns +inf when the matrix is singular to working precision.  Uses a
// divide-and-conquer LAPACK driver for large matrices and Eigen's Jacobi
// SVD (slower, slightly more accurate) for small ones.
double spectral_cond(const Eigen::MatrixXcd& m);

// Empirical conditioning law for the local plane-wave Gram matrix on a
// square element of size h at wavenumber k with p directions:
//   fit(h, k, p) = 2.34^(p ln p) / (h k)^(p - 1).
// Growth is governed by p alone through the first factor; the mesh enters
// only through the product h k.  Overflows cleanly to +inf for large p.
// Rejects h <= 0, k <= 0, p < 1.
double fit_value(double h, double k, int p);

// Whether the size parameter h of a square element means its side or its
// diagonal.  The law is calibrated against one of the two; the scan is run
// for both and the better-matching convention reported.
enum class SizeConvention { side, diameter };

struct FitRow {
  double h = 0.0;
  double k = 0.0;
  int p = 0;
  double cond2 = 0.0;  // measured condition number of the Gram matrix
  double fit = 0.0;    // law prediction
  double ratio = 0.0;  // cond2 / fit
};

// Measures cond2 of the local Gram matrix on a square of size h (per the
// convention) for every grid combination, against the law's prediction.
// Combinations outside the law's trusted regime are skipped: those with
// cond2 >= 1e15 (not resolvable in binary64) and those with h k >= 10
// (outside the small-(hk) asymptotic regime).
std::vector<FitRow> fit_scan(const std::vector<double>& h_values,
                             const std::vector<double>& k_values,
                             const std::vector<int>& p_values,
                             SizeConvention convention, double theta0 = 0.0);

}  // namespace pwdg
