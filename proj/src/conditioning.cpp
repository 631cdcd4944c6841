#include "pwdg/conditioning.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#define LAPACK_COMPLEX_CUSTOM
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace pwdg {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::VectorXd singular_values(const Eigen::MatrixXcd& m) {
  const lapack_int n = static_cast<lapack_int>(m.rows());
  // Jacobi SVD is the more accurate choice but scales poorly; past ~1.5e2
  // rows the O(n^3) divide-and-conquer driver wins by orders of magnitude.
  if (n <= 128)
    return Eigen::JacobiSVD<Eigen::MatrixXcd>(m).singularValues();
  Eigen::MatrixXcd work = m;  // zgesdd overwrites its input
  Eigen::VectorXd sigma(n);
  const lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', n, n, work.data(),
                                         n, sigma.data(), nullptr, n, nullptr, n);
  if (info != 0)
    throw std::runtime_error("spectral_cond: SVD failed to converge (info=" +
                             std::to_string(info) + ")");
  return sigma;
}

}  // namespace

HermitianMatrix hermitian_part(const Eigen::MatrixXcd& a) {
  if (a.rows() != a.cols())
    throw std::invalid_argument("hermitian_part: matrix must be square");
  return HermitianMatrix(0.5 * (a + a.adjoint().eval()));
}

double lambda_min(const HermitianMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m.mat(),
                                                         Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("lambda_min: eigensolver failed");
  return solver.eigenvalues().minCoeff();
}

double lambda_max(const HermitianMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m.mat(),
                                                         Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("lambda_max: eigensolver failed");
  return solver.eigenvalues().maxCoeff();
}

double spectral_cond(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("spectral_cond: matrix must be square");
  if (m.rows() == 0) throw std::invalid_argument("spectral_cond: empty matrix");
  const Eigen::VectorXd sigma = singular_values(m);
  const double largest = sigma(0);
  const double smallest = sigma(sigma.size() - 1);
  if (!(smallest > 0.0)) return kInf;
  return largest / smallest;
}

double fit_value(double h, double k, int p) {
  if (!(h > 0.0) || !(k > 0.0))
    throw std::invalid_argument("fit_value: need h > 0 and k > 0");
  if (p < 1) throw std::invalid_argument("fit_value: need p >= 1");
  // 2.34^(p ln p) / (hk)^(p-1), evaluated in log space so results beyond
  // the binary64 range overflow to +inf instead of trapping.
  const double pd = static_cast<double>(p);
  const double log_value =
      pd * std::log(pd) * std::log(2.34) - (pd - 1.0) * std::log(h * k);
  return std::exp(log_value);
}

std::vector<FitRow> fit_scan(const std::vector<double>& h_values,
                             const std::vector<double>& k_values,
                             const std::vector<int>& p_values,
                             SizeConvention convention, double theta0) {
  std::vector<FitRow> rows;
  for (double h : h_values)
    for (double k : k_values)
      for (int p : p_values) {
        if (!(h > 0.0) || !(k > 0.0) || p < 1)
          throw std::invalid_argument("fit_scan: invalid grid entry");
        if (h * k >= 10.0) continue;
        const double side =
            convention == SizeConvention::side ? h : h / std::sqrt(2.0);
        const double half = 0.5 * side;
        ConvexPolygon square;
        square.vertices = {{-half, -half}, {half, -half}, {half, half}, {-half, half}};
        const PlaneWaveBasis basis = make_basis(k, {0.0, 0.0}, p, theta0);
        const double cond2 = spectral_cond(local_mass_matrix(square, basis).mat());
        if (!(cond2 < 1e15)) continue;
        FitRow row;
        row.h = h;
        row.k = k;
        row.p = p;
        row.cond2 = cond2;
        row.fit = fit_value(h, k, p);
        row.ratio = cond2 / row.fit;
        rows.push_back(row);
      }
  return rows;
}

}  // namespace pwdg
