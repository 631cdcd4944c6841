#include "pwdg/solvers.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "pwdg/conditioning.hpp"

namespace pwdg {
namespace {

// Residuals are recorded clamped away from zero so the history stays
// strictly positive even across a happy breakdown (exact solve mid-run).
constexpr double kResidualFloor = 1e-300;

double finalize_residual(const GlobalSystem& system, SolveReport& report) {
  const double bnorm = system.rhs.norm();
  if (bnorm == 0.0) {
    report.relative_residual = report.coefficients.norm() == 0.0 ? 0.0 : 1.0;
    return report.relative_residual;
  }
  report.relative_residual =
      (system.rhs - system.matrix * report.coefficients).norm() / bnorm;
  return report.relative_residual;
}

template <typename Real>
Eigen::VectorXcd lu_impl(
    const Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>& a,
    const Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>& b,
    bool& singular) {
  Eigen::PartialPivLU<Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>>
      lu(a);
  singular = !(lu.matrixLU().diagonal().cwiseAbs().minCoeff() > Real(0));
  if (singular) return Eigen::VectorXcd();
  return lu.solve(b).template cast<std::complex<double>>();
}

template <typename Real>
struct GmresState {
  Eigen::VectorXcd solution;
  std::vector<double> history;
  int iterations = 0;
  bool converged = false;
};

// Full GMRES with MGS Arnoldi, Givens-rotation least squares, and one
// conditional re-orthogonalization pass per step.  All arithmetic in Real.
template <typename Real>
GmresState<Real> gmres_impl(
    const Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>& a,
    const Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>& b, Real tol,
    int max_iter) {
  using Cplx = std::complex<Real>;
  using Matrix = Eigen::Matrix<Cplx, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Cplx, Eigen::Dynamic, 1>;
  const Eigen::Index n = a.rows();

  GmresState<Real> state;
  const Real beta = b.norm();
  state.history.push_back(std::max(static_cast<double>(beta), kResidualFloor));
  if (!(beta > Real(0))) {
    state.solution = Eigen::VectorXcd::Zero(n);
    state.converged = true;
    return state;
  }

  Matrix basis(n, max_iter + 1);  // Krylov vectors v_0 ... v_m
  Matrix hess = Matrix::Zero(max_iter + 1, max_iter);
  Vector g = Vector::Zero(max_iter + 1);
  std::vector<Real> givens_c(static_cast<std::size_t>(max_iter));
  std::vector<Cplx> givens_s(static_cast<std::size_t>(max_iter));
  basis.col(0) = b / beta;
  g(0) = beta;

  int m = 0;
  bool breakdown = false;
  for (int j = 0; j < max_iter; ++j) {
    Vector w = a * basis.col(j);
    const Real norm_before = w.norm();
    for (int i = 0; i <= j; ++i) {
      const Cplx h = basis.col(i).dot(w);
      hess(i, j) = h;
      w -= h * basis.col(i);
    }
    // A sharp norm drop means the projections were computed against a
    // direction already nearly in the span; one repeat pass restores
    // orthogonality to working precision.
    if (w.norm() < norm_before * Real(0.7071067811865475)) {
      for (int i = 0; i <= j; ++i) {
        const Cplx correction = basis.col(i).dot(w);
        hess(i, j) += correction;
        w -= correction * basis.col(i);
      }
    }
    const Real h_next = w.norm();
    hess(j + 1, j) = h_next;
    if (h_next > Real(0)) basis.col(j + 1) = w / h_next;

    // Reduce column j to triangular form with the accumulated rotations.
    for (int i = 0; i < j; ++i) {
      const Cplx top = givens_c[static_cast<std::size_t>(i)] * hess(i, j) +
                       givens_s[static_cast<std::size_t>(i)] * hess(i + 1, j);
      hess(i + 1, j) = -std::conj(givens_s[static_cast<std::size_t>(i)]) * hess(i, j) +
                       givens_c[static_cast<std::size_t>(i)] * hess(i + 1, j);
      hess(i, j) = top;
    }
    const Cplx diag = hess(j, j);
    const Real diag_abs = std::abs(diag);
    const Real r = std::sqrt(diag_abs * diag_abs + h_next * h_next);
    if (!(r > Real(0))) {
      // The projected operator is singular in this direction (A itself is
      // rank deficient); no further progress is possible.  Drop the dead
      // column and report the best least-squares solution so far.
      breakdown = true;
      break;
    }
    Real c;
    Cplx s;
    if (diag_abs == Real(0)) {
      c = Real(0);
      s = Cplx(1);
    } else {
      c = diag_abs / r;
      s = c * Real(h_next) / std::conj(diag);
    }
    givens_c[static_cast<std::size_t>(j)] = c;
    givens_s[static_cast<std::size_t>(j)] = s;
    hess(j, j) = c * diag + s * Real(h_next);
    hess(j + 1, j) = Cplx(0);
    g(j + 1) = -std::conj(s) * g(j);
    g(j) = c * g(j);

    m = j + 1;
    const Real residual = std::abs(g(j + 1));
    state.history.push_back(std::max(static_cast<double>(residual), kResidualFloor));
    if (residual <= tol * beta) {
      state.converged = true;
      break;
    }
    if (!(h_next > Real(0))) {
      // Happy breakdown: the Krylov space is exhausted; the least-squares
      // solution below is exact, but the target tolerance was not met.
      breakdown = true;
      break;
    }
  }
  (void)breakdown;

  // Back substitution on the triangularized Hessenberg system.
  Vector y = Vector::Zero(m);
  for (int i = m - 1; i >= 0; --i) {
    Cplx sum = g(i);
    for (int l = i + 1; l < m; ++l) sum -= hess(i, l) * y(l);
    y(i) = sum / hess(i, i);
  }
  Vector x = basis.leftCols(m) * y;
  state.solution = x.template cast<std::complex<double>>();
  state.iterations = m;
  return state;
}

}  // namespace

SolveReport lu_solve(const GlobalSystem& system) {
  if (system.size() == 0) throw std::invalid_argument("lu_solve: empty system");
  SolveReport report;
  report.method = SolveMethod::lu;
  bool singular = false;
  if (system.precision == Precision::binary64) {
    report.coefficients = lu_impl<double>(system.matrix, system.rhs, singular);
  } else {
    report.coefficients =
        lu_impl<float>(system.matrix.cast<std::complex<float>>(),
                       system.rhs.cast<std::complex<float>>(), singular);
  }
  if (singular) {
    report.converged = false;
    report.coefficients = Eigen::VectorXcd::Zero(system.size());
    report.relative_residual = std::numeric_limits<double>::infinity();
    report.message = "factorization hit an exactly zero pivot (matrix singular "
                     "to working precision)";
    return report;
  }
  finalize_residual(system, report);
  report.converged = std::isfinite(report.relative_residual);
  if (!report.converged) report.message = "solution contains non-finite entries";
  return report;
}

SolveReport gmres_solve(const GlobalSystem& system, const GmresConfig& config) {
  if (system.size() == 0) throw std::invalid_argument("gmres_solve: empty system");
  if (!(config.tol > 0.0 && config.tol < 1.0))
    throw std::invalid_argument("gmres_solve: need 0 < tol < 1");
  const int max_iter =
      config.max_iter > 0 ? config.max_iter : static_cast<int>(system.size());

  SolveReport report;
  report.method = SolveMethod::gmres;
  if (system.precision == Precision::binary64) {
    GmresState<double> state =
        gmres_impl<double>(system.matrix, system.rhs, config.tol, max_iter);
    report.coefficients = std::move(state.solution);
    report.residual_history = std::move(state.history);
    report.iterations = state.iterations;
    report.converged = state.converged;
  } else {
    GmresState<float> state = gmres_impl<float>(
        system.matrix.cast<std::complex<float>>(),
        system.rhs.cast<std::complex<float>>(), static_cast<float>(config.tol),
        max_iter);
    report.coefficients = std::move(state.solution);
    report.residual_history = std::move(state.history);
    report.iterations = state.iterations;
    report.converged = state.converged;
  }
  finalize_residual(system, report);
  // The in-iteration test uses the implied residual, which collapses when
  // the Krylov space is exhausted even though the true residual has stalled
  // (visible in binary32 well before the tolerance).  Convergence is only
  // claimed when the recomputed residual backs it up.
  if (report.converged && !(report.relative_residual <= 10.0 * config.tol)) {
    report.converged = false;
    report.message =
        "implied residual met the target but the recomputed residual did not";
  } else if (!report.converged) {
    report.message = "relative residual target not reached within " +
                     std::to_string(max_iter) + " iterations";
  }
  return report;
}

ContractionCheck contraction_bound_check(const GlobalSystem& system,
                                         const GmresConfig& config) {
  ContractionCheck check;
  check.lambda_min_h = lambda_min(hermitian_part(system.matrix));
  check.applicable = check.lambda_min_h > 0.0;
  check.gmres = gmres_solve(system, config);
  check.min_margin = std::numeric_limits<double>::infinity();
  if (!check.applicable) return check;

  // lambda_min of the Hermitian part of the explicit inverse; the system
  // sizes in scope keep a dense inverse affordable.
  const Eigen::MatrixXcd inverse =
      Eigen::PartialPivLU<Eigen::MatrixXcd>(system.matrix)
          .solve(Eigen::MatrixXcd::Identity(system.size(), system.size()));
  check.lambda_min_h_inv = lambda_min(hermitian_part(inverse));

  const double factor = 1.0 - check.lambda_min_h * check.lambda_min_h_inv;
  const auto& history = check.gmres.residual_history;
  const double first = history.empty() ? 1.0 : history.front();
  for (std::size_t j = 1; j < history.size(); ++j) {
    const double ratio = history[j] / first;
    const double bound =
        std::pow(std::max(factor, 0.0), 0.5 * static_cast<double>(j));
    // The 1e-280 pad only absorbs the artificial floor on exact-zero
    // residuals; any genuine violation dwarfs it.
    if (ratio > bound + 1e-280) ++check.violations;
    check.min_margin = std::min(check.min_margin, bound - ratio);
  }
  return check;
}

GlobalSystem precision_cast(const GlobalSystem& system, Precision target) {
  GlobalSystem out;
  out.n_elements = system.n_elements;
  out.block_size = system.block_size;
  out.precision = target;
  if (target == Precision::binary64) {
    out.matrix = system.matrix;
    out.rhs = system.rhs;
    return out;
  }
  out.matrix = system.matrix.cast<std::complex<float>>().cast<std::complex<double>>();
  out.rhs = system.rhs.cast<std::complex<float>>().cast<std::complex<double>>();
  const bool input_finite =
      system.matrix.allFinite() && system.rhs.allFinite();
  const bool output_finite = out.matrix.allFinite() && out.rhs.allFinite();
  if (input_finite && !output_finite)
    throw std::range_error("precision_cast: entry overflowed binary32 range");
  return out;
}

}  // namespace pwdg
