#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <random>

#include "pwdg/analytic.hpp"
#include "pwdg/assembly.hpp"
#include "pwdg/conditioning.hpp"
#include "pwdg/fields.hpp"
#include "pwdg/mesh.hpp"
#include "pwdg/orthogonalization.hpp"
#include "pwdg/solvers.hpp"

using namespace pwdg;
using std::complex;

namespace {

GlobalSystem reference_system(const Mesh& mesh, double k, int p) {
  const ExactSolution sol{k};
  return assemble(mesh, k, p, 0.0, impedance_data(exact_field(sol), k));
}

Eigen::MatrixXcd dense_q(const BlockTransform& bt) {
  int n = 0;
  for (const auto& b : bt.blocks) n += static_cast<int>(b.rows());
  Eigen::MatrixXcd q = Eigen::MatrixXcd::Zero(n, n);
  int at = 0;
  for (const auto& b : bt.blocks) {
    q.block(at, at, b.rows(), b.cols()) = b;
    at += static_cast<int>(b.rows());
  }
  return q;
}

void check_upper_triangular_positive_diag(const Eigen::MatrixXcd& q) {
  for (int r = 0; r < q.rows(); ++r) {
    CHECK(q(r, r).real() > 0.0);
    CHECK(std::abs(q(r, r).imag()) < 1e-14 * q(r, r).real());
    for (int c = 0; c < r; ++c) CHECK(std::abs(q(r, c)) == 0.0);
  }
}

}  // namespace

TEST_CASE("identity quadratic form needs no rotation") {
  const MgsResult res = mgs_local(Eigen::MatrixXcd::Identity(4, 4), 1e-14);
  CHECK(res.status.ok);
  CHECK((res.q - Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("diagonal form rescales the axes") {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(2, 2);
  a(0, 0) = 4.0;
  a(1, 1) = 9.0;
  const MgsResult res = mgs_local(a, 1e-14);
  CHECK(res.status.ok);
  CHECK(std::abs(res.q(0, 0) - complex<double>(0.5)) < 1e-15);
  CHECK(std::abs(res.q(1, 1) - complex<double>(1.0 / 3.0)) < 1e-15);
  CHECK(std::abs(res.q(0, 1)) < 1e-15);
  CHECK(std::abs(res.q(1, 0)) == 0.0);
}

TEST_CASE("random definite form is orthonormalized to machine level") {
  std::mt19937_64 rng(83);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int p = 8;
  Eigen::MatrixXcd r(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) r(i, j) = complex<double>(gauss(rng), gauss(rng));
  // well-conditioned positive definite quadratic form
  const Eigen::MatrixXcd h =
      r * r.adjoint() + static_cast<double>(p) * Eigen::MatrixXcd::Identity(p, p);

  const MgsResult res = mgs_local(h, 1e-14);
  REQUIRE(res.status.ok);
  check_upper_triangular_positive_diag(res.q);
  const Eigen::MatrixXcd gram = res.q.adjoint() * h * res.q;
  CHECK((gram - Eigen::MatrixXcd::Identity(p, p)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("indefinite forms break down where positivity fails") {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(3, 3);
  a(0, 0) = 1.0;
  a(1, 1) = -1.0;
  a(2, 2) = 1.0;
  const MgsResult res = mgs_local(a, 1e-14);
  CHECK_FALSE(res.status.ok);
  CHECK(res.status.breakdown_step == 2);
  // untouched columns stay canonical
  CHECK(std::abs(res.q(1, 1) - complex<double>(1.0)) == 0.0);
  CHECK(std::abs(res.q(2, 2) - complex<double>(1.0)) == 0.0);

  a(0, 0) = -1.0;
  const MgsResult first = mgs_local(a, 1e-14);
  CHECK_FALSE(first.status.ok);
  CHECK(first.status.breakdown_step == 1);
}

TEST_CASE("default pivot floors by precision") {
  CHECK(default_pivot_floor(Precision::binary64) == 1e-14);
  CHECK(default_pivot_floor(Precision::binary32) == 1e-6);
}

TEST_CASE("discrete wave blocks orthogonalize within the stable range") {
  const Mesh mesh = unit_square_mesh(MeshKind::quad, 2);
  const GlobalSystem system = reference_system(mesh, 10.0, 6);
  const BlockTransform bt = build_block_transform(system);
  REQUIRE(bt.all_ok());
  CHECK(bt.first_breakdown() == -1);
  for (int e = 0; e < system.n_elements; ++e) {
    check_upper_triangular_positive_diag(bt.blocks[e]);
    const Eigen::MatrixXcd h = hermitian_part(local_block(system, e)).mat();
    const Eigen::MatrixXcd gram = bt.blocks[e].adjoint() * h * bt.blocks[e];
    CHECK((gram - Eigen::MatrixXcd::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("identity blocks leave the system unchanged") {
  const Mesh mesh = unit_square_mesh(MeshKind::quad, 2);
  const GlobalSystem system = reference_system(mesh, 10.0, 3);
  BlockTransform bt;
  bt.pivot_floor = 1e-14;
  for (int e = 0; e < system.n_elements; ++e) {
    bt.blocks.push_back(Eigen::MatrixXcd::Identity(3, 3));
    bt.status.push_back({true, -1});
  }
  const GlobalSystem same = global_transform(system, bt);
  CHECK((same.matrix - system.matrix).cwiseAbs().maxCoeff() == 0.0);
  CHECK((same.rhs - system.rhs).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("both congruence modes match their dense definition") {
  // needs elements without central symmetry: symmetric (rectangular) cells
  // have real local quadratic forms, hence real Q, and the modes coincide
  const Mesh mesh = unit_square_mesh(MeshKind::poly, 2);
  const ExactSolution sol{10.0};
  const GlobalSystem system =
      assemble(mesh, 10.0, 5, 0.3, impedance_data(exact_field(sol), 10.0));
  const BlockTransform bt = build_block_transform(system);
  REQUIRE(bt.all_ok());
  const Eigen::MatrixXcd q = dense_q(bt);
  const double scale = system.matrix.cwiseAbs().maxCoeff();

  const GlobalSystem herm = global_transform(system, bt, CongruenceMode::hermitian);
  CHECK((herm.matrix - q.adjoint() * system.matrix * q).cwiseAbs().maxCoeff() <
        1e-13 * scale);
  CHECK((herm.rhs - q.adjoint() * system.rhs).cwiseAbs().maxCoeff() <
        1e-13 * system.rhs.cwiseAbs().maxCoeff());

  const GlobalSystem trans = global_transform(system, bt, CongruenceMode::transpose);
  CHECK((trans.matrix - q.transpose() * system.matrix * q).cwiseAbs().maxCoeff() <
        1e-13 * scale);
  CHECK((trans.rhs - q.transpose() * system.rhs).cwiseAbs().maxCoeff() <
        1e-13 * system.rhs.cwiseAbs().maxCoeff());
  // the two modes genuinely differ for a complex transform
  CHECK((herm.matrix - trans.matrix).cwiseAbs().maxCoeff() > 1e-6 * scale);
}

TEST_CASE("transform refuses a broken block") {
  const Mesh mesh = unit_square_mesh(MeshKind::quad, 2);
  const GlobalSystem system = reference_system(mesh, 10.0, 8);
  // an absurdly strict pivot floor forces a declared breakdown
  const BlockTransform bt = build_block_transform(system, 0.9);
  REQUIRE_FALSE(bt.all_ok());
  CHECK(bt.first_breakdown() >= 0);
  CHECK_THROWS_AS(global_transform(system, bt), std::invalid_argument);
}

TEST_CASE("solution is invariant under the change of basis") {
  const Mesh mesh = unit_square_mesh(MeshKind::quad, 2);
  const double k = 10.0;
  const int p = 7;
  const ExactSolution sol{k};
  const GlobalSystem system = reference_system(mesh, k, p);
  REQUIRE(spectral_cond(system.matrix) <= 1e10);

  const SolveReport direct = lu_solve(system);
  REQUIRE(direct.converged);
  const BlockTransform bt = build_block_transform(system);
  REQUIRE(bt.all_ok());
  const GlobalSystem transformed = global_transform(system, bt);
  const SolveReport tilde = lu_solve(transformed);
  REQUIRE(tilde.converged);
  const Eigen::VectorXcd recovered = recover_solution(bt, tilde.coefficients);

  const auto reference = exact_field(sol).value;
  const double err_direct = relative_l2_error(mesh, k, 0.0, direct.coefficients, reference);
  const double err_recovered = relative_l2_error(mesh, k, 0.0, recovered, reference);
  CHECK(std::abs(err_direct - err_recovered) <= 1e-8 * err_direct);

  // congruence, not similarity: the spectra differ even though the solution
  // function is identical
  Eigen::VectorXcd ev_a, ev_t;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es_a(system.matrix, false);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es_t(transformed.matrix, false);
  std::vector<double> mags_a, mags_t;
  for (Eigen::Index i = 0; i < es_a.eigenvalues().size(); ++i) {
    mags_a.push_back(std::abs(es_a.eigenvalues()[i]));
    mags_t.push_back(std::abs(es_t.eigenvalues()[i]));
  }
  std::sort(mags_a.begin(), mags_a.end());
  std::sort(mags_t.begin(), mags_t.end());
  double spread = 0.0;
  for (std::size_t i = 0; i < mags_a.size(); ++i)
    spread = std::max(spread, std::abs(mags_a[i] - mags_t[i]) / mags_a.back());
  CHECK(spread > 1e-3);
}

TEST_CASE("recovered residual stays within a small factor of the target") {
  const Mesh mesh = unit_square_mesh(MeshKind::quad, 2);
  const double k = 10.0;
  for (int p : {5, 9}) {
    const GlobalSystem system = reference_system(mesh, k, p);
    const BlockTransform bt = build_block_transform(system);
    REQUIRE(bt.all_ok());
    const GlobalSystem transformed = global_transform(system, bt);
    const SolveReport rep = gmres_solve(transformed);
    REQUIRE(rep.converged);
    const Eigen::VectorXcd u = recover_solution(bt, rep.coefficients);
    const double recovered_rel =
        (system.rhs - system.matrix * u).norm() / system.rhs.norm();
    CHECK(recovered_rel <= 10.0 * 1e-10);
  }
}

TEST_CASE("transformed diagonal blocks are perfectly conditioned") {
  const Mesh mesh = unit_square_mesh(MeshKind::quad, 2);
  const GlobalSystem system = reference_system(mesh, 10.0, 6);
  const BlockTransform bt = build_block_transform(system);
  REQUIRE(bt.all_ok());
  const GlobalSystem transformed = global_transform(system, bt);
  for (int e = 0; e < system.n_elements; ++e) {
    const Eigen::MatrixXcd h = hermitian_part(local_block(transformed, e)).mat();
    CHECK(spectral_cond(h) == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("single direction never breaks down") {
  for (MeshKind kind : {MeshKind::quad, MeshKind::poly}) {
    const Mesh mesh = unit_square_mesh(kind, 2);
    const auto first = breakdown_threshold_scan(mesh, 10.0, {1}, Precision::binary64);
    CHECK_FALSE(first.has_value());
  }
}

TEST_CASE("lower precision breaks down no later than higher precision") {
  const Mesh mesh = unit_square_mesh(MeshKind::poly, 3);
  std::vector<int> ps;
  for (int p = 2; p <= 23; ++p) ps.push_back(p);
  const auto f64 = breakdown_threshold_scan(mesh, 10.0, ps, Precision::binary64);
  const auto f32 = breakdown_threshold_scan(mesh, 10.0, ps, Precision::binary32);
  REQUIRE(f32.has_value());
  CHECK(*f32 == 17);
  if (f64.has_value()) CHECK(*f32 < *f64);
}

TEST_CASE("stricter pivot floors cannot delay breakdown") {
  const Mesh mesh = unit_square_mesh(MeshKind::poly, 3);
  std::vector<int> ps;
  for (int p = 2; p <= 23; ++p) ps.push_back(p);
  const int unbounded = 1000;
  int prev = unbounded;
  bool any_found = false;
  for (double floor : {1e-14, 1e-6, 1e-2}) {
    const auto got =
        breakdown_threshold_scan(mesh, 10.0, ps, Precision::binary64, 0.0, floor);
    const int value = got.value_or(unbounded);
    any_found = any_found || got.has_value();
    CHECK(value <= prev);
    prev = value;
  }
  CHECK(any_found);
}
