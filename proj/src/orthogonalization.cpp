#include "pwdg/orthogonalization.hpp"

#include <cmath>
#include <stdexcept>

#include "pwdg/analytic.hpp"
#include "pwdg/solvers.hpp"

namespace pwdg {
namespace {

template <typename Real>
struct MgsOutcome {
  Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic> q;
  MgsStatus status;
};

// Gram-Schmidt of e_1, ..., e_p under <u, v> = v^H H u, columns finished
// left to right, each new column re-projected against every finished one in
// sequence (so rounding in earlier projections is corrected before later
// ones — the "modified" update order).  Since e_j has no components beyond
// index j and projections only mix in earlier columns, Q stays upper
// triangular with a real positive diagonal without any extra work.
template <typename Real>
MgsOutcome<Real> mgs_impl(
    const Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>& h,
    Real pivot_floor) {
  using Matrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index p = h.rows();
  MgsOutcome<Real> out;
  out.q = Matrix::Identity(p, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      const std::complex<Real> coeff = (out.q.col(i).adjoint() * h * out.q.col(j))(0);
      out.q.col(j) -= coeff * out.q.col(i);
    }
    const Real norm2 = (out.q.col(j).adjoint() * h * out.q.col(j))(0).real();
    const Real reference = h(j, j).real();
    // Declared breakdown: the projected direction lost all but a
    // pivot_floor fraction of its original H-weight, or H is not positive
    // along it at all.
    if (!(norm2 > 0) || norm2 <= pivot_floor * reference) {
      out.status.ok = false;
      out.status.breakdown_step = static_cast<int>(j) + 1;
      return out;
    }
    out.q.col(j) /= std::sqrt(norm2);
  }
  out.status.ok = true;
  out.status.breakdown_step = -1;
  return out;
}

}  // namespace

double default_pivot_floor(Precision precision) {
  return precision == Precision::binary64 ? 1e-14 : 1e-6;
}

MgsResult mgs_local(const Eigen::MatrixXcd& local_block, double pivot_floor,
                    Precision precision) {
  if (local_block.rows() != local_block.cols())
    throw std::invalid_argument("mgs_local: block must be square");
  if (!(pivot_floor > 0.0))
    throw std::invalid_argument("mgs_local: need pivot_floor > 0");
  MgsResult result;
  if (precision == Precision::binary64) {
    const Eigen::MatrixXcd h = 0.5 * (local_block + local_block.adjoint().eval());
    MgsOutcome<double> out = mgs_impl<double>(h, pivot_floor);
    result.q = std::move(out.q);
    result.status = out.status;
  } else {
    const Eigen::MatrixXcf block32 = local_block.cast<std::complex<float>>();
    const Eigen::MatrixXcf h = 0.5f * (block32 + block32.adjoint().eval());
    MgsOutcome<float> out = mgs_impl<float>(h, static_cast<float>(pivot_floor));
    result.q = out.q.cast<std::complex<double>>();
    result.status = out.status;
  }
  return result;
}

bool BlockTransform::all_ok() const {
  for (const MgsStatus& s : status)
    if (!s.ok) return false;
  return true;
}

int BlockTransform::first_breakdown() const {
  for (std::size_t i = 0; i < status.size(); ++i)
    if (!status[i].ok) return static_cast<int>(i);
  return -1;
}

BlockTransform build_block_transform(const GlobalSystem& system,
                                     double pivot_floor) {
  const double floor_value =
      pivot_floor > 0.0 ? pivot_floor : default_pivot_floor(system.precision);
  BlockTransform transform;
  transform.pivot_floor = floor_value;
  transform.blocks.reserve(static_cast<std::size_t>(system.n_elements));
  transform.status.reserve(static_cast<std::size_t>(system.n_elements));
  for (int e = 0; e < system.n_elements; ++e) {
    MgsResult result =
        mgs_local(local_block(system, e), floor_value, system.precision);
    transform.blocks.push_back(std::move(result.q));
    transform.status.push_back(result.status);
  }
  return transform;
}

namespace {

template <typename Real>
GlobalSystem transform_impl(const GlobalSystem& system,
                            const BlockTransform& transform, CongruenceMode mode) {
  using Matrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
  const int p = system.block_size;
  const int n_elem = system.n_elements;

  std::vector<Matrix> q(static_cast<std::size_t>(n_elem));
  std::vector<Matrix> q_star(static_cast<std::size_t>(n_elem));
  for (int e = 0; e < n_elem; ++e) {
    q[static_cast<std::size_t>(e)] =
        transform.blocks[static_cast<std::size_t>(e)].template cast<std::complex<Real>>();
    q_star[static_cast<std::size_t>(e)] =
        mode == CongruenceMode::hermitian
            ? q[static_cast<std::size_t>(e)].adjoint().eval()
            : q[static_cast<std::size_t>(e)].transpose().eval();
  }

  const Matrix a = system.matrix.cast<std::complex<Real>>();
  const Vector b = system.rhs.cast<std::complex<Real>>();
  Matrix a_t(a.rows(), a.cols());
  Vector b_t(b.size());
  for (int row = 0; row < n_elem; ++row) {
    const Eigen::Index r0 = static_cast<Eigen::Index>(row) * p;
    for (int col = 0; col < n_elem; ++col) {
      const Eigen::Index c0 = static_cast<Eigen::Index>(col) * p;
      a_t.block(r0, c0, p, p) = q_star[static_cast<std::size_t>(row)] *
                                a.block(r0, c0, p, p) *
                                q[static_cast<std::size_t>(col)];
    }
    b_t.segment(r0, p) = q_star[static_cast<std::size_t>(row)] * b.segment(r0, p);
  }

  GlobalSystem out;
  out.n_elements = n_elem;
  out.block_size = p;
  out.precision = system.precision;
  out.matrix = a_t.template cast<std::complex<double>>();
  out.rhs = b_t.template cast<std::complex<double>>();
  return out;
}

}  // namespace

GlobalSystem global_transform(const GlobalSystem& system,
                              const BlockTransform& transform,
                              CongruenceMode mode) {
  if (static_cast<int>(transform.blocks.size()) != system.n_elements)
    throw std::invalid_argument("global_transform: transform/system size mismatch");
  if (!transform.all_ok())
    throw std::invalid_argument(
        "global_transform: breakdown at element " +
        std::to_string(transform.first_breakdown()) +
        "; transform is not available");
  for (const Eigen::MatrixXcd& q : transform.blocks)
    if (q.rows() != system.block_size || q.cols() != system.block_size)
      throw std::invalid_argument("global_transform: block size mismatch");
  return system.precision == Precision::binary64
             ? transform_impl<double>(system, transform, mode)
             : transform_impl<float>(system, transform, mode);
}

Eigen::VectorXcd recover_solution(const BlockTransform& transform,
                                  const Eigen::VectorXcd& transformed_solution) {
  if (transform.blocks.empty())
    throw std::invalid_argument("recover_solution: empty transform");
  const Eigen::Index p = transform.blocks.front().rows();
  if (transformed_solution.size() !=
      static_cast<Eigen::Index>(transform.blocks.size()) * p)
    throw std::invalid_argument("recover_solution: size mismatch");
  Eigen::VectorXcd solution(transformed_solution.size());
  for (std::size_t e = 0; e < transform.blocks.size(); ++e) {
    const Eigen::Index r0 = static_cast<Eigen::Index>(e) * p;
    solution.segment(r0, p) = transform.blocks[e] * transformed_solution.segment(r0, p);
  }
  return solution;
}

std::optional<int> breakdown_threshold_scan(const Mesh& mesh, double k,
                                            const std::vector<int>& p_values,
                                            Precision precision, double theta0,
                                            double pivot_floor) {
  for (std::size_t i = 1; i < p_values.size(); ++i)
    if (p_values[i] <= p_values[i - 1])
      throw std::invalid_argument("breakdown_threshold_scan: p values must increase");
  const ExactSolution exact{k};
  const BoundarySource g = impedance_data(exact_field(exact), k);
  for (int p : p_values) {
    GlobalSystem system =
        precision_cast(assemble(mesh, k, p, theta0, g), precision);
    const BlockTransform transform = build_block_transform(system, pivot_floor);
    if (!transform.all_ok()) return p;
  }
  return std::nullopt;
}

}  // namespace pwdg
