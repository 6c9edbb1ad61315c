#include "rsp/operators.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace rsp {

namespace {

long dims_product(const std::vector<int>& dims) {
  if (dims.empty()) throw std::invalid_argument("operator needs at least one subsystem");
  long d = 1;
  for (int di : dims) {
    if (di < 2) throw std::invalid_argument("operator subsystem dimension must be >= 2");
    d *= di;
  }
  return d;
}

void check_square(const std::vector<int>& dims, const Eigen::MatrixXcd& m) {
  const long d = dims_product(dims);
  if (m.rows() != d || m.cols() != d)
    throw std::invalid_argument("operator matrix is " + std::to_string(m.rows()) + "x" +
                                std::to_string(m.cols()) + ", expected " +
                                std::to_string(d) + "x" + std::to_string(d));
}

}  // namespace

long LocalOperator::dim() const { return dims_product(dims); }

bool matrices_equal(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return (a - b).cwiseAbs().maxCoeff() <= tol;
}

LocalOperator make_unitary(std::vector<int> dims, Eigen::MatrixXcd matrix,
                           std::string name) {
  check_square(dims, matrix);
  const long d = matrix.rows();
  if (!matrices_equal(matrix.adjoint() * matrix, Eigen::MatrixXcd::Identity(d, d),
                      kAlgebraTol))
    throw std::invalid_argument("make_unitary: '" + name + "' is not unitary");
  return LocalOperator{std::move(dims), std::move(matrix), OperatorKind::unitary,
                       std::move(name)};
}

LocalOperator make_projector(std::vector<int> dims, Eigen::MatrixXcd matrix,
                             std::string name) {
  check_square(dims, matrix);
  if (!matrices_equal(matrix, matrix.adjoint(), kAlgebraTol))
    throw std::invalid_argument("make_projector: '" + name + "' is not Hermitian");
  if (!matrices_equal(matrix * matrix, matrix, kAlgebraTol))
    throw std::invalid_argument("make_projector: '" + name + "' is not idempotent");
  return LocalOperator{std::move(dims), std::move(matrix), OperatorKind::projector,
                       std::move(name)};
}

LocalOperator adjoint(const LocalOperator& op) {
  return LocalOperator{op.dims, op.matrix.adjoint(), op.kind, op.name + "^dag"};
}

StateVector apply_local(const StateVector& s, const LocalOperator& op,
                        const std::vector<int>& targets) {
  const int n = s.layout.count();
  if (targets.size() != op.dims.size())
    throw std::invalid_argument("apply_local: '" + op.name + "' acts on " +
                                std::to_string(op.dims.size()) + " subsystems, got " +
                                std::to_string(targets.size()) + " targets");
  for (size_t i = 0; i < targets.size(); ++i) {
    if (targets[i] < 0 || targets[i] >= n)
      throw std::invalid_argument("apply_local: no subsystem " +
                                  std::to_string(targets[i]));
    if (s.layout.dims[targets[i]] != op.dims[i])
      throw std::invalid_argument(
          "apply_local: '" + op.name + "' expects dimension " +
          std::to_string(op.dims[i]) + " at slot " + std::to_string(i) +
          ", subsystem " + std::to_string(targets[i]) + " has dimension " +
          std::to_string(s.layout.dims[targets[i]]));
    for (size_t j = 0; j < i; ++j)
      if (targets[j] == targets[i])
        throw std::invalid_argument("apply_local: repeated target " +
                                    std::to_string(targets[i]));
  }

  const std::vector<long> strides = s.layout.strides();
  const long d_op = op.dim();

  // Offsets of the operator's subspace: row index r of the matrix corresponds
  // to joint digits of the targets in the order given.
  std::vector<long> op_offset(d_op, 0);
  for (long r = 0; r < d_op; ++r) {
    long rest = r;
    for (int i = static_cast<int>(targets.size()) - 1; i >= 0; --i) {
      op_offset[r] += (rest % op.dims[i]) * strides[targets[i]];
      rest /= op.dims[i];
    }
  }

  // Enumerate the untouched subsystems with an odometer.
  std::vector<int> rest_subsystems;
  for (int i = 0; i < n; ++i)
    if (std::find(targets.begin(), targets.end(), i) == targets.end())
      rest_subsystems.push_back(i);
  long d_rest = 1;
  for (int i : rest_subsystems) d_rest *= s.layout.dims[i];

  std::vector<cplx> out(s.amplitudes.size());
  Eigen::VectorXcd x(d_op);
  for (long t = 0; t < d_rest; ++t) {
    long base = 0;
    long rest = t;
    for (int i = static_cast<int>(rest_subsystems.size()) - 1; i >= 0; --i) {
      const int d = s.layout.dims[rest_subsystems[i]];
      base += (rest % d) * strides[rest_subsystems[i]];
      rest /= d;
    }
    for (long r = 0; r < d_op; ++r) x(r) = s.amplitudes[base + op_offset[r]];
    const Eigen::VectorXcd y = op.matrix * x;
    for (long r = 0; r < d_op; ++r) out[base + op_offset[r]] = y(r);
  }
  return StateVector{s.layout, std::move(out)};
}

}  // namespace rsp
