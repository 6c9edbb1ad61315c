#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rsp/state.hpp"

namespace rsp {

enum class OperatorKind { unitary, projector };

// Dense operator acting on an ordered subset of subsystems. `dims` holds the
// dimensions of those subsystems in application order, most significant
// first, so the operator's row/column index is the mixed-radix number built
// from the targeted digits.
struct LocalOperator {
  std::vector<int> dims;
  Eigen::MatrixXcd matrix;
  OperatorKind kind = OperatorKind::unitary;
  std::string name;

  long dim() const;
};

// Checks U^dag U = I within kAlgebraTol.
LocalOperator make_unitary(std::vector<int> dims, Eigen::MatrixXcd m, std::string name);

// Checks P = P^dag and P^2 = P within kAlgebraTol.
LocalOperator make_projector(std::vector<int> dims, Eigen::MatrixXcd m, std::string name);

LocalOperator adjoint(const LocalOperator& op);

bool matrices_equal(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b, double tol);

// Applies `op` to the subsystems listed in `targets` (distinct indices; their
// order matches op.dims). Unitaries preserve the norm; projectors may shrink
// it (the result is intentionally left unnormalized).
StateVector apply_local(const StateVector& state, const LocalOperator& op,
                        const std::vector<int>& targets);

}  // namespace rsp
