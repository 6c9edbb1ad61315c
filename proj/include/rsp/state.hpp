#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rsp/layout.hpp"
#include "rsp/types.hpp"

namespace rsp {

// Pure state of a mixed-dimension register, stored densely.
struct StateVector {
  SubsystemLayout layout;
  std::vector<cplx> amplitudes;

  double norm() const;
};

// Validates the amplitude count and the norm (within kNormTol of 1), then
// renormalizes exactly.
StateVector make_state(SubsystemLayout layout, std::vector<cplx> amplitudes);

// Computational basis state |indices>.
StateVector basis_state(SubsystemLayout layout, const std::vector<int>& indices);

// a (x) b, with a's subsystems more significant.
StateVector tensor(const StateVector& a, const StateVector& b);

cplx inner_product(const StateVector& a, const StateVector& b);

// |<a|b>|^2. Requires matching dimensions; insensitive to global phase and
// to the (unit) norms of slightly renormalized inputs.
double fidelity_up_to_global_phase(const StateVector& a, const StateVector& b);

struct DensityMatrix {
  SubsystemLayout layout;
  Eigen::MatrixXcd entries;
};

// Reduced state over `keep` (strictly ascending subsystem indices).
DensityMatrix partial_trace(const StateVector& state, const std::vector<int>& keep);

// Eigenvalues in ascending order. Requires a Hermitian matrix.
std::vector<double> eigenvalues(const DensityMatrix& rho);

// -sum lambda log2 lambda, eigenvalues below kEigenvalueFloor dropped.
double von_neumann_entropy(const DensityMatrix& rho);

// (1/2) * trace |a - b|.
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

// <target | rho | target> for a pure target on rho's register.
double overlap_with(const DensityMatrix& rho, const StateVector& target);

// Regroups `count` adjacent subsystems starting at `first` into a single
// subsystem whose dimension is their product. Amplitudes are untouched:
// with most-significant-first indexing the flat order is already correct.
StateVector merge_subsystems(const StateVector& s, int first, int count,
                             const std::string& label);

}  // namespace rsp
