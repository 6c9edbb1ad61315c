#pragma once

#include <utility>
#include <vector>

#include "rsp/measure.hpp"
#include "rsp/operators.hpp"
#include "rsp/state.hpp"

namespace rsp {

// ---------------------------------------------------------------------------
// Elementary operators
// ---------------------------------------------------------------------------

LocalOperator identity_op(int d);

// Cyclic shift |j> -> |j + amount mod d>.
LocalOperator shift_op(int d, int amount);

// V |j> = |j-1 mod 3> and W |j> = |j+1 mod 3>.
LocalOperator shift_down_qutrit();
LocalOperator shift_up_qutrit();

LocalOperator hadamard();
LocalOperator sigma_z();

// diag(e^{i phi}, e^{-i phi}); advances an equatorial qubit from angle theta
// to theta + phi (rotation about the z axis).
LocalOperator phase_rotation(double phi);

// Two-qubit controlled-NOT, first subsystem the control: |b,c> -> |b, c xor b>.
LocalOperator cnot();

// Relabeling |j> -> |image[j]>; `image` must be a permutation of 0..d-1.
LocalOperator permutation_op(int d, const std::vector<int>& image, std::string name);

// Shift on the trailing target subsystem conditioned on the joint value of the
// leading control subsystems: |controls=v>|k> -> |v>|k + amounts[v] mod target_dim>.
// Operator dims are control_dims followed by target_dim; amounts is indexed by
// the flat (mixed-radix) control value.
LocalOperator conditional_shift(std::vector<int> control_dims, int target_dim,
                                const std::vector<int>& amounts, std::string name);

// Qubit control: shift the d-level target by `amount` when the control is |1>.
LocalOperator qubit_controlled_shift(int target_dim, int amount);

// Qubit-controlled V on a qutrit (shift by -1 when the control is |1>).
LocalOperator controlled_v();

// Value-controlled shift: |j>|k> -> |j>|k + j mod target_dim>.
LocalOperator value_controlled_shift(int control_dim, int target_dim);

// Qutrit-controls-qutrit C-W gate, |j>|k> -> |j>|k + j mod 3>.
LocalOperator controlled_w();

// ---------------------------------------------------------------------------
// Sender phase operators (applied by the sender to encode the angle choice)
// ---------------------------------------------------------------------------

// Qutrit diag(e^{2 i theta}, e^{-2 i theta}, 1).
LocalOperator sender_phase_basic(double theta);

// (n+1)-level diag over k = 0..n of e^{i (2k - n) theta}.
LocalOperator sender_phase_n(double theta, int n);

// 4-level diag(e^{i(t1+t2)}, e^{i(t1-t2)}, e^{-i(t1-t2)}, e^{-i(t1+t2)}).
LocalOperator sender_phase_diff(double theta1, double theta2);

// 6-level diag(1, e^{i t1}, e^{2 i t1}, e^{i t2}, e^{2 i t2}, e^{i(t1+t2)}).
LocalOperator sender_phase_qutrit(double theta1, double theta2);

// Qubit-controlled sender phase on (qubit, qutrit): control value j selects
// the angle theta_j for the qutrit phase block.
LocalOperator controlled_sender_phase(double theta0, double theta1);

// ---------------------------------------------------------------------------
// Measurement bases
// ---------------------------------------------------------------------------

MeasurementBasis computational_basis(int target, int d);

// Vector m has entries e^{2 pi i m k / d} / sqrt(d).
MeasurementBasis fourier_basis(int target, int d);

// The three-outcome sender basis for the same-state qubit broadcast:
// u0 = (1,1,1)/sqrt3, u1 = (w, conj(w), 1)/sqrt3, u2 = conj(u1) with
// w = e^{2 pi i/3}.  Each vector equals a Fourier vector times a phase.
MeasurementBasis sender_basis_qutrit(int target);

// The six-outcome sender basis for the qutrit broadcast, transcribed entry
// by entry: u_m for m = 0..2 carries the character w^{m v(j)} with
// v = (0,1,2,2,1,0); u_{m+3} multiplies u_m by the level parity (-1)^j.
MeasurementBasis six_level_basis(int target);

// {psi(theta), psi(theta + pi/2)} with psi(t) = (e^{it}|0> + e^{-it}|1>)/sqrt2.
MeasurementBasis equatorial_pair_basis(int target, double theta);

// Qutrit basis {(|0>+|1>)/sqrt2, (|0>-|1>)/sqrt2, |2>} used to leave the two
// receivers sharing a Bell state.
MeasurementBasis qutrit_x_basis(int target);

// ---------------------------------------------------------------------------
// Receiver corrections (one per sender outcome)
// ---------------------------------------------------------------------------

// Qubit corrections for the basic broadcast: I, diag(e^{i pi/3}, e^{-i pi/3}),
// and the inverse of the latter.
LocalOperator correction_basic(int outcome);

// The same corrections conjugated by Hadamard, for the receiver working in
// the |+x>, |-x> basis.
LocalOperator correction_basic_xbasis(int outcome);

// N-party correction: |0> -> e^{2 pi i m/(n+1)}|0>, |1> -> |1>.
LocalOperator correction_n(int outcome, int n);

// Different-states corrections (first receiver, second receiver):
// diag(1, (-1)^j) and diag(1, e^{i pi j/2}).
std::pair<LocalOperator, LocalOperator> correction_diff(int outcome);

// Qutrit correction diag(1, e^{i chi1}, e^{i chi2}) with chi0 = 0, chi1 read
// off the (0,1) branch constraint and chi2 off the (0,2) branch constraint of
// the six-level outcome vector.  Always returns that operator; whether it
// satisfies the remaining branch constraints is reported by
// qutrit_correction_residual.
LocalOperator correction_qutrit(int outcome);

// Worst-case modulus |e^{i(chi_j + chi_k)} - e^{i arg(coefficient)}| over the
// six branch-phase constraints for the given outcome.  Zero means the
// correction restores every branch; the maximum possible value is 2.
double qutrit_correction_residual(int outcome);

// ---------------------------------------------------------------------------
// Projectors
// ---------------------------------------------------------------------------

// Two-qubit projector onto span{|01>, |10>} (the qubits differ).
LocalOperator pair_differs_projector();

// Complement: projector onto span{|00>, |11>}.
LocalOperator pair_matches_projector();

// ---------------------------------------------------------------------------
// Target-state constructors
// ---------------------------------------------------------------------------

// alpha e^{i theta}|0> + beta e^{-i theta}|1>. Requires alpha^2+beta^2 = 1
// within the normalization tolerance.
StateVector equatorial_qubit(double theta, double alpha = 0.70710678118654752,
                             double beta = 0.70710678118654752);

// alpha|0> + beta e^{i theta1}|1> + gamma e^{i theta2}|2>. Requires
// alpha^2+beta^2+gamma^2 = 1 within the normalization tolerance.
StateVector equatorial_qutrit(double theta1, double theta2,
                              double alpha = 0.57735026918962576,
                              double beta = 0.57735026918962576,
                              double gamma = 0.57735026918962576);

}  // namespace rsp
