#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "rsp/measure.hpp"
#include "rsp/transcript.hpp"

namespace rsp {

struct RunOptions {
  MeasureMode mode = MeasureMode::enumerate_all;
  std::uint64_t seed = 0;
};

// Singlet-based warm-up: the sender measures her half of a singlet in
// {psi(theta), psi(theta+pi/2)} and the receiver flips with sigma_z only on
// outcome 0.  Two branches of probability 1/2, fidelity 1, one classical bit.
ProtocolTranscript run_single_receiver_rsp(double theta, RunOptions opt = {});

// Same equatorial state alpha e^{i theta}|0> + beta e^{-i theta}|1> to two
// receivers via the qutrit resource; three equiprobable outcomes.
ProtocolTranscript run_basic_broadcast(double alpha, double beta, double theta,
                                       RunOptions opt = {});

// Uniform-amplitude variant where the second receiver works in the x basis
// and corrects with the Hadamard-conjugated operator.
ProtocolTranscript run_diff_bases(double theta, RunOptions opt = {});

// The sender holds a qutrit encoding an angle she does not know, entangles it
// with her resource qutrit through C-W, and measures it; outcome 0 (chance
// 1/3) leaves the resource exactly as if she had applied the phase operator
// herself, after which the broadcast completes.  Other outcomes are recorded
// as failures and never corrected.
ProtocolTranscript run_probabilistic_unknown_angle(double alpha, double beta,
                                                   double theta_hidden,
                                                   RunOptions opt = {});

// Same state to n receivers (1 <= n <= 8) via the (n+1)-level qudit resource;
// n+1 equiprobable outcomes, one broadcast message of log2(n+1) bits.
ProtocolTranscript run_n_party(double alpha, double beta, double theta, int n,
                               RunOptions opt = {});

// Different equatorial angles to the two receivers via the four-level
// resource; four equiprobable outcomes with per-receiver corrections.
ProtocolTranscript run_diff_states(double theta1, double theta2, RunOptions opt = {});

// Qutrit targets alpha|0> + beta e^{i theta1}|1> + gamma e^{i theta2}|2> to
// two receivers via the six-level resource.  All six outcome branches are
// recorded with the prescribed diagonal corrections and honest fidelities.
ProtocolTranscript run_qutrit_broadcast(double theta1, double theta2, double alpha,
                                        double beta, double gamma,
                                        RunOptions opt = {});

// One receiver forwards its key state rotated by the message angle; the other
// projects the pair onto the unequal subspace (success chance 1/2) and
// relabels with a CNOT to recover the message.  Also reports the eavesdropper
// view: the uniform average over the key angle of the transmitted qubit,
// computed by midpoint quadrature on `grid_points` points, compared to I/2.
ProtocolTranscript run_encrypted_transfer(double theta_key, double phi_message,
                                          int grid_points, RunOptions opt = {});

// Each voter receives equatorial states at voter-specific angles (vote qubit
// plus `decoys_per_voter` decoys) through the one-receiver broadcast
// machinery, verifies the announced decoys, votes by applying sigma_z or not,
// and returns the vote qubit for deterministic readout.  `tamper`, when set,
// flips the given (voter, decoy) in transit so the integrity check trips.
ProtocolTranscript run_voting(const std::vector<int>& votes, double theta,
                              int decoys_per_voter, std::uint64_t seed,
                              std::optional<std::pair<int, int>> tamper = {});

// The sender measures the uniform basic resource in {|0>+-|1>, |2>}; the two
// receivers end up sharing a Bell state (probabilities 1/4, 1/4, 1/2).
ProtocolTranscript run_bell_sharing(RunOptions opt = {});

// A control qubit in |+x> selects between two sender angles; after the usual
// measurement and theta-independent corrections, the receivers hold a
// superposition of the two product targets entangled with the control, which
// a final +-x measurement collapses onto their normalized sum or difference.
ProtocolTranscript run_controlled_entanglement(double theta0, double theta1,
                                               RunOptions opt = {});

// Recomputes the accounting block of a finished transcript: entanglement
// across the sender/receiver cut of the recorded resource, broadcast message
// size, measurement count, and the teleportation baseline for the same
// receiver set.
ResourceReport resource_report(const ProtocolTranscript& t);

// Closed-form entanglement (bits) of the basic resource at p = alpha^2:
// -2p log2 p - 2(1-p) log2(1-p) - 2p(1-p).
double broadcast_entanglement(double p);

struct EntropySweepRow {
  double p = 0.0;
  double closed_form = 0.0;
  double numerical = 0.0;  // partial-trace entropy of the built resource
  double abs_diff = 0.0;
};

// Evaluates broadcast_entanglement against the partial-trace entropy on an
// even grid of `steps` points over [p_from, p_to].
std::vector<EntropySweepRow> entropy_sweep(double p_from, double p_to, int steps);

}  // namespace rsp
