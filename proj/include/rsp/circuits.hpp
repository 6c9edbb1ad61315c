#pragma once

#include <string>
#include <vector>

#include "rsp/state.hpp"

namespace rsp {

// How a resource state was built: by transcribing amplitudes directly, or by
// running the corresponding preparation circuit gate by gate.  The
// different-states resource additionally distinguishes its qudit circuit from
// the two-qubit alternative.
enum class Construction { direct, circuit, qudit_circuit, two_qubit_circuit };

std::string construction_name(Construction c);
Construction construction_from_name(const std::string& name);

// A shared resource plus the bookkeeping a protocol run needs: which
// subsystems the sender keeps, which go to receivers (in receiver order), and
// a gate-by-gate narration of how the state was produced.
struct ResourceState {
  StateVector state;
  std::vector<int> sender_subsystems;
  std::vector<int> receiver_subsystems;
  Construction construction = Construction::direct;
  std::vector<std::string> build_steps;
};

// Qutrit + two qubits, layout [3,2,2]: alpha^2|0,00> + beta^2|1,11>
// + alpha beta |2>(|01>+|10>).  The circuit form starts from
// |0>(alpha|0>+beta|1>)^2 and applies two controlled-V gates.
ResourceState resource_basic(double alpha, double beta, Construction how);

// The basic resource at uniform amplitudes with the second receiver's qubit
// rotated by Hadamard, so that receiver works in the x basis.
ResourceState resource_diff_bases(Construction how);

// (n+1)-level qudit + n qubits: sum_k alpha^k beta^(n-k) sqrt(C(n,k))
// |k>|k zeros among n qubits>.  The circuit form starts the qubits in
// alpha|0> + beta|1>, shifts the qudit up once per qubit in |1>, and finishes
// with the relabeling |j> -> |n-j> so that the qudit level counts zeros.
ResourceState resource_n_party(double alpha, double beta, int n, Construction how);

// Four-level qudit + two qubits: (1/2) sum_k |k>|k as two bits>.  Built
// directly, as a qudit circuit (two controlled shifts from the first qubit,
// one from the second), or as a two-qubit circuit (two CNOTs followed by
// regrouping the qubit pair as one four-level subsystem).
ResourceState resource_diff_states(Construction how);

// Six-level qudit + two qutrits: alpha^2|0,00> + alpha beta|1>(|01>+|10>)
// + beta^2|2,11> + alpha gamma|3>(|02>+|20>) + gamma^2|4,22>
// + beta gamma|5>(|12>+|21>).  The circuit form shifts the qudit by each
// qutrit's value, then applies two conditional shifts that move the
// (|02>,|20>) terms up one level and the (|12>,|21>) terms up two.
ResourceState resource_qutrit(double alpha, double beta, double gamma,
                              Construction how);

// Normalized symmetric n-qubit state with `zeros` qubits in |0>.
StateVector dicke_state(int n, int zeros);

// (|01> - |10>)/sqrt2 on layout [2,2].
StateVector singlet();

// Von Neumann entropy (bits) across the sender/receiver cut of a resource.
double sender_entropy(const ResourceState& r);

}  // namespace rsp
