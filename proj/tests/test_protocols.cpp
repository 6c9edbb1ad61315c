// End-to-end checks of the protocol runners: branch structure, probabilities,
// fidelities, correction bookkeeping, resource accounting, and the honest
// failure reporting on the six-level outcomes that admit no product
// correction.
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "rsp/circuits.hpp"
#include "rsp/gates.hpp"
#include "rsp/protocols.hpp"
#include "rsp/state.hpp"
#include "rsp/transcript.hpp"

using namespace rsp;

namespace {

constexpr double kTol = 1e-12;

doctest::Approx near(double want) { return doctest::Approx(want).epsilon(kTol); }

StateVector from_amplitudes(const std::vector<cplx>& amps) {
  return make_state(make_layout({static_cast<int>(amps.size())}), amps);
}

int count_steps(const ProtocolTranscript& t, const std::string& kind) {
  int n = 0;
  for (const Step& s : t.steps)
    if (s.kind == kind) ++n;
  return n;
}

}  // namespace

TEST_CASE("single-receiver run: two equiprobable branches deliver exactly") {
  const double theta = 0.8;
  const ProtocolTranscript t = run_single_receiver_rsp(theta);
  REQUIRE(t.branches.size() == 2);
  CHECK(t.protocol == "single_receiver");
  CHECK(t.mode == "enumerate");
  CHECK(t.verification_passed);
  CHECK(audit_locality(t).empty());

  const StateVector target = equatorial_qubit(theta);
  for (const BranchRecord& b : t.branches) {
    CHECK(b.probability == near(0.5));
    CHECK(b.success);
    CHECK(b.fidelity == near(1.0));
    REQUIRE(b.joint_dims == std::vector<int>{2});
    REQUIRE(b.receivers.size() == 1);
    CHECK(b.receivers[0].party == "bob");
    CHECK(b.receivers[0].purity == near(1.0));
    CHECK(b.receivers[0].fidelity == near(1.0));
    REQUIRE(b.receivers[0].amplitudes.size() == 2);
    CHECK(fidelity_up_to_global_phase(from_amplitudes(b.receivers[0].amplitudes),
                                      target) == near(1.0));
    REQUIRE(b.messages.size() == 1);
    CHECK(b.messages[0].alphabet_size == 2);
    CHECK(b.messages[0].payload == b.outcome_path.at(0));
  }
  // Only the outcome-0 branch needs the flip.
  CHECK(t.branches[0].corrections.at("bob") == "sigma_z");
  CHECK(t.branches[1].corrections.empty());

  CHECK(t.report.alphabet_size == 2);
  CHECK(t.report.classical_bits == near(1.0));
  CHECK(t.report.measurement_count == 1);
  CHECK(t.report.receiver_count == 1);
  CHECK(t.report.baseline_ebits == near(1.0));
  CHECK(t.report.baseline_bits == near(2.0));
  CHECK(t.report.baseline_measurements == 1);
  CHECK(t.report.entanglement_ebits == near(1.0));  // singlet
  CHECK(t.report.outcomes_equiprobable);
}

TEST_CASE("basic broadcast: three equiprobable corrected branches") {
  const double alpha = 0.6, beta = 0.8, theta = 0.9;
  const ProtocolTranscript t = run_basic_broadcast(alpha, beta, theta);
  REQUIRE(t.branches.size() == 3);
  CHECK(t.protocol == "basic");
  CHECK(t.construction == "circuit");
  CHECK(t.layout_dims == std::vector<int>{3, 2, 2});
  CHECK(t.verification_passed);
  CHECK(audit_locality(t).empty());

  const StateVector target = equatorial_qubit(theta, alpha, beta);
  const char* names[3] = {"I", "U_b", "U_b^-1"};
  for (int m = 0; m < 3; ++m) {
    const BranchRecord& b = t.branches[m];
    CHECK(b.outcome_path == std::vector<int>{m});
    CHECK(b.probability == near(1.0 / 3.0));
    CHECK(b.success);
    CHECK(b.fidelity == near(1.0));
    CHECK(b.corrections.at("bob") == names[m]);
    CHECK(b.corrections.at("charlie") == names[m]);
    REQUIRE(b.receivers.size() == 2);
    CHECK(b.receivers[0].party == "bob");
    CHECK(b.receivers[1].party == "charlie");
    for (const ReceiverOutcome& r : b.receivers) {
      CHECK(r.purity == near(1.0));
      CHECK(r.fidelity == near(1.0));
      CHECK(fidelity_up_to_global_phase(from_amplitudes(r.amplitudes), target) ==
            near(1.0));
    }
    CHECK(b.joint_dims == std::vector<int>{2, 2});
    CHECK(b.joint_amplitudes.size() == 4);
    REQUIRE(b.messages.size() == 1);
    CHECK(b.messages[0].alphabet_size == 3);
  }
  CHECK(count_steps(t, "measure") == 1);
}

TEST_CASE("basic broadcast accounting beats teleporting to each receiver") {
  const double u = 1.0 / std::sqrt(2.0);
  const ProtocolTranscript t = run_basic_broadcast(u, u, 0.4);
  CHECK(t.report.entanglement_ebits == doctest::Approx(1.5).epsilon(1e-10));
  CHECK(t.report.classical_bits == near(std::log2(3.0)));
  CHECK(t.report.measurement_count == 1);
  CHECK(t.report.receiver_count == 2);
  CHECK(t.report.alphabet_size == 3);
  CHECK(t.report.outcomes_equiprobable);
  CHECK(t.report.baseline_ebits == near(2.0));
  CHECK(t.report.baseline_bits == near(4.0));
  CHECK(t.report.baseline_measurements == 2);
  CHECK(t.report.entanglement_ebits < t.report.baseline_ebits);
  CHECK(t.report.classical_bits < t.report.baseline_bits);
  CHECK(t.report.measurement_count < t.report.baseline_measurements);

  // Away from uniform amplitudes the resource is cheaper still.
  const ProtocolTranscript skew = run_basic_broadcast(0.6, 0.8, 0.4);
  CHECK(skew.report.entanglement_ebits < 1.5);
}

TEST_CASE("basic broadcast sampling returns one enumerated branch") {
  RunOptions sample{MeasureMode::sample_one, 20260814};
  const ProtocolTranscript s = run_basic_broadcast(0.6, 0.8, 1.2, sample);
  const ProtocolTranscript e = run_basic_broadcast(0.6, 0.8, 1.2);
  REQUIRE(s.branches.size() == 1);
  CHECK(s.mode == "sample");
  CHECK(s.verification_passed);
  const BranchRecord& picked = s.branches[0];
  REQUIRE(picked.outcome_path.size() == 1);
  const BranchRecord& match = e.branches.at(picked.outcome_path[0]);
  CHECK(picked.probability == near(match.probability));
  CHECK(picked.fidelity == near(match.fidelity));
  REQUIRE(picked.joint_amplitudes.size() == match.joint_amplitudes.size());
  for (std::size_t i = 0; i < picked.joint_amplitudes.size(); ++i)
    CHECK(std::abs(picked.joint_amplitudes[i] - match.joint_amplitudes[i]) <
          kTol);

  // Same seed, same transcript, byte for byte.
  const ProtocolTranscript again = run_basic_broadcast(0.6, 0.8, 1.2, sample);
  CHECK(s == again);
  CHECK(to_canonical_string(s) == to_canonical_string(again));
}

TEST_CASE("different-bases run corrects the x-basis receiver") {
  const double theta = 0.7;
  const ProtocolTranscript t = run_diff_bases(theta);
  REQUIRE(t.branches.size() == 3);
  CHECK(t.protocol == "diff_bases");
  CHECK(t.verification_passed);

  const StateVector bob_target = equatorial_qubit(theta);
  const StateVector charlie_target = apply_local(bob_target, hadamard(), {0});
  const char* bob_names[3] = {"I", "U_b", "U_b^-1"};
  const char* charlie_names[3] = {"I", "U_c", "U_c^-1"};
  for (int m = 0; m < 3; ++m) {
    const BranchRecord& b = t.branches[m];
    CHECK(b.probability == near(1.0 / 3.0));
    CHECK(b.fidelity == near(1.0));
    CHECK(b.corrections.at("bob") == bob_names[m]);
    CHECK(b.corrections.at("charlie") == charlie_names[m]);
    REQUIRE(b.receivers.size() == 2);
    CHECK(fidelity_up_to_global_phase(
              from_amplitudes(b.receivers[0].amplitudes), bob_target) ==
          near(1.0));
    CHECK(fidelity_up_to_global_phase(
              from_amplitudes(b.receivers[1].amplitudes), charlie_target) ==
          near(1.0));
  }
  CHECK(t.report.alphabet_size == 3);
  CHECK(t.report.entanglement_ebits == doctest::Approx(1.5).epsilon(1e-10));
}

TEST_CASE("probabilistic unknown-angle run: success weight 1/3, honest aborts") {
  const double alpha = 0.6, beta = 0.8, theta = 0.45;
  const ProtocolTranscript t = run_probabilistic_unknown_angle(alpha, beta, theta);
  REQUIRE(t.branches.size() == 5);
  CHECK(t.protocol == "probabilistic");
  CHECK(t.verification_passed);  // aborts are part of the contract
  CHECK(audit_locality(t).empty());

  double success_weight = 0.0;
  double abort_weight = 0.0;
  const char* names[3] = {"I", "U_b", "U_b^-1"};
  for (const BranchRecord& b : t.branches) {
    if (b.success) {
      REQUIRE(b.outcome_path.size() == 2);
      CHECK(b.outcome_path[0] == 0);
      CHECK(b.probability == near(1.0 / 9.0));
      CHECK(b.fidelity == near(1.0));
      CHECK(b.metrics.at("phase_application_fidelity") == near(1.0));
      CHECK(b.corrections.at("bob") == names[b.outcome_path[1]]);
      CHECK(b.corrections.at("charlie") == names[b.outcome_path[1]]);
      REQUIRE(b.messages.size() == 2);
      CHECK(b.joint_amplitudes.size() == 4);
      success_weight += b.probability;
    } else {
      REQUIRE(b.outcome_path.size() == 1);
      CHECK(b.outcome_path[0] > 0);
      CHECK(b.probability == near(1.0 / 3.0));
      CHECK(b.metrics.at("aborted") == near(1.0));
      CHECK(b.corrections.empty());
      CHECK(b.joint_dims == std::vector<int>{2, 2});
      CHECK(b.joint_amplitudes.empty());  // no corrected state exists
      CHECK(b.fidelity < 1.0 - 1e-3);
      abort_weight += b.probability;
    }
  }
  CHECK(success_weight == near(1.0 / 3.0));
  CHECK(abort_weight == near(2.0 / 3.0));

  CHECK(t.report.alphabet_size == 9);  // abort announcement and correction index
  CHECK(t.report.classical_bits == near(std::log2(9.0)));
  CHECK(t.report.measurement_count == 2);
  CHECK(t.report.baseline_bits == near(4.0));
}

TEST_CASE("n-party broadcast for every supported receiver count") {
  const double alpha = 0.6, beta = 0.8, theta = 1.1;
  for (int n = 1; n <= 8; ++n) {
    CAPTURE(n);
    const ProtocolTranscript t = run_n_party(alpha, beta, theta, n);
    REQUIRE(t.branches.size() == static_cast<std::size_t>(n + 1));
    CHECK(t.protocol == "nparty");
    CHECK(t.verification_passed);
    CHECK(audit_locality(t).empty());

    const StateVector target = equatorial_qubit(theta, alpha, beta);
    for (int m = 0; m <= n; ++m) {
      const BranchRecord& b = t.branches[m];
      CHECK(b.probability == near(1.0 / (n + 1.0)));
      CHECK(b.fidelity == near(1.0));
      const std::string want =
          "U_m[m=" + std::to_string(m) + ",n=" + std::to_string(n) + "]";
      REQUIRE(b.receivers.size() == static_cast<std::size_t>(n));
      for (int i = 1; i <= n; ++i) {
        CHECK(b.corrections.at("r" + std::to_string(i)) == want);
        const ReceiverOutcome& r = b.receivers[i - 1];
        CHECK(r.party == "r" + std::to_string(i));
        CHECK(r.purity == near(1.0));
        CHECK(fidelity_up_to_global_phase(from_amplitudes(r.amplitudes),
                                          target) == near(1.0));
      }
      REQUIRE(b.messages.size() == 1);
      CHECK(b.messages[0].alphabet_size == n + 1);
    }

    CHECK(t.report.receiver_count == n);
    CHECK(t.report.alphabet_size == n + 1);
    CHECK(t.report.classical_bits == near(std::log2(n + 1.0)));
    CHECK(t.report.baseline_bits == near(2.0 * n));
    CHECK(t.report.classical_bits < t.report.baseline_bits);
    CHECK(t.report.entanglement_ebits <= std::log2(n + 1.0) + 1e-9);
    CHECK(t.report.measurement_count == 1);
  }
}

TEST_CASE("different-states broadcast delivers per-receiver angles") {
  const double theta1 = 0.4, theta2 = 1.3;
  const ProtocolTranscript t = run_diff_states(theta1, theta2);
  REQUIRE(t.branches.size() == 4);
  CHECK(t.protocol == "diff_states");
  CHECK(t.construction == "qudit_circuit");
  CHECK(t.layout_dims == std::vector<int>{4, 2, 2});
  CHECK(t.verification_passed);

  const StateVector bob_target = equatorial_qubit(theta1);
  const StateVector charlie_target = equatorial_qubit(theta2);
  for (int m = 0; m < 4; ++m) {
    const BranchRecord& b = t.branches[m];
    CHECK(b.probability == near(0.25));
    CHECK(b.fidelity == near(1.0));
    CHECK(b.corrections.at("bob") == "U_b[j=" + std::to_string(m) + "]");
    CHECK(b.corrections.at("charlie") == "U_c[j=" + std::to_string(m) + "]");
    REQUIRE(b.receivers.size() == 2);
    CHECK(fidelity_up_to_global_phase(
              from_amplitudes(b.receivers[0].amplitudes), bob_target) ==
          near(1.0));
    CHECK(fidelity_up_to_global_phase(
              from_amplitudes(b.receivers[1].amplitudes), charlie_target) ==
          near(1.0));
    CHECK(b.messages.at(0).alphabet_size == 4);
  }
  CHECK(t.report.alphabet_size == 4);
  CHECK(t.report.classical_bits == near(2.0));
  CHECK(t.report.entanglement_ebits == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(t.report.baseline_bits == near(4.0));
}

TEST_CASE("qutrit broadcast: six equiprobable branches, honest failures on 3-5") {
  const double u = 1.0 / std::sqrt(3.0);
  const ProtocolTranscript t = run_qutrit_broadcast(0.5, 1.3, u, u, u);
  REQUIRE(t.branches.size() == 6);
  CHECK(t.protocol == "qutrit");
  CHECK_FALSE(t.verification_passed);  // outcomes 3-5 cannot be corrected
  REQUIRE(!t.notes.empty());
  CHECK(t.notes.front().find("outcomes 3-5") != std::string::npos);
  CHECK(audit_locality(t).empty());

  for (int m = 0; m < 6; ++m) {
    const BranchRecord& b = t.branches[m];
    CAPTURE(m);
    CHECK(b.probability == near(1.0 / 6.0));
    CHECK(b.corrections.at("bob") == "U_q[m=" + std::to_string(m) + "]");
    CHECK(b.corrections.at("charlie") == b.corrections.at("bob"));
    CHECK(b.messages.at(0).alphabet_size == 6);
    if (m < 3) {
      CHECK(b.success);
      CHECK(b.fidelity == near(1.0));
      CHECK(b.metrics.at("correction_residual") == near(0.0));
      CHECK(b.metrics.at("joint_purity_across_receivers") == near(1.0));
      CHECK(b.receivers.at(0).purity == near(1.0));
    } else {
      CHECK_FALSE(b.success);
      // Frozen values for uniform coefficients: the corrected state keeps a
      // residual entanglement across the receivers.
      CHECK(b.fidelity == near(25.0 / 81.0));
      CHECK(b.metrics.at("correction_residual") == near(2.0));
      CHECK(b.metrics.at("joint_purity_across_receivers") == near(11.0 / 27.0));
      CHECK(b.receivers.at(0).amplitudes.empty());  // local state is mixed
    }
  }

  CHECK(t.report.alphabet_size == 6);
  CHECK(t.report.classical_bits == near(std::log2(6.0)));
  CHECK(t.report.baseline_ebits == near(2.0 * std::log2(3.0)));
  CHECK(t.report.baseline_bits == near(4.0 * std::log2(3.0)));
  CHECK(t.report.classical_bits < t.report.baseline_bits);
  CHECK(t.report.entanglement_ebits < t.report.baseline_ebits);

  // Equiprobability does not depend on the coefficients.
  const ProtocolTranscript skew =
      run_qutrit_broadcast(0.2, 2.1, 0.5, 0.5, std::sqrt(0.5));
  for (const BranchRecord& b : skew.branches)
    CHECK(b.probability == near(1.0 / 6.0));
}

TEST_CASE("encrypted transfer: differ branch recovers the message exactly") {
  const double theta = 0.8, phi = 1.9;
  const ProtocolTranscript t = run_encrypted_transfer(theta, phi, 64);
  REQUIRE(t.branches.size() == 2);
  CHECK(t.protocol == "encrypted");
  CHECK(t.verification_passed);
  CHECK(audit_locality(t).empty());

  const BranchRecord& differ = t.branches[0];
  CHECK(differ.outcome_path == std::vector<int>{0});
  CHECK(differ.probability == near(0.5));
  CHECK(differ.success);
  CHECK(differ.fidelity == near(1.0));
  CHECK(differ.corrections.at("charlie") == "CNOT");
  REQUIRE(differ.receivers.size() == 1);
  CHECK(differ.receivers[0].party == "charlie");
  CHECK(differ.receivers[0].purity == near(1.0));
  CHECK(fidelity_up_to_global_phase(
            from_amplitudes(differ.receivers[0].amplitudes),
            equatorial_qubit(phi)) == near(1.0));

  const BranchRecord& match = t.branches[1];
  CHECK(match.probability == near(0.5));
  CHECK_FALSE(match.success);
  CHECK(match.corrections.empty());

  // The midpoint average over the key angle is exactly maximally mixed even
  // on the coarsest grid.
  for (const BranchRecord& b : t.branches)
    CHECK(b.metrics.at("eavesdropper_trace_distance") <= kTol);
  const ProtocolTranscript coarse = run_encrypted_transfer(theta, phi, 2);
  CHECK(coarse.branches[0].metrics.at("eavesdropper_trace_distance") <= kTol);

  CHECK(t.report.alphabet_size == 1);  // nothing is announced
  CHECK(t.report.classical_bits == near(0.0));
  CHECK(t.report.entanglement_ebits == near(0.0));  // product resource
  CHECK(t.report.receiver_count == 1);
}

TEST_CASE("anonymous voting decodes exactly and flags tampering") {
  const std::vector<int> votes{0, 1, 1};
  const ProtocolTranscript t = run_voting(votes, 0.4, 2, 97);
  REQUIRE(t.branches.size() == 1);
  const BranchRecord& b = t.branches[0];
  CHECK(t.protocol == "voting");
  CHECK(t.mode == "sample");
  CHECK(t.parameters.at("tamper").is_null());
  CHECK(t.verification_passed);
  CHECK(audit_locality(t).empty());

  CHECK(b.success);
  CHECK(b.fidelity == near(1.0));
  for (std::size_t v = 0; v < votes.size(); ++v)
    CHECK(b.metrics.at("decoded_vote_" + std::to_string(v + 1)) ==
          near(votes[v]));
  CHECK(b.metrics.at("deliveries") == near(9.0));  // 3 voters x (2 decoys + 1)
  CHECK(b.outcome_path.size() == 9);
  CHECK(b.probability == near(std::pow(0.5, 9.0)));
  CHECK(b.metrics.at("decoy_failures") == near(0.0));
  CHECK(b.metrics.at("tamper_flagged") == near(0.0));
  CHECK(b.metrics.at("readout_orthogonality_residual") <= kTol);

  // An in-transit flip on any decoy trips the check with certainty.
  const ProtocolTranscript bad =
      run_voting(votes, 0.4, 2, 97, std::make_pair(1, 0));
  CHECK(bad.parameters.at("tamper") == nlohmann::json({1, 0}));
  const BranchRecord& bb = bad.branches.at(0);
  CHECK(bb.metrics.at("tamper_flagged") == near(1.0));
  CHECK(bb.metrics.at("decoy_failures") >= 1.0);
  CHECK_FALSE(bb.success);
  CHECK_FALSE(bad.verification_passed);
  // The vote carriers themselves were untouched.
  CHECK(bb.fidelity == near(1.0));

  CHECK(t.report.receiver_count == 3);
  CHECK(t.report.classical_bits == near(1.0));
  CHECK(t.report.baseline_bits == near(2.0));
}

TEST_CASE("bell sharing yields the Bell states with weights (1/4, 1/4, 1/2)") {
  const ProtocolTranscript t = run_bell_sharing();
  REQUIRE(t.branches.size() == 3);
  CHECK(t.protocol == "bell_sharing");
  CHECK(t.verification_passed);
  CHECK(audit_locality(t).empty());

  const double want_p[3] = {0.25, 0.25, 0.5};
  for (int m = 0; m < 3; ++m) {
    const BranchRecord& b = t.branches[m];
    CHECK(b.probability == near(want_p[m]));
    CHECK(b.success);
    CHECK(b.fidelity == near(1.0));
    CHECK(b.corrections.empty());  // the receivers keep what they are dealt
    CHECK(b.metrics.at("receiver_entropy_bits") == near(1.0));
    CHECK(b.joint_dims == std::vector<int>{2, 2});
    CHECK(b.messages.at(0).alphabet_size == 3);
  }
  CHECK(t.report.alphabet_size == 3);
  CHECK_FALSE(t.report.outcomes_equiprobable);
  CHECK(t.report.entanglement_ebits == doctest::Approx(1.5).epsilon(1e-10));
  CHECK(t.report.measurement_count == 1);
}

TEST_CASE("controlled entanglement: weights follow the pair-target overlap") {
  const double theta0 = 0.3, theta1 = 1.8;
  const ProtocolTranscript t = run_controlled_entanglement(theta0, theta1);
  REQUIRE(t.branches.size() == 6);
  CHECK(t.protocol == "controlled_entanglement");
  CHECK(t.verification_passed);
  CHECK(audit_locality(t).empty());

  // <pair0|pair1> is the squared single-qubit overlap; the +-x control
  // measurement weights are (1 +- Re of it)/2 in every outcome block.
  const cplx ip =
      inner_product(equatorial_qubit(theta0), equatorial_qubit(theta1));
  const double re = (ip * ip).real();
  const char* names[3] = {"I", "U_b", "U_b^-1"};
  for (const BranchRecord& b : t.branches) {
    REQUIRE(b.outcome_path.size() == 2);
    const int m = b.outcome_path[0];
    const int s = b.outcome_path[1];
    CAPTURE(m);
    CAPTURE(s);
    const double want = (1.0 + (s == 0 ? re : -re)) / 6.0;
    CHECK(b.probability == near(want));
    CHECK(b.fidelity == near(1.0));
    CHECK(b.metrics.at("control_entangled_fidelity") == near(1.0));
    CHECK(b.corrections.at("bob") == names[m]);
    CHECK(b.corrections.at("charlie") == names[m]);
    REQUIRE(b.messages.size() == 2);
    CHECK(b.messages[0].alphabet_size == 3);
    CHECK(b.messages[1].alphabet_size == 2);
  }

  // Equal angles: the difference branches carry no weight and are marked.
  const ProtocolTranscript same = run_controlled_entanglement(0.9, 0.9);
  CHECK(same.verification_passed);
  for (const BranchRecord& b : same.branches) {
    if (b.outcome_path[1] == 1) {
      CHECK(b.probability <= kTol);
      CHECK(b.metrics.count("zero_probability_branch") == 1);
      CHECK(b.fidelity == near(1.0));  // vacuous by convention
    } else {
      CHECK(b.probability == near(1.0 / 3.0));
      CHECK(b.fidelity == near(1.0));
      // The summed target collapses to the product state, so the receivers
      // end up unentangled.
      CHECK(b.metrics.at("receiver_entropy_bits") == near(0.0));
    }
    // The corrections never depend on the angles.
    CHECK(b.corrections.at("bob") == names[b.outcome_path[0]]);
  }

  CHECK(t.report.alphabet_size == 6);
  CHECK_FALSE(t.report.outcomes_equiprobable);
  CHECK(t.report.measurement_count == 2);
  CHECK(t.report.entanglement_ebits == doctest::Approx(1.5).epsilon(1e-10));
}

TEST_CASE("entropy sweep matches the closed form across the grid") {
  const std::vector<EntropySweepRow> rows = entropy_sweep(0.0, 1.0, 101);
  REQUIRE(rows.size() == 101);
  CHECK(rows.front().p == near(0.0));
  CHECK(rows.back().p == near(1.0));
  CHECK(rows.front().closed_form == near(0.0));
  CHECK(rows.back().closed_form == near(0.0));
  CHECK(rows[50].p == near(0.5));
  CHECK(rows[50].closed_form == near(1.5));
  for (const EntropySweepRow& r : rows) {
    CHECK(r.abs_diff <= 1e-10);
    CHECK(r.closed_form <= 1.5 + 1e-12);
    CHECK(r.closed_form == near(broadcast_entanglement(r.p)));
  }

  CHECK(broadcast_entanglement(0.0) == near(0.0));
  CHECK(broadcast_entanglement(1.0) == near(0.0));
  CHECK(broadcast_entanglement(0.5) == near(1.5));
}

TEST_CASE("parameter validation rejects out-of-contract inputs") {
  CHECK_THROWS_AS(run_n_party(0.6, 0.8, 0.1, 0), std::invalid_argument);
  CHECK_THROWS_AS(run_n_party(0.6, 0.8, 0.1, 9), std::invalid_argument);
  CHECK_THROWS_AS(run_basic_broadcast(0.9, 0.5, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(run_basic_broadcast(-0.6, 0.8, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(run_qutrit_broadcast(0.1, 0.2, 0.9, 0.5, 0.5),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_encrypted_transfer(0.1, 0.2, 1), std::invalid_argument);
  CHECK_THROWS_AS(run_voting({0, 2}, 0.1, 1, 5), std::invalid_argument);
  CHECK_THROWS_AS(run_voting({0, 1}, 0.1, -1, 5), std::invalid_argument);
  CHECK_THROWS_AS(run_voting({0, 1}, 0.1, 2, 5, std::make_pair(2, 0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_voting({0, 1}, 0.1, 2, 5, std::make_pair(0, 2)),
                  std::invalid_argument);
  CHECK_THROWS_AS(entropy_sweep(0.5, 0.5, 10), std::invalid_argument);
  CHECK_THROWS_AS(entropy_sweep(0.0, 1.2, 10), std::invalid_argument);
  CHECK_THROWS_AS(entropy_sweep(0.0, 1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(broadcast_entanglement(-0.01), std::invalid_argument);
  CHECK_THROWS_AS(broadcast_entanglement(1.01), std::invalid_argument);
}
