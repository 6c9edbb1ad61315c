#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "rsp/types.hpp"

namespace rsp {

struct Party {
  std::string name;
  std::vector<int> held_subsystems;      // holdings when the protocol ends
  std::vector<std::string> applied_ops;  // names of operators this party applied
};

struct ClassicalMessage {
  std::string from;
  std::string to;  // party name, or "all" for a broadcast
  int payload = 0;
  int alphabet_size = 1;
};

// One entry of the ordered protocol log.  Kinds: prepare, distribute,
// operate, measure, broadcast, correct, verify, note.  `targets` are
// subsystem indices into the transcript layout; `recipient` is set for
// distribute/broadcast steps.
struct Step {
  std::string kind;
  std::string party;
  std::string detail;
  std::vector<int> targets;
  std::string recipient;
};

struct ReceiverOutcome {
  std::string party;
  double fidelity = 0.0;  // overlap of the receiver's reduced state with its target
  double purity = 0.0;    // trace of rho^2; 1 means the local state is pure
  std::vector<cplx> amplitudes;  // local state when pure (fixed-phase), else empty
};

struct BranchRecord {
  std::vector<int> outcome_path;  // measurement outcomes in protocol order
  double probability = 0.0;
  bool success = false;
  double fidelity = 0.0;  // joint receiver-side fidelity with the target
  std::vector<ReceiverOutcome> receivers;
  std::vector<int> joint_dims;          // receiver-side register
  std::vector<cplx> joint_amplitudes;   // receiver-side state after corrections
  std::vector<ClassicalMessage> messages;
  std::map<std::string, std::string> corrections;  // party -> operator name
  std::map<std::string, double> metrics;           // named per-branch numbers
};

struct ResourceReport {
  double entanglement_ebits = 0.0;
  double classical_bits = 0.0;
  int measurement_count = 0;
  int receiver_count = 0;
  bool outcomes_equiprobable = false;
  int alphabet_size = 1;
  double baseline_ebits = 0.0;  // teleportation comparison
  double baseline_bits = 0.0;
  int baseline_measurements = 0;
};

struct ProtocolTranscript {
  int schema = 1;
  std::string protocol;
  nlohmann::json parameters;  // name -> numeric or array value
  std::string mode;           // "enumerate" | "sample"
  std::uint64_t seed = 0;

  std::string construction;
  std::vector<std::string> resource_steps;
  std::vector<int> layout_dims;
  std::vector<std::string> layout_labels;
  std::vector<cplx> resource_amplitudes;
  std::vector<int> sender_subsystems;
  std::vector<int> receiver_subsystems;

  std::vector<Party> parties;
  std::vector<Step> steps;
  std::vector<BranchRecord> branches;
  ResourceReport report;

  bool verification_passed = false;
  std::vector<std::string> notes;
};

// JSON form: sorted keys; amplitudes as [re, im] pairs whose components are
// strings carrying 17 significant digits (lossless double round-trip); other
// doubles use shortest round-trip formatting — so equal transcripts serialize
// to equal bytes.
nlohmann::json to_json(const ProtocolTranscript& t);
ProtocolTranscript transcript_from_json(const nlohmann::json& j);

std::string to_canonical_string(const ProtocolTranscript& t);
bool operator==(const ProtocolTranscript& a, const ProtocolTranscript& b);

// One CSV row per branch: outcome path, probability, success, fidelity, and
// per-receiver fidelities.
std::string to_csv(const ProtocolTranscript& t);

// Replays the step log tracking subsystem custody.  Returns one description
// per violation (a party acting on a subsystem it does not hold); empty means
// every operation was local.
std::vector<std::string> audit_locality(const ProtocolTranscript& t);

}  // namespace rsp
