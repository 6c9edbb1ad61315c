#include "rsp/transcript.hpp"

#include <cstdio>
#include <cstdlib>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace rsp {

namespace {

using nlohmann::json;

// Amplitudes travel as decimal strings with 17 significant digits so the
// exact double round-trips regardless of the JSON library's number formatting.
std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return std::string(buf);
}

json amps_to_json(const std::vector<cplx>& amps) {
  json a = json::array();
  for (const cplx& z : amps)
    a.push_back(json::array({fmt17(z.real()), fmt17(z.imag())}));
  return a;
}

std::vector<cplx> amps_from_json(const json& j) {
  std::vector<cplx> amps;
  amps.reserve(j.size());
  for (const json& pair : j) {
    if (!pair.is_array() || pair.size() != 2)
      throw std::invalid_argument("amplitude entries must be [re, im] pairs");
    amps.push_back(cplx{std::strtod(pair.at(0).get<std::string>().c_str(), nullptr),
                        std::strtod(pair.at(1).get<std::string>().c_str(), nullptr)});
  }
  return amps;
}

json party_to_json(const Party& p) {
  return json{{"name", p.name},
              {"held_subsystems", p.held_subsystems},
              {"applied_ops", p.applied_ops}};
}

Party party_from_json(const json& j) {
  Party p;
  p.name = j.at("name").get<std::string>();
  p.held_subsystems = j.at("held_subsystems").get<std::vector<int>>();
  p.applied_ops = j.at("applied_ops").get<std::vector<std::string>>();
  return p;
}

json step_to_json(const Step& s) {
  return json{{"kind", s.kind},
              {"party", s.party},
              {"detail", s.detail},
              {"targets", s.targets},
              {"recipient", s.recipient}};
}

Step step_from_json(const json& j) {
  Step s;
  s.kind = j.at("kind").get<std::string>();
  s.party = j.at("party").get<std::string>();
  s.detail = j.at("detail").get<std::string>();
  s.targets = j.at("targets").get<std::vector<int>>();
  s.recipient = j.at("recipient").get<std::string>();
  return s;
}

json message_to_json(const ClassicalMessage& m) {
  return json{{"from", m.from},
              {"to", m.to},
              {"payload", m.payload},
              {"alphabet_size", m.alphabet_size}};
}

ClassicalMessage message_from_json(const json& j) {
  ClassicalMessage m;
  m.from = j.at("from").get<std::string>();
  m.to = j.at("to").get<std::string>();
  m.payload = j.at("payload").get<int>();
  m.alphabet_size = j.at("alphabet_size").get<int>();
  return m;
}

json receiver_to_json(const ReceiverOutcome& r) {
  return json{{"party", r.party},
              {"fidelity", r.fidelity},
              {"purity", r.purity},
              {"amplitudes", amps_to_json(r.amplitudes)}};
}

ReceiverOutcome receiver_from_json(const json& j) {
  ReceiverOutcome r;
  r.party = j.at("party").get<std::string>();
  r.fidelity = j.at("fidelity").get<double>();
  r.purity = j.at("purity").get<double>();
  r.amplitudes = amps_from_json(j.at("amplitudes"));
  return r;
}

json branch_to_json(const BranchRecord& b) {
  json receivers = json::array();
  for (const ReceiverOutcome& r : b.receivers) receivers.push_back(receiver_to_json(r));
  json messages = json::array();
  for (const ClassicalMessage& m : b.messages) messages.push_back(message_to_json(m));
  return json{{"outcome_path", b.outcome_path},
              {"probability", b.probability},
              {"success", b.success},
              {"fidelity", b.fidelity},
              {"receivers", receivers},
              {"joint_dims", b.joint_dims},
              {"joint_amplitudes", amps_to_json(b.joint_amplitudes)},
              {"messages", messages},
              {"corrections", b.corrections},
              {"metrics", b.metrics}};
}

BranchRecord branch_from_json(const json& j) {
  BranchRecord b;
  b.outcome_path = j.at("outcome_path").get<std::vector<int>>();
  b.probability = j.at("probability").get<double>();
  b.success = j.at("success").get<bool>();
  b.fidelity = j.at("fidelity").get<double>();
  for (const json& r : j.at("receivers")) b.receivers.push_back(receiver_from_json(r));
  b.joint_dims = j.at("joint_dims").get<std::vector<int>>();
  b.joint_amplitudes = amps_from_json(j.at("joint_amplitudes"));
  for (const json& m : j.at("messages")) b.messages.push_back(message_from_json(m));
  b.corrections = j.at("corrections").get<std::map<std::string, std::string>>();
  b.metrics = j.at("metrics").get<std::map<std::string, double>>();
  return b;
}

json report_to_json(const ResourceReport& r) {
  return json{{"entanglement_ebits", r.entanglement_ebits},
              {"classical_bits", r.classical_bits},
              {"measurement_count", r.measurement_count},
              {"receiver_count", r.receiver_count},
              {"outcomes_equiprobable", r.outcomes_equiprobable},
              {"alphabet_size", r.alphabet_size},
              {"baseline_ebits", r.baseline_ebits},
              {"baseline_bits", r.baseline_bits},
              {"baseline_measurements", r.baseline_measurements}};
}

ResourceReport report_from_json(const json& j) {
  ResourceReport r;
  r.entanglement_ebits = j.at("entanglement_ebits").get<double>();
  r.classical_bits = j.at("classical_bits").get<double>();
  r.measurement_count = j.at("measurement_count").get<int>();
  r.receiver_count = j.at("receiver_count").get<int>();
  r.outcomes_equiprobable = j.at("outcomes_equiprobable").get<bool>();
  r.alphabet_size = j.at("alphabet_size").get<int>();
  r.baseline_ebits = j.at("baseline_ebits").get<double>();
  r.baseline_bits = j.at("baseline_bits").get<double>();
  r.baseline_measurements = j.at("baseline_measurements").get<int>();
  return r;
}

}  // namespace

nlohmann::json to_json(const ProtocolTranscript& t) {
  json parties = json::array();
  for (const Party& p : t.parties) parties.push_back(party_to_json(p));
  json steps = json::array();
  for (const Step& s : t.steps) steps.push_back(step_to_json(s));
  json branches = json::array();
  for (const BranchRecord& b : t.branches) branches.push_back(branch_to_json(b));
  return json{{"schema", t.schema},
              {"protocol", t.protocol},
              {"parameters", t.parameters},
              {"mode", t.mode},
              {"seed", t.seed},
              {"construction", t.construction},
              {"resource_steps", t.resource_steps},
              {"layout_dims", t.layout_dims},
              {"layout_labels", t.layout_labels},
              {"resource_amplitudes", amps_to_json(t.resource_amplitudes)},
              {"sender_subsystems", t.sender_subsystems},
              {"receiver_subsystems", t.receiver_subsystems},
              {"parties", parties},
              {"steps", steps},
              {"branches", branches},
              {"report", report_to_json(t.report)},
              {"verification_passed", t.verification_passed},
              {"notes", t.notes}};
}

ProtocolTranscript transcript_from_json(const nlohmann::json& j) {
  ProtocolTranscript t;
  t.schema = j.at("schema").get<int>();
  if (t.schema != 1)
    throw std::invalid_argument("unsupported transcript schema " +
                                std::to_string(t.schema));
  t.protocol = j.at("protocol").get<std::string>();
  t.parameters = j.at("parameters");
  t.mode = j.at("mode").get<std::string>();
  t.seed = j.at("seed").get<std::uint64_t>();
  t.construction = j.at("construction").get<std::string>();
  t.resource_steps = j.at("resource_steps").get<std::vector<std::string>>();
  t.layout_dims = j.at("layout_dims").get<std::vector<int>>();
  t.layout_labels = j.at("layout_labels").get<std::vector<std::string>>();
  t.resource_amplitudes = amps_from_json(j.at("resource_amplitudes"));
  t.sender_subsystems = j.at("sender_subsystems").get<std::vector<int>>();
  t.receiver_subsystems = j.at("receiver_subsystems").get<std::vector<int>>();
  for (const json& p : j.at("parties")) t.parties.push_back(party_from_json(p));
  for (const json& s : j.at("steps")) t.steps.push_back(step_from_json(s));
  for (const json& b : j.at("branches")) t.branches.push_back(branch_from_json(b));
  t.report = report_from_json(j.at("report"));
  t.verification_passed = j.at("verification_passed").get<bool>();
  t.notes = j.at("notes").get<std::vector<std::string>>();
  return t;
}

std::string to_canonical_string(const ProtocolTranscript& t) {
  return to_json(t).dump();
}

bool operator==(const ProtocolTranscript& a, const ProtocolTranscript& b) {
  return to_canonical_string(a) == to_canonical_string(b);
}

std::string to_csv(const ProtocolTranscript& t) {
  std::string out = "outcome_path,probability,success,fidelity";
  if (!t.branches.empty())
    for (const ReceiverOutcome& r : t.branches.front().receivers)
      out += ",fidelity_" + r.party;
  out += "\n";
  for (const BranchRecord& b : t.branches) {
    std::string path;
    for (std::size_t i = 0; i < b.outcome_path.size(); ++i) {
      if (i) path += ";";
      path += std::to_string(b.outcome_path[i]);
    }
    out += path + "," + fmt17(b.probability) + "," + (b.success ? "1" : "0") +
           "," + fmt17(b.fidelity);
    for (const ReceiverOutcome& r : b.receivers) out += "," + fmt17(r.fidelity);
    out += "\n";
  }
  return out;
}

std::vector<std::string> audit_locality(const ProtocolTranscript& t) {
  std::vector<std::string> violations;
  std::map<int, std::string> custody;  // subsystem index -> holding party
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const Step& s = t.steps[i];
    const std::string where =
        "step " + std::to_string(i) + " (" + s.kind + " " + s.detail + "): ";
    if (s.kind == "broadcast" || s.kind == "verify" || s.kind == "note") continue;
    if (s.kind == "prepare") {
      for (int tgt : s.targets) custody[tgt] = s.party;
      continue;
    }
    // distribute/operate/measure/correct all require the acting party to
    // hold every target; distribute then hands the targets over.
    for (int tgt : s.targets) {
      auto it = custody.find(tgt);
      if (it == custody.end()) {
        violations.push_back(where + "subsystem " + std::to_string(tgt) +
                             " was never prepared");
      } else if (it->second != s.party) {
        violations.push_back(where + "party '" + s.party +
                             "' does not hold subsystem " + std::to_string(tgt) +
                             " (held by '" + it->second + "')");
      }
    }
    if (s.kind == "distribute")
      for (int tgt : s.targets) custody[tgt] = s.recipient;
  }
  return violations;
}

}  // namespace rsp
