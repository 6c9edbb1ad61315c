#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rsp/operators.hpp"

namespace rsp {

// Result of one named invariant check.
struct CheckResult {
  std::string suite;   // hilbert | gates | circuits | protocols | cli
  std::string name;
  int checks = 0;      // individual assertions evaluated
  int failures = 0;
  double worst_residual = 0.0;
  std::string detail;  // filled in when something fails

  bool passed() const { return failures == 0; }
};

struct VerifyOptions {
  double tolerance = kAlgebraTol;
  std::uint64_t seed = 20260814;
  // Test hook: when set, replaces the qutrit correction table so the suite's
  // localization of a corrupted correction can itself be tested.
  std::function<LocalOperator(int)> qutrit_correction_override;
};

// Runs the invariant checks for one suite ("hilbert", "gates", "circuits",
// "protocols", "cli") or for "all".  Throws std::invalid_argument for an
// unknown suite name.
std::vector<CheckResult> run_verification(const std::string& suite,
                                          const VerifyOptions& opt = {});

}  // namespace rsp
