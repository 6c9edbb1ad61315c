// The verification suites are part of the product surface (the `verify` CLI
// verb), so their structure is tested here: which checks exist, which fail by
// design (the six-level outcomes with inconsistent correction constraints),
// and that a corrupted correction table is localized to the right check names.
#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "doctest.h"
#include "rsp/gates.hpp"
#include "rsp/verify.hpp"

using namespace rsp;

namespace {

const CheckResult* find(const std::vector<CheckResult>& rs,
                        const std::string& suite, const std::string& name) {
  for (const CheckResult& r : rs)
    if (r.suite == suite && r.name == name) return &r;
  return nullptr;
}

int count_suite(const std::vector<CheckResult>& rs, const std::string& suite) {
  int n = 0;
  for (const CheckResult& r : rs)
    if (r.suite == suite) ++n;
  return n;
}

std::vector<const CheckResult*> failing(const std::vector<CheckResult>& rs) {
  std::vector<const CheckResult*> out;
  for (const CheckResult& r : rs)
    if (!r.passed()) out.push_back(&r);
  return out;
}

}  // namespace

TEST_CASE("the full verification run covers every suite") {
  const std::vector<CheckResult> all = run_verification("all");
  CHECK(all.size() == 37);
  CHECK(count_suite(all, "hilbert") == 5);
  CHECK(count_suite(all, "gates") == 6);
  CHECK(count_suite(all, "circuits") == 5);
  CHECK(count_suite(all, "protocols") == 19);
  CHECK(count_suite(all, "cli") == 2);
  for (const CheckResult& r : all) CHECK(r.checks > 0);

  // The six per-outcome checks are reported individually.
  for (int m = 0; m < 6; ++m)
    CHECK(find(all, "protocols", "qutrit-outcome-" + std::to_string(m)) !=
          nullptr);

  // Exactly the checks touching the inconsistent six-level corrections fail;
  // everything else is green.
  const std::vector<const CheckResult*> bad = failing(all);
  REQUIRE(bad.size() == 4);
  for (const CheckResult* r : bad) {
    CHECK(r->name.find("qutrit") != std::string::npos);
    CHECK_FALSE(r->detail.empty());
    CHECK(r->worst_residual > 0.0);
  }
  CHECK(find(all, "gates", "correction_qutrit-consistency")->failures == 3);
  for (int m = 0; m < 3; ++m)
    CHECK(find(all, "protocols", "qutrit-outcome-" + std::to_string(m))
              ->passed());
  for (int m = 3; m < 6; ++m) {
    const CheckResult* r =
        find(all, "protocols", "qutrit-outcome-" + std::to_string(m));
    CHECK_FALSE(r->passed());
    CHECK(r->worst_residual > 0.5);  // fidelity stays far from 1
  }
  // The phase-constraint residual on the failing outcomes is exactly 2.
  CHECK(find(all, "gates", "correction_qutrit-consistency")->worst_residual ==
        doctest::Approx(2.0).epsilon(1e-9));
  // The run-level reporting check passes: it asserts the honest failure.
  CHECK(find(all, "protocols", "qutrit-run-reporting")->passed());
  CHECK(find(all, "protocols", "qutrit-equiprobable")->passed());
}

TEST_CASE("single-suite runs return only that suite and are deterministic") {
  for (const std::string suite : {"hilbert", "circuits", "cli"}) {
    CAPTURE(suite);
    const std::vector<CheckResult> rs = run_verification(suite);
    CHECK(count_suite(rs, suite) == static_cast<int>(rs.size()));
    CHECK(failing(rs).empty());
  }
  const std::vector<CheckResult> gates = run_verification("gates");
  REQUIRE(failing(gates).size() == 1);
  CHECK(failing(gates)[0]->name == "correction_qutrit-consistency");

  const std::vector<CheckResult> protos = run_verification("protocols");
  CHECK(failing(protos).size() == 3);

  // Same options, same numbers.
  const std::vector<CheckResult> again = run_verification("protocols");
  REQUIRE(again.size() == protos.size());
  for (std::size_t i = 0; i < protos.size(); ++i) {
    CHECK(again[i].name == protos[i].name);
    CHECK(again[i].checks == protos[i].checks);
    CHECK(again[i].failures == protos[i].failures);
  }

  CHECK_THROWS_AS(run_verification("nonsense"), std::invalid_argument);
}

TEST_CASE("a corrupted correction table is localized to qutrit-named checks") {
  VerifyOptions opt;
  opt.qutrit_correction_override = [](int m) {
    if (m == 1)
      return make_unitary({3}, Eigen::MatrixXcd::Identity(3, 3), "I");
    return correction_qutrit(m);
  };

  const std::vector<CheckResult> protos = run_verification("protocols", opt);
  const CheckResult* o0 = find(protos, "protocols", "qutrit-outcome-0");
  const CheckResult* o1 = find(protos, "protocols", "qutrit-outcome-1");
  const CheckResult* o2 = find(protos, "protocols", "qutrit-outcome-2");
  REQUIRE(o0 != nullptr);
  REQUIRE(o1 != nullptr);
  REQUIRE(o2 != nullptr);
  CHECK(o0->passed());
  CHECK_FALSE(o1->passed());  // the corruption is pinned to its outcome
  CHECK(o2->passed());
  for (const CheckResult* r : failing(protos))
    CHECK(r->name.find("qutrit") != std::string::npos);
  // The library-path check runs the real table and still passes.
  CHECK(find(protos, "protocols", "qutrit-run-reporting")->passed());

  const std::vector<CheckResult> gates = run_verification("gates", opt);
  const CheckResult* cons = find(gates, "gates", "correction_qutrit-consistency");
  REQUIRE(cons != nullptr);
  CHECK(cons->failures == 4);  // outcome 1 joins the three inconsistent ones
}
