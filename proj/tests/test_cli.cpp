// Black-box tests of the command-line binary: exit codes, byte determinism,
// output formats, and the parameter-error contract.  The binary path comes in
// through the RSPSIM_BINARY compile definition.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <sys/wait.h>

#include "doctest.h"
#include "json.hpp"
#include "rsp/transcript.hpp"

namespace {

struct CommandResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr interleaved
};

CommandResult run_command(const std::string& args) {
  const std::string cmd =
      std::string("\"") + RSPSIM_BINARY + "\" " + args + " 2>&1";
  CommandResult result;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return result;
  char buf[4096];
  std::size_t n = 0;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0)
    result.output.append(buf, n);
  const int status = pclose(pipe);
  if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
  return result;
}

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char ch : s)
    if (ch == '\n') ++n;
  return n;
}

}  // namespace

TEST_CASE("run: enumerated protocols succeed and emit canonical JSON") {
  const CommandResult r = run_command("run basic --theta 1.2");
  REQUIRE(r.exit_code == 0);
  const nlohmann::json j = nlohmann::json::parse(r.output);
  CHECK(j.at("schema") == 1);
  CHECK(j.at("protocol") == "basic");
  CHECK(j.at("mode") == "enumerate");
  CHECK(j.at("branches").size() == 3);
  CHECK(j.at("verification_passed") == true);

  // The output is exactly the canonical serialization of the reparsed
  // transcript: parse -> rebuild -> reprint is the identity on bytes.
  const rsp::ProtocolTranscript t = rsp::transcript_from_json(j);
  CHECK(rsp::to_canonical_string(t) + "\n" == r.output);
}

TEST_CASE("run: identical invocations give byte-identical output") {
  const std::string args = "run basic --mode sample --seed 7 --theta 0.9";
  const CommandResult a = run_command(args);
  const CommandResult b = run_command(args);
  CHECK(a.exit_code == 0);
  CHECK(a.output == b.output);
  CHECK(nlohmann::json::parse(a.output).at("branches").size() == 1);

  const CommandResult c = run_command("run diff_states --theta1 0.4 --theta2 1.3");
  const CommandResult d = run_command("run diff_states --theta1 0.4 --theta2 1.3");
  CHECK(c.exit_code == 0);
  CHECK(c.output == d.output);
}

TEST_CASE("run: coefficient acceptance window") {
  // 2 * 0.7071^2 is within the acceptance window; the values are renormalized
  // exactly before the run.
  const CommandResult ok = run_command(
      "run basic --alpha 0.7071 --beta 0.7071 --theta 0.3");
  REQUIRE(ok.exit_code == 0);
  const nlohmann::json j = nlohmann::json::parse(ok.output);
  const double a = j.at("parameters").at("alpha").get<double>();
  CHECK(a == doctest::Approx(0.7071067811865476).epsilon(1e-12));

  // 0.81 + 0.25 is far outside the window: parameter error, no output row.
  const CommandResult bad =
      run_command("run basic --alpha 0.9 --beta 0.5 --theta 0.3");
  CHECK(bad.exit_code == 2);
  CHECK(bad.output.find("error:") != std::string::npos);
  CHECK(bad.output.find("squared norm") != std::string::npos);

  const CommandResult neg =
      run_command("run basic --alpha -0.6 --beta 0.8");
  CHECK(neg.exit_code == 2);
}

TEST_CASE("run: the qutrit protocol reports its honest failure via exit 1") {
  const CommandResult r = run_command("run qutrit --theta1 0.5 --theta2 1.3");
  CHECK(r.exit_code == 1);  // verification failure, not a usage error
  const nlohmann::json j = nlohmann::json::parse(r.output);
  CHECK(j.at("verification_passed") == false);
  CHECK(j.at("branches").size() == 6);
  // Default coefficients are the uniform triple.
  CHECK(j.at("parameters").at("alpha").get<double>() ==
        doctest::Approx(0.5773502691896258).epsilon(1e-12));
}

TEST_CASE("run: parameter errors exit with 2") {
  CHECK(run_command("run unknown_protocol").exit_code == 2);
  CHECK(run_command("run nparty --n 9").exit_code == 2);
  CHECK(run_command("run nparty --n 0").exit_code == 2);
  CHECK(run_command("run voting --votes 01x").exit_code == 2);
  CHECK(run_command("run voting --votes 01 --decoys 2 --tamper 0 5").exit_code ==
        2);
  CHECK(run_command("run encrypted --grid-points 1").exit_code == 2);
  CHECK(run_command("run basic --mode nonsense").exit_code == 2);
  CHECK(run_command("run basic --format yaml").exit_code == 2);
  CHECK(run_command("").exit_code == 2);        // a subcommand is required
  CHECK(run_command("--help").exit_code == 0);  // asking for help is not an error
}

TEST_CASE("run: voting succeeds clean and fails verification when tampered") {
  const CommandResult good =
      run_command("run voting --votes 011 --decoys 2 --seed 9");
  CHECK(good.exit_code == 0);
  const nlohmann::json j = nlohmann::json::parse(good.output);
  CHECK(j.at("verification_passed") == true);

  const CommandResult bad =
      run_command("run voting --votes 011 --decoys 2 --seed 9 --tamper 1 0");
  CHECK(bad.exit_code == 1);
  const nlohmann::json jb = nlohmann::json::parse(bad.output);
  CHECK(jb.at("verification_passed") == false);
  CHECK(jb.at("parameters").at("tamper") == nlohmann::json({1, 0}));
}

TEST_CASE("run: --degrees converts every angle flag") {
  const CommandResult r = run_command(
      "run diff_states --theta1 90 --theta2 45 --degrees");
  REQUIRE(r.exit_code == 0);
  const nlohmann::json j = nlohmann::json::parse(r.output);
  CHECK(j.at("parameters").at("theta1").get<double>() ==
        doctest::Approx(1.5707963267948966).epsilon(1e-12));
  CHECK(j.at("parameters").at("theta2").get<double>() ==
        doctest::Approx(0.7853981633974483).epsilon(1e-12));
}

TEST_CASE("run: CSV output carries one row per branch") {
  const CommandResult basic = run_command("run basic --format csv");
  REQUIRE(basic.exit_code == 0);
  CHECK(count_lines(basic.output) == 4);  // header + 3 branches
  CHECK(basic.output.rfind("outcome_path,probability,success,fidelity,"
                           "fidelity_bob,fidelity_charlie\n", 0) == 0);
  // Probabilities are printed with 17 significant digits.
  CHECK(basic.output.find("\n0,0.3333333333333") != std::string::npos);
  CHECK(basic.output.find("\n2,0.3333333333333") != std::string::npos);

  const CommandResult enc = run_command("run encrypted --format csv");
  REQUIRE(enc.exit_code == 0);
  CHECK(enc.output.rfind("outcome_path,probability,success,fidelity,"
                         "fidelity_charlie\n", 0) == 0);
  CHECK(count_lines(enc.output) == 3);

  // No per-receiver columns when the branches record no receiver views.
  const CommandResult bell = run_command("run bell_sharing --format csv");
  REQUIRE(bell.exit_code == 0);
  CHECK(bell.output.rfind("outcome_path,probability,success,fidelity\n", 0) ==
        0);
}

TEST_CASE("run: --out writes the same bytes to a file") {
  namespace fs = std::filesystem;
  const fs::path path = fs::temp_directory_path() / "rspsim_cli_out_test.json";
  const CommandResult direct = run_command("run nparty --n 3 --theta 0.8");
  const CommandResult filed =
      run_command("run nparty --n 3 --theta 0.8 --out \"" + path.string() + "\"");
  REQUIRE(direct.exit_code == 0);
  REQUIRE(filed.exit_code == 0);
  CHECK(filed.output.empty());
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::string contents((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
  CHECK(contents == direct.output);
  in.close();
  fs::remove(path);

  // An unwritable destination is a parameter error.
  CHECK(run_command("run basic --out /nonexistent-dir/x.json").exit_code == 2);
}

TEST_CASE("sweep: entropy table in both formats") {
  const CommandResult csv =
      run_command("sweep entropy --p-from 0 --p-to 1 --steps 11 --format csv");
  REQUIRE(csv.exit_code == 0);
  CHECK(count_lines(csv.output) == 12);
  CHECK(csv.output.rfind("p,closed_form,numerical,abs_diff\n", 0) == 0);
  CHECK(csv.output.find("\n0.5,1.5,") != std::string::npos);

  const CommandResult js =
      run_command("sweep entropy --p-from 0 --p-to 1 --steps 11");
  REQUIRE(js.exit_code == 0);
  const nlohmann::json j = nlohmann::json::parse(js.output);
  CHECK(j.at("schema") == 1);
  CHECK(j.at("sweep") == "entropy");
  CHECK(j.at("rows").size() == 11);
  CHECK(j.at("rows")[5].at("p").get<double>() == doctest::Approx(0.5));
  CHECK(j.at("rows")[5].at("closed_form").get<double>() ==
        doctest::Approx(1.5).epsilon(1e-12));

  CHECK(run_command("sweep entropy --steps 1").exit_code == 2);
  CHECK(run_command("sweep entropy --p-from 0.7 --p-to 0.3").exit_code == 2);
  CHECK(run_command("sweep voltage").exit_code == 2);
}

TEST_CASE("verify: suite selection, formats, and the honest failure exit") {
  const CommandResult hilbert = run_command("verify hilbert");
  CHECK(hilbert.exit_code == 0);
  CHECK(hilbert.output.find("PASS  hilbert.") != std::string::npos);
  CHECK(hilbert.output.find("FAIL") == std::string::npos);
  CHECK(hilbert.output.find("invariants,") != std::string::npos);

  const CommandResult gates = run_command("verify gates");
  CHECK(gates.exit_code == 1);
  CHECK(gates.output.find("FAIL  gates.correction_qutrit-consistency") !=
        std::string::npos);
  CHECK(gates.output.find("first failure:") != std::string::npos);

  const CommandResult json_run = run_command("verify hilbert --format json");
  REQUIRE(json_run.exit_code == 0);
  const nlohmann::json j = nlohmann::json::parse(json_run.output);
  CHECK(j.at("schema") == 1);
  CHECK(j.at("suite") == "hilbert");
  CHECK(j.at("results").size() == 5);
  CHECK(j.at("total_failures") == 0);
  CHECK(j.at("total_checks").get<int>() > 100);

  const CommandResult csv_run = run_command("verify circuits --format csv");
  REQUIRE(csv_run.exit_code == 0);
  CHECK(csv_run.output.rfind("suite,name,checks,failures,worst_residual,passed\n",
                             0) == 0);
  CHECK(count_lines(csv_run.output) == 6);

  CHECK(run_command("verify bogus").exit_code == 2);
}
