#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "rsp/gates.hpp"
#include "rsp/measure.hpp"

using namespace rsp;

namespace {
const double u = 1.0 / std::sqrt(2.0);

StateVector plus_times_zero() {
  return make_state(make_layout({2, 2}),
                    {cplx{u, 0}, cplx{0, 0}, cplx{u, 0}, cplx{0, 0}});
}
}  // namespace

TEST_CASE("make_basis rejects non-orthonormal vectors") {
  CHECK_THROWS_AS(
      make_basis(0, {{cplx{1, 0}, cplx{0, 0}}, {cplx{1, 0}, cplx{0, 0}}}, "dup"),
      std::invalid_argument);
  CHECK_THROWS_AS(make_basis(0, {{cplx{1, 0}, cplx{0, 0}}}, "incomplete"),
                  std::invalid_argument);
  CHECK_NOTHROW(make_basis(0, {{cplx{u, 0}, cplx{u, 0}}, {cplx{u, 0}, cplx{-u, 0}}},
                           "x"));
}

TEST_CASE("enumerate mode lists every outcome with normalized post-states") {
  const StateVector s = plus_times_zero();
  const MeasurementResult r =
      measure(s, computational_basis(0, 2), MeasureMode::enumerate_all);
  REQUIRE(r.branches.size() == 2);
  double total = 0.0;
  for (const MeasurementBranch& b : r.branches) {
    CHECK(b.probability == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(b.post_state.norm() == doctest::Approx(1.0).epsilon(1e-12));
    // The measured subsystem is collapsed onto its basis vector.
    CHECK(b.post_state.layout.dims == std::vector<int>{2, 2});
    total += b.probability;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sampling is reproducible and follows the branch distribution") {
  const StateVector s = plus_times_zero();
  const MeasurementBasis basis = computational_basis(0, 2);
  const MeasurementResult a = measure(s, basis, MeasureMode::sample_one, 42);
  const MeasurementResult b = measure(s, basis, MeasureMode::sample_one, 42);
  REQUIRE(a.branches.size() == 1);
  REQUIRE(b.branches.size() == 1);
  CHECK(a.branches[0].outcome == b.branches[0].outcome);

  int ones = 0;
  const int trials = 2000;
  for (int seed = 0; seed < trials; ++seed) {
    const MeasurementResult r = measure(s, basis, MeasureMode::sample_one, seed);
    ones += r.branches[0].outcome;
  }
  // 3 standard errors around p = 1/2.
  const double freq = static_cast<double>(ones) / trials;
  CHECK(std::abs(freq - 0.5) < 3.0 * std::sqrt(0.25 / trials));
}

TEST_CASE("project_subsystem returns the unnormalized conditional remainder") {
  const StateVector s = plus_times_zero();
  const StateVector cond = project_subsystem(s, 0, {cplx{1, 0}, cplx{0, 0}});
  CHECK(cond.layout.dims == std::vector<int>{2});
  CHECK(cond.norm() == doctest::Approx(u).epsilon(1e-12));
  CHECK(std::abs(cond.amplitudes[0] - cplx{u, 0}) < 1e-12);
}

TEST_CASE("zero-probability outcomes are kept by enumerate with empty content") {
  const StateVector s = basis_state(make_layout({3}), {1});
  const MeasurementResult r =
      measure(s, computational_basis(0, 3), MeasureMode::enumerate_all);
  REQUIRE(r.branches.size() == 3);
  CHECK(r.branches[0].probability == doctest::Approx(0.0));
  CHECK(r.branches[1].probability == doctest::Approx(1.0));
}

TEST_CASE("projector measurement splits the pair space into match and differ") {
  const StateVector pair = make_state(
      make_layout({2, 2}),
      {cplx{0.5, 0}, cplx{0.5, 0}, cplx{0.5, 0}, cplx{0.5, 0}});
  const std::vector<MeasurementBranch> branches = measure_with_projectors(
      pair, {pair_differs_projector(), pair_matches_projector()}, {0, 1});
  REQUIRE(branches.size() == 2);
  CHECK(branches[0].probability == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(branches[1].probability == doctest::Approx(0.5).epsilon(1e-12));
  for (const MeasurementBranch& b : branches)
    CHECK(b.post_state.norm() == doctest::Approx(1.0).epsilon(1e-12));
  // The "differ" branch has no weight on |00> or |11>.
  CHECK(std::abs(branches[0].post_state.amplitudes[0]) < 1e-12);
  CHECK(std::abs(branches[0].post_state.amplitudes[3]) < 1e-12);
}

TEST_CASE("uniform_unit is deterministic for a fixed engine seed") {
  std::mt19937_64 a(7), b(7);
  for (int i = 0; i < 10; ++i) {
    const double x = uniform_unit(a);
    CHECK(x == uniform_unit(b));
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
}
