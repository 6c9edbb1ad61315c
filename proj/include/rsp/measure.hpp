#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "rsp/operators.hpp"

namespace rsp {

// Orthonormal complete basis on a single subsystem.
struct MeasurementBasis {
  int target = 0;
  std::vector<std::vector<cplx>> vectors;
  std::string name;

  int dim() const { return static_cast<int>(vectors.size()); }
};

// Validates orthonormality and completeness (d vectors of length d, Gram
// matrix within kAlgebraTol of the identity).
MeasurementBasis make_basis(int target, std::vector<std::vector<cplx>> vectors,
                            std::string name);

enum class MeasureMode { enumerate_all, sample_one };

struct MeasurementBranch {
  int outcome = 0;
  double probability = 0.0;
  // Full register with the measured subsystem collapsed onto its basis
  // vector; callers may discard that subsystem afterwards.
  StateVector post_state;
};

struct MeasurementResult {
  MeasureMode mode = MeasureMode::enumerate_all;
  std::uint64_t seed = 0;
  std::vector<MeasurementBranch> branches;  // all outcomes, or the sampled one
};

MeasurementResult measure(const StateVector& state, const MeasurementBasis& basis,
                          MeasureMode mode, std::uint64_t seed = 0);

// Contracts <vec| against one subsystem and returns the unnormalized
// remainder on the reduced register. Its squared norm is the outcome
// probability of `vec` in any basis containing it.
StateVector project_subsystem(const StateVector& state, int target,
                              const std::vector<cplx>& vec);

// Measurement described by mutually orthogonal projectors summing to the
// identity on the targeted subsystems. Branch post-states keep the full
// register and are normalized (zero-probability branches excluded).
std::vector<MeasurementBranch> measure_with_projectors(
    const StateVector& state, const std::vector<LocalOperator>& projectors,
    const std::vector<int>& targets);

// Deterministic uniform draw in [0,1) with 53-bit resolution; used instead of
// std::uniform_real_distribution so sampled runs are reproducible across
// standard libraries.
double uniform_unit(std::mt19937_64& engine);

}  // namespace rsp
