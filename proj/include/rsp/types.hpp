#pragma once

#include <cmath>
#include <complex>
#include <numbers>

namespace rsp {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;

// Algebraic identities (unitarity, orthonormality, fidelity checks).
inline constexpr double kAlgebraTol = 1e-10;

// Input amplitude vectors are accepted when their norm is within this of 1,
// then renormalized exactly.
inline constexpr double kNormTol = 1e-8;

// Eigenvalues below this are treated as exact zeros in entropy sums.
inline constexpr double kEigenvalueFloor = 1e-12;

// Hard cap on the total dimension of any register.
inline constexpr long kMaxTotalDim = 1000000;

// e^{i * angle}
inline cplx phase(double angle) { return std::polar(1.0, angle); }

// e^{2 pi i k / d}
inline cplx root_of_unity(int d, long k) {
  return phase(2.0 * kPi * static_cast<double>(k) / static_cast<double>(d));
}

}  // namespace rsp
