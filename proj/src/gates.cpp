#include "rsp/gates.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace rsp {

namespace {

std::string fmt_angle(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

Eigen::MatrixXcd diagonal(const std::vector<cplx>& entries) {
  const long d = static_cast<long>(entries.size());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  for (long i = 0; i < d; ++i) m(i, i) = entries[i];
  return m;
}

int positive_mod(int x, int d) { return ((x % d) + d) % d; }

}  // namespace

LocalOperator identity_op(int d) {
  return make_unitary({d}, Eigen::MatrixXcd::Identity(d, d),
                      "I(" + std::to_string(d) + ")");
}

LocalOperator shift_op(int d, int amount) {
  if (d < 2) throw std::invalid_argument("shift_op: dimension must be >= 2");
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  for (int j = 0; j < d; ++j) m(positive_mod(j + amount, d), j) = 1;
  return make_unitary({d}, std::move(m),
                      "shift(" + std::to_string(amount) + " mod " +
                          std::to_string(d) + ")");
}

LocalOperator shift_down_qutrit() {
  LocalOperator op = shift_op(3, -1);
  op.name = "V";
  return op;
}

LocalOperator shift_up_qutrit() {
  LocalOperator op = shift_op(3, +1);
  op.name = "W";
  return op;
}

LocalOperator hadamard() {
  Eigen::MatrixXcd m(2, 2);
  const double s = 1.0 / std::sqrt(2.0);
  m << s, s, s, -s;
  return make_unitary({2}, std::move(m), "H");
}

LocalOperator sigma_z() {
  return make_unitary({2}, diagonal({cplx{1, 0}, cplx{-1, 0}}), "sigma_z");
}

LocalOperator phase_rotation(double phi) {
  return make_unitary({2}, diagonal({phase(phi), phase(-phi)}),
                      "z-rotation(" + fmt_angle(phi) + ")");
}

LocalOperator cnot() {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
  m(0, 0) = 1;
  m(1, 1) = 1;
  m(3, 2) = 1;
  m(2, 3) = 1;
  return make_unitary({2, 2}, std::move(m), "CNOT");
}

LocalOperator permutation_op(int d, const std::vector<int>& image, std::string name) {
  if (static_cast<int>(image.size()) != d)
    throw std::invalid_argument("permutation_op: image has " +
                                std::to_string(image.size()) + " entries for dimension " +
                                std::to_string(d));
  std::vector<bool> seen(d, false);
  for (int j : image) {
    if (j < 0 || j >= d || seen[j])
      throw std::invalid_argument("permutation_op: image is not a permutation");
    seen[j] = true;
  }
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  for (int j = 0; j < d; ++j) m(image[j], j) = 1;
  return make_unitary({d}, std::move(m), std::move(name));
}

LocalOperator conditional_shift(std::vector<int> control_dims, int target_dim,
                                const std::vector<int>& amounts, std::string name) {
  long n_controls = 1;
  for (int d : control_dims) {
    if (d < 2) throw std::invalid_argument("conditional_shift: bad control dimension");
    n_controls *= d;
  }
  if (static_cast<long>(amounts.size()) != n_controls)
    throw std::invalid_argument("conditional_shift: expected " +
                                std::to_string(n_controls) + " shift amounts, got " +
                                std::to_string(amounts.size()));
  const long dim = n_controls * target_dim;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (long v = 0; v < n_controls; ++v)
    for (int k = 0; k < target_dim; ++k)
      m(v * target_dim + positive_mod(k + amounts[v], target_dim),
        v * target_dim + k) = 1;
  std::vector<int> dims = std::move(control_dims);
  dims.push_back(target_dim);
  return make_unitary(std::move(dims), std::move(m), std::move(name));
}

LocalOperator qubit_controlled_shift(int target_dim, int amount) {
  return conditional_shift({2}, target_dim, {0, amount},
                           "controlled-shift(" + std::to_string(amount) + " mod " +
                               std::to_string(target_dim) + ")");
}

LocalOperator controlled_v() {
  LocalOperator op = qubit_controlled_shift(3, -1);
  op.name = "controlled-V";
  return op;
}

LocalOperator value_controlled_shift(int control_dim, int target_dim) {
  std::vector<int> amounts(control_dim);
  for (int j = 0; j < control_dim; ++j) amounts[j] = j;
  return conditional_shift({control_dim}, target_dim, amounts,
                           "value-controlled-shift(mod " +
                               std::to_string(target_dim) + ")");
}

LocalOperator controlled_w() {
  LocalOperator op = value_controlled_shift(3, 3);
  op.name = "C-W";
  return op;
}

LocalOperator sender_phase_basic(double theta) {
  return make_unitary({3},
                      diagonal({phase(2 * theta), phase(-2 * theta), cplx{1, 0}}),
                      "U_a(" + fmt_angle(theta) + ")");
}

LocalOperator sender_phase_n(double theta, int n) {
  if (n < 1) throw std::invalid_argument("sender_phase_n: n must be >= 1");
  std::vector<cplx> entries(n + 1);
  for (int k = 0; k <= n; ++k) entries[k] = phase((2 * k - n) * theta);
  return make_unitary({n + 1}, diagonal(entries),
                      "U_a[n=" + std::to_string(n) + "](" + fmt_angle(theta) + ")");
}

LocalOperator sender_phase_diff(double theta1, double theta2) {
  return make_unitary(
      {4},
      diagonal({phase(theta1 + theta2), phase(theta1 - theta2),
                phase(-(theta1 - theta2)), phase(-(theta1 + theta2))}),
      "U_a[diff](" + fmt_angle(theta1) + "," + fmt_angle(theta2) + ")");
}

LocalOperator sender_phase_qutrit(double theta1, double theta2) {
  return make_unitary(
      {6},
      diagonal({cplx{1, 0}, phase(theta1), phase(2 * theta1), phase(theta2),
                phase(2 * theta2), phase(theta1 + theta2)}),
      "U_a[qutrit](" + fmt_angle(theta1) + "," + fmt_angle(theta2) + ")");
}

LocalOperator controlled_sender_phase(double theta0, double theta1) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(6, 6);
  const double theta[2] = {theta0, theta1};
  for (int j = 0; j < 2; ++j) {
    m(3 * j + 0, 3 * j + 0) = phase(2 * theta[j]);
    m(3 * j + 1, 3 * j + 1) = phase(-2 * theta[j]);
    m(3 * j + 2, 3 * j + 2) = 1;
  }
  return make_unitary({2, 3}, std::move(m),
                      "controlled-U_a(" + fmt_angle(theta0) + "," +
                          fmt_angle(theta1) + ")");
}

MeasurementBasis computational_basis(int target, int d) {
  std::vector<std::vector<cplx>> vectors(d, std::vector<cplx>(d, cplx{0, 0}));
  for (int j = 0; j < d; ++j) vectors[j][j] = 1;
  return make_basis(target, std::move(vectors),
                    "computational(d=" + std::to_string(d) + ")");
}

MeasurementBasis fourier_basis(int target, int d) {
  if (d < 2) throw std::invalid_argument("fourier_basis: dimension must be >= 2");
  const double s = 1.0 / std::sqrt(static_cast<double>(d));
  std::vector<std::vector<cplx>> vectors(d, std::vector<cplx>(d));
  for (int m = 0; m < d; ++m)
    for (int k = 0; k < d; ++k)
      vectors[m][k] = s * root_of_unity(d, static_cast<long>(m) * k);
  return make_basis(target, std::move(vectors),
                    "fourier(d=" + std::to_string(d) + ")");
}

MeasurementBasis sender_basis_qutrit(int target) {
  const double s = 1.0 / std::sqrt(3.0);
  const cplx w = root_of_unity(3, 1);
  const cplx wb = root_of_unity(3, -1);
  std::vector<std::vector<cplx>> u = {
      {s, s, s},
      {s * w, s * wb, s},
      {s * wb, s * w, s},
  };
  return make_basis(target, std::move(u), "sender-basis(3)");
}

MeasurementBasis six_level_basis(int target) {
  const double s = 1.0 / std::sqrt(6.0);
  // Character exponents per level for the first three vectors; the last three
  // multiply by the level parity.
  const int v[6] = {0, 1, 2, 2, 1, 0};
  std::vector<std::vector<cplx>> u(6, std::vector<cplx>(6));
  for (int m = 0; m < 3; ++m) {
    for (int j = 0; j < 6; ++j) {
      const cplx character = root_of_unity(3, m * v[j]);
      const double parity = (j % 2 == 0) ? 1.0 : -1.0;
      u[m][j] = s * character;
      u[m + 3][j] = s * character * parity;
    }
  }
  return make_basis(target, std::move(u), "sender-basis(6)");
}

MeasurementBasis equatorial_pair_basis(int target, double theta) {
  const double s = 1.0 / std::sqrt(2.0);
  std::vector<std::vector<cplx>> v = {
      {s * phase(theta), s * phase(-theta)},
      {s * phase(theta + kPi / 2), s * phase(-(theta + kPi / 2))},
  };
  return make_basis(target, std::move(v),
                    "equatorial-pair(" + fmt_angle(theta) + ")");
}

MeasurementBasis qutrit_x_basis(int target) {
  const double s = 1.0 / std::sqrt(2.0);
  std::vector<std::vector<cplx>> v = {
      {cplx{s, 0}, cplx{s, 0}, cplx{0, 0}},
      {cplx{s, 0}, cplx{-s, 0}, cplx{0, 0}},
      {cplx{0, 0}, cplx{0, 0}, cplx{1, 0}},
  };
  return make_basis(target, std::move(v), "x-pair-plus-2");
}

LocalOperator correction_basic(int outcome) {
  switch (outcome) {
    case 0:
      return make_unitary({2}, Eigen::MatrixXcd::Identity(2, 2), "I");
    case 1:
      return make_unitary({2}, diagonal({phase(kPi / 3), phase(-kPi / 3)}), "U_b");
    case 2:
      return make_unitary({2}, diagonal({phase(-kPi / 3), phase(kPi / 3)}),
                          "U_b^-1");
    default:
      throw std::invalid_argument("correction_basic: outcome must be 0..2");
  }
}

LocalOperator correction_basic_xbasis(int outcome) {
  const LocalOperator h = hadamard();
  const LocalOperator base = correction_basic(outcome);
  std::string name = (outcome == 0) ? "I" : (outcome == 1 ? "U_c" : "U_c^-1");
  return make_unitary({2}, h.matrix * base.matrix * h.matrix, std::move(name));
}

LocalOperator correction_n(int outcome, int n) {
  if (n < 1) throw std::invalid_argument("correction_n: n must be >= 1");
  if (outcome < 0 || outcome > n)
    throw std::invalid_argument("correction_n: outcome must be in 0.." +
                                std::to_string(n));
  return make_unitary({2}, diagonal({root_of_unity(n + 1, outcome), cplx{1, 0}}),
                      "U_m[m=" + std::to_string(outcome) + ",n=" +
                          std::to_string(n) + "]");
}

std::pair<LocalOperator, LocalOperator> correction_diff(int outcome) {
  if (outcome < 0 || outcome > 3)
    throw std::invalid_argument("correction_diff: outcome must be 0..3");
  LocalOperator b = make_unitary(
      {2}, diagonal({cplx{1, 0}, phase(kPi * outcome)}),
      "U_b[j=" + std::to_string(outcome) + "]");
  LocalOperator c = make_unitary(
      {2}, diagonal({cplx{1, 0}, phase(kPi * outcome / 2)}),
      "U_c[j=" + std::to_string(outcome) + "]");
  return {std::move(b), std::move(c)};
}

namespace {

// Branch bookkeeping for the six-level protocol: receiver level pair (j,k)
// lives at qudit level `level`, so the correction constraint for outcome m is
// chi_j + chi_k = arg(u_m[level]).
struct QutritBranch {
  int j;
  int k;
  int level;
};

constexpr QutritBranch kQutritBranches[6] = {
    {0, 0, 0}, {0, 1, 1}, {1, 1, 2}, {0, 2, 3}, {2, 2, 4}, {1, 2, 5},
};

std::vector<cplx> six_level_vector(int outcome) {
  MeasurementBasis basis = six_level_basis(0);
  if (outcome < 0 || outcome >= basis.dim())
    throw std::invalid_argument("six-level outcome must be 0..5");
  return basis.vectors[outcome];
}

std::array<double, 3> qutrit_chis(int outcome) {
  const std::vector<cplx> u = six_level_vector(outcome);
  // Gauge chi0 = 0; chi1 and chi2 from the (0,1) and (0,2) branch constraints.
  return {0.0, std::arg(u[1]) - std::arg(u[0]), std::arg(u[3]) - std::arg(u[0])};
}

}  // namespace

LocalOperator correction_qutrit(int outcome) {
  const std::array<double, 3> chi = qutrit_chis(outcome);
  return make_unitary({3}, diagonal({cplx{1, 0}, phase(chi[1]), phase(chi[2])}),
                      "U_q[m=" + std::to_string(outcome) + "]");
}

double qutrit_correction_residual(int outcome) {
  const std::vector<cplx> u = six_level_vector(outcome);
  const std::array<double, 3> chi = qutrit_chis(outcome);
  double worst = 0;
  for (const QutritBranch& b : kQutritBranches) {
    const cplx applied = phase(chi[b.j] + chi[b.k]);
    const cplx wanted = phase(std::arg(u[b.level]) - std::arg(u[0]));
    worst = std::max(worst, std::abs(applied - wanted));
  }
  return worst;
}

LocalOperator pair_differs_projector() {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
  m(1, 1) = 1;
  m(2, 2) = 1;
  return make_projector({2, 2}, std::move(m), "P(differ)");
}

LocalOperator pair_matches_projector() {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
  m(0, 0) = 1;
  m(3, 3) = 1;
  return make_projector({2, 2}, std::move(m), "P(match)");
}

StateVector equatorial_qubit(double theta, double alpha, double beta) {
  return make_state(make_layout({2}),
                    {alpha * phase(theta), beta * phase(-theta)});
}

StateVector equatorial_qutrit(double theta1, double theta2, double alpha,
                              double beta, double gamma) {
  return make_state(make_layout({3}),
                    {cplx{alpha, 0}, beta * phase(theta1), gamma * phase(theta2)});
}

}  // namespace rsp
