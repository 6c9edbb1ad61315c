#include "rsp/verify.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rsp/circuits.hpp"
#include "rsp/gates.hpp"
#include "rsp/measure.hpp"
#include "rsp/protocols.hpp"
#include "rsp/transcript.hpp"

namespace rsp {

namespace {

struct Checker {
  CheckResult r;

  Checker(std::string suite, std::string name) {
    r.suite = std::move(suite);
    r.name = std::move(name);
  }

  void expect(bool ok, double residual, const std::string& what) {
    ++r.checks;
    r.worst_residual = std::max(r.worst_residual, residual);
    if (!ok) {
      ++r.failures;
      if (r.detail.empty()) r.detail = what;
    }
  }

  void expect_near(double value, double want, double tol, const std::string& what) {
    const double diff = std::abs(value - want);
    expect(diff <= tol, diff,
           what + " (got " + std::to_string(value) + ", want " +
               std::to_string(want) + ")");
  }
};

StateVector random_state(const SubsystemLayout& layout, std::mt19937_64& eng) {
  std::vector<cplx> amps(layout.total_dim());
  double n2 = 0.0;
  for (cplx& a : amps) {
    a = cplx{uniform_unit(eng) - 0.5, uniform_unit(eng) - 0.5};
    n2 += std::norm(a);
  }
  const double scale = 1.0 / std::sqrt(n2);
  for (cplx& a : amps) a *= scale;
  return make_state(layout, std::move(amps));
}

void random_pair(std::mt19937_64& eng, double& alpha, double& beta) {
  const double p = uniform_unit(eng);
  alpha = std::sqrt(p);
  beta = std::sqrt(1.0 - p);
}

void random_triple(std::mt19937_64& eng, double& alpha, double& beta,
                   double& gamma) {
  const double x = 0.05 + uniform_unit(eng);
  const double y = 0.05 + uniform_unit(eng);
  const double z = 0.05 + uniform_unit(eng);
  const double s = x + y + z;
  alpha = std::sqrt(x / s);
  beta = std::sqrt(y / s);
  gamma = std::sqrt(z / s);
}

// Gauge-invariant residual of a diagonal qutrit correction against the phase
// constraints of six-level outcome m: the corrected branch phases must agree
// with the outcome vector's phases up to one common global phase.
double residual_against_constraints(const LocalOperator& corr, int m) {
  const MeasurementBasis basis = six_level_basis(0);
  static const int pair_level[3][3] = {{0, 1, 3}, {1, 2, 5}, {3, 5, 4}};
  auto phase_of = [](cplx z) { return z / std::abs(z); };
  const cplx chi0 = phase_of(corr.matrix(0, 0));
  const cplx gauge = phase_of(basis.vectors[m][0]) / (chi0 * chi0);
  double worst = 0.0;
  for (int j = 0; j < 3; ++j)
    for (int k = j; k < 3; ++k) {
      const cplx lhs =
          phase_of(corr.matrix(j, j)) * phase_of(corr.matrix(k, k)) * gauge;
      const cplx rhs = phase_of(basis.vectors[m][pair_level[j][k]]);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  return worst;
}

LocalOperator qutrit_correction(const VerifyOptions& opt, int m) {
  return opt.qutrit_correction_override ? opt.qutrit_correction_override(m)
                                        : correction_qutrit(m);
}

// ---------------------------------------------------------------------------
// hilbert suite
// ---------------------------------------------------------------------------

void check_unitarity(std::vector<CheckResult>& out, const VerifyOptions& opt) {
  Checker c("hilbert", "unitarity-preservation");
  std::mt19937_64 eng(opt.seed);
  std::vector<LocalOperator> ops{
      shift_down_qutrit(),
      shift_up_qutrit(),
      hadamard(),
      sigma_z(),
      phase_rotation(0.7),
      cnot(),
      controlled_v(),
      controlled_w(),
      qubit_controlled_shift(5, 1),
      value_controlled_shift(3, 6),
      conditional_shift({3, 3}, 6, {0, 0, 1, 0, 0, 2, 1, 2, 0}, "pair-shift"),
      sender_phase_basic(1.1),
      sender_phase_n(0.4, 5),
      sender_phase_diff(0.3, 1.2),
      sender_phase_qutrit(0.8, 2.1),
      controlled_sender_phase(0.2, 1.7),
      correction_basic(1),
      correction_basic_xbasis(2),
      correction_n(3, 6),
      correction_diff(3).first,
      correction_diff(3).second,
      correction_qutrit(2),
      permutation_op(5, {4, 3, 2, 1, 0}, "reverse")};
  for (const LocalOperator& op : ops) {
    SubsystemLayout layout = make_layout(op.dims);
    std::vector<int> targets(op.dims.size());
    for (std::size_t i = 0; i < targets.size(); ++i)
      targets[i] = static_cast<int>(i);
    for (int trial = 0; trial < 5; ++trial) {
      const StateVector in = random_state(layout, eng);
      const StateVector outv = apply_local(in, op, targets);
      c.expect_near(outv.norm(), 1.0, opt.tolerance,
                    op.name + " changed the norm");
    }
  }
  out.push_back(c.r);
}

void check_measurement_completeness(std::vector<CheckResult>& out,
                                    const VerifyOptions& opt) {
  Checker c("hilbert", "measurement-completeness");
  std::mt19937_64 eng(opt.seed + 1);
  std::vector<MeasurementBasis> bases;
  bases.push_back(computational_basis(0, 3));
  bases.push_back(computational_basis(0, 6));
  for (int d = 2; d <= 9; ++d) bases.push_back(fourier_basis(0, d));
  bases.push_back(sender_basis_qutrit(0));
  bases.push_back(six_level_basis(0));
  bases.push_back(equatorial_pair_basis(0, 0.77));
  bases.push_back(qutrit_x_basis(0));
  int states_checked = 0;
  for (const MeasurementBasis& basis : bases) {
    const SubsystemLayout layout = make_layout({basis.dim(), 2});
    for (int trial = 0; trial < 100 / static_cast<int>(bases.size()) + 1;
         ++trial) {
      const StateVector s = random_state(layout, eng);
      const MeasurementResult r = measure(s, basis, MeasureMode::enumerate_all);
      double total = 0.0;
      for (const MeasurementBranch& br : r.branches) total += br.probability;
      c.expect_near(total, 1.0, opt.tolerance,
                    basis.name + " probabilities do not sum to 1");
      ++states_checked;
    }
  }
  c.expect(states_checked >= 100, 0.0, "fewer than 100 random states covered");
  out.push_back(c.r);
}

void check_partial_trace(std::vector<CheckResult>& out, const VerifyOptions& opt) {
  Checker c("hilbert", "partial-trace-consistency");
  std::mt19937_64 eng(opt.seed + 2);
  const std::vector<std::vector<int>> layouts{
      {3, 2, 2}, {4, 2, 2}, {6, 3, 3}, {5, 2, 2, 2, 2}, {2, 3, 2, 2}};
  for (const auto& dims : layouts) {
    const SubsystemLayout layout = make_layout(dims);
    for (int trial = 0; trial < 4; ++trial) {
      const StateVector s = random_state(layout, eng);
      for (int cut = 1; cut < layout.count(); ++cut) {
        std::vector<int> left, right;
        for (int i = 0; i < layout.count(); ++i)
          (i < cut ? left : right).push_back(i);
        const DensityMatrix a = partial_trace(s, left);
        const DensityMatrix b = partial_trace(s, right);
        c.expect_near(a.entries.trace().real(), 1.0, opt.tolerance,
                      "partial trace is not trace-1");
        c.expect_near(von_neumann_entropy(a), von_neumann_entropy(b),
                      opt.tolerance,
                      "complementary entropies differ (Schmidt symmetry)");
      }
    }
  }
  out.push_back(c.r);
}

void check_entropy_oracle(std::vector<CheckResult>& out, const VerifyOptions& opt) {
  Checker c("hilbert", "entropy-oracle");
  for (int i = 0; i <= 100; ++i) {
    const double p = i / 100.0;
    const ResourceState r =
        resource_basic(std::sqrt(p), std::sqrt(1.0 - p), Construction::direct);
    const double numerical = von_neumann_entropy(partial_trace(r.state, {0}));
    c.expect_near(numerical, broadcast_entanglement(p), opt.tolerance,
                  "closed form disagrees with the partial-trace entropy at p=" +
                      std::to_string(p));
  }
  out.push_back(c.r);
}

void check_index_round_trip(std::vector<CheckResult>& out,
                            const VerifyOptions& opt) {
  Checker c("hilbert", "index-round-trip");
  const std::vector<std::vector<int>> layouts{
      {2, 2}, {3, 2, 2}, {4, 2, 2}, {6, 3, 3}, {9, 2, 2, 2, 2, 2, 2, 2, 2},
      {3, 3, 2, 2}, {2, 3, 2, 2}};
  for (const auto& dims : layouts) {
    const SubsystemLayout layout = make_layout(dims);
    for (long flat = 0; flat < layout.total_dim(); ++flat) {
      const std::vector<int> idx = layout.unflatten(flat);
      const long back = layout.flatten(idx);
      c.expect(back == flat, std::abs(static_cast<double>(back - flat)),
               "flatten(unflatten(i)) != i");
    }
  }
  (void)opt;
  out.push_back(c.r);
}

// ---------------------------------------------------------------------------
// gates suite
// ---------------------------------------------------------------------------

void check_gate_kinds(std::vector<CheckResult>& out, const VerifyOptions& opt) {
  Checker c("gates", "kind-checks");
  auto check_unitary = [&](const LocalOperator& op) {
    const long d = op.matrix.rows();
    const double res =
        (op.matrix.adjoint() * op.matrix -
         Eigen::MatrixXcd::Identity(d, d))
            .cwiseAbs()
            .maxCoeff();
    c.expect(op.kind == OperatorKind::unitary && res <= opt.tolerance, res,
             op.name + " fails the unitarity check");
  };
  auto check_projector = [&](const LocalOperator& op) {
    const double herm = (op.matrix - op.matrix.adjoint()).cwiseAbs().maxCoeff();
    const double idem = (op.matrix * op.matrix - op.matrix).cwiseAbs().maxCoeff();
    const double res = std::max(herm, idem);
    c.expect(op.kind == OperatorKind::projector && res <= opt.tolerance, res,
             op.name + " fails the projector check");
  };
  check_unitary(shift_down_qutrit());
  check_unitary(shift_up_qutrit());
  check_unitary(shift_op(7, 3));
  check_unitary(hadamard());
  check_unitary(sigma_z());
  check_unitary(phase_rotation(2.4));
  check_unitary(cnot());
  check_unitary(controlled_v());
  check_unitary(controlled_w());
  check_unitary(qubit_controlled_shift(9, 1));
  check_unitary(value_controlled_shift(3, 6));
  check_unitary(sender_phase_basic(0.9));
  check_unitary(sender_phase_n(1.3, 8));
  check_unitary(sender_phase_diff(0.4, 0.9));
  check_unitary(sender_phase_qutrit(1.4, 0.2));
  check_unitary(controlled_sender_phase(0.6, 1.9));
  for (int m = 0; m < 3; ++m) check_unitary(correction_basic(m));
  for (int m = 0; m < 3; ++m) check_unitary(correction_basic_xbasis(m));
  for (int n = 1; n <= 8; ++n)
    for (int m = 0; m <= n; ++m) check_unitary(correction_n(m, n));
  for (int j = 0; j < 4; ++j) {
    check_unitary(correction_diff(j).first);
    check_unitary(correction_diff(j).second);
  }
  for (int m = 0; m < 6; ++m) check_unitary(correction_qutrit(m));
  check_projector(pair_differs_projector());
  check_projector(pair_matches_projector());
  out.push_back(c.r);
}

void check_correction_qutrit_consistency(std::vector<CheckResult>& out,
                                         const VerifyOptions& opt) {
  Checker c("gates", "correction_qutrit-consistency");
  for (int m = 0; m < 6; ++m) {
    const double res = residual_against_constraints(qutrit_correction(opt, m), m);
    c.expect(res <= opt.tolerance, res,
             "outcome " + std::to_string(m) +
                 ": the six branch-phase constraints are inconsistent");
  }
  out.push_back(c.r);
}

void check_printed_corrections(std::vector<CheckResult>& out,
                               const VerifyOptions& opt) {
  Checker c("gates", "correction-tables");
  auto diag3 = [](cplx a, cplx b, cplx d) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(3, 3);
    m(0, 0) = a;
    m(1, 1) = b;
    m(2, 2) = d;
    return m;
  };
  const double third = 2.0 * kPi / 3.0;
  auto residual = [](const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    return (a - b).cwiseAbs().maxCoeff();
  };
  double res = residual(correction_qutrit(0).matrix, diag3(1, 1, 1));
  c.expect(res <= opt.tolerance, res, "outcome-0 correction is not the identity");
  res = residual(correction_qutrit(2).matrix,
                 diag3(1, phase(-third), phase(third)));
  c.expect(res <= opt.tolerance, res,
           "outcome-2 correction does not match diag(1, e^{-2pi i/3}, e^{2pi i/3})");
  res = residual(correction_qutrit(1).matrix,
                 diag3(1, phase(third), phase(-third)));
  c.expect(res <= opt.tolerance, res,
           "outcome-1 correction does not match diag(1, e^{2pi i/3}, e^{-2pi i/3})");

  // Basic table: identity, diag(e^{i pi/3}, e^{-i pi/3}), and its inverse.
  Eigen::MatrixXcd ub = Eigen::MatrixXcd::Zero(2, 2);
  ub(0, 0) = phase(kPi / 3.0);
  ub(1, 1) = phase(-kPi / 3.0);
  res = residual(correction_basic(1).matrix, ub);
  c.expect(res <= opt.tolerance, res, "basic outcome-1 correction mismatch");
  res = residual(correction_basic(2).matrix, ub.adjoint());
  c.expect(res <= opt.tolerance, res,
           "basic outcome-2 correction is not the inverse of outcome 1");
  res = residual(correction_basic(0).matrix, Eigen::MatrixXcd::Identity(2, 2));
  c.expect(res <= opt.tolerance, res, "basic outcome-0 correction mismatch");

  // x-basis variant: U_c = H U_b H, so |+x> and |-x> are eigenvectors.
  const Eigen::MatrixXcd uc = correction_basic_xbasis(1).matrix;
  Eigen::Vector2cd px(1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0));
  Eigen::Vector2cd mx(1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0));
  res = (uc * px - phase(kPi / 3.0) * px).cwiseAbs().maxCoeff();
  c.expect(res <= opt.tolerance, res, "x-basis correction does not phase |+x>");
  res = (uc * mx - phase(-kPi / 3.0) * mx).cwiseAbs().maxCoeff();
  c.expect(res <= opt.tolerance, res, "x-basis correction does not phase |-x>");

  // n-party table at n=2 matches the basic table up to a global phase.
  const Eigen::MatrixXcd un = correction_n(1, 2).matrix;
  res = residual(un, phase(kPi / 3.0) * ub);
  c.expect(res <= opt.tolerance, res,
           "two-receiver correction differs from the basic one beyond a "
           "global phase");
  out.push_back(c.r);
}

void check_branch_phase_compatibility(std::vector<CheckResult>& out,
                                      const VerifyOptions& opt) {
  Checker c("gates", "basis-correction-compatibility");
  auto phase_of = [](cplx z) { return z / std::abs(z); };

  // Basic broadcast: levels pair (0,0)->0, (1,1)->1, {(0,1),(1,0)}->2.
  {
    const MeasurementBasis basis = sender_basis_qutrit(0);
    static const int level[2][2] = {{0, 2}, {2, 1}};
    for (int m = 0; m < 3; ++m) {
      const Eigen::MatrixXcd ub = correction_basic(m).matrix;
      const cplx gauge = phase_of(basis.vectors[m][0]) /
                         (phase_of(ub(0, 0)) * phase_of(ub(0, 0)));
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) {
          const cplx lhs = phase_of(ub(j, j)) * phase_of(ub(k, k)) * gauge;
          const cplx rhs = phase_of(basis.vectors[m][level[j][k]]);
          c.expect(std::abs(lhs - rhs) <= opt.tolerance, std::abs(lhs - rhs),
                   "basic outcome " + std::to_string(m) +
                       " correction does not cancel the branch phases");
        }
    }
  }

  // Many receivers: a bitstring with z zeros sits on level z and needs the
  // per-qubit |0> phase applied z times.
  for (int n = 1; n <= 8; ++n) {
    const MeasurementBasis basis = fourier_basis(0, n + 1);
    for (int m = 0; m <= n; ++m) {
      const Eigen::MatrixXcd um = correction_n(m, n).matrix;
      const cplx per_zero = phase_of(um(0, 0)) / phase_of(um(1, 1));
      const cplx gauge = phase_of(basis.vectors[m][0]);
      for (int z = 0; z <= n; ++z) {
        cplx lhs = gauge;
        for (int i = 0; i < z; ++i) lhs *= per_zero;
        const cplx rhs = phase_of(basis.vectors[m][z]);
        c.expect(std::abs(lhs - rhs) <= opt.tolerance, std::abs(lhs - rhs),
                 "n=" + std::to_string(n) + " outcome " + std::to_string(m) +
                     " correction does not cancel the level-" +
                     std::to_string(z) + " phase");
      }
    }
  }

  // Different states: level k = 2b + c needs U_b phase on b and U_c phase on c.
  {
    const MeasurementBasis basis = fourier_basis(0, 4);
    for (int j = 0; j < 4; ++j) {
      const auto pairop = correction_diff(j);
      for (int b = 0; b < 2; ++b)
        for (int cc = 0; cc < 2; ++cc) {
          const cplx lhs = phase_of(basis.vectors[j][0]) *
                           phase_of(pairop.first.matrix(b, b)) *
                           phase_of(pairop.second.matrix(cc, cc));
          const cplx rhs = phase_of(basis.vectors[j][2 * b + cc]);
          c.expect(std::abs(lhs - rhs) <= opt.tolerance, std::abs(lhs - rhs),
                   "different-states outcome " + std::to_string(j) +
                       " corrections do not cancel the branch phase");
        }
    }
  }
  out.push_back(c.r);
}

void check_fourier_vs_sender_basis(std::vector<CheckResult>& out,
                                   const VerifyOptions& opt) {
  Checker c("gates", "fourier-vs-sender-basis");
  const MeasurementBasis f = fourier_basis(0, 3);
  const MeasurementBasis s = sender_basis_qutrit(0);
  for (int m = 0; m < 3; ++m) {
    cplx overlap{0, 0};
    for (int k = 0; k < 3; ++k)
      overlap += std::conj(f.vectors[m][k]) * s.vectors[m][k];
    c.expect_near(std::abs(overlap), 1.0, opt.tolerance,
                  "vector " + std::to_string(m) +
                      " is not a phase multiple of the Fourier vector");
  }
  std::mt19937_64 eng(opt.seed + 3);
  const SubsystemLayout layout = make_layout({3, 2});
  for (int trial = 0; trial < 20; ++trial) {
    const StateVector st = random_state(layout, eng);
    const MeasurementResult rf = measure(st, f, MeasureMode::enumerate_all);
    const MeasurementResult rs = measure(st, s, MeasureMode::enumerate_all);
    for (int m = 0; m < 3; ++m)
      c.expect_near(rf.branches[m].probability, rs.branches[m].probability,
                    opt.tolerance,
                    "outcome probabilities differ between the two bases");
  }
  out.push_back(c.r);
}

void check_elementary_identities(std::vector<CheckResult>& out,
                                 const VerifyOptions& opt) {
  Checker c("gates", "elementary-identities");
  auto residual = [](const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    return (a - b).cwiseAbs().maxCoeff();
  };
  const LocalOperator v = shift_down_qutrit();
  c.expect(std::abs(v.matrix(2, 0) - cplx{1, 0}) <= opt.tolerance, 0.0,
           "V does not map |0> to |2>");
  double res = residual(v.matrix * v.matrix * v.matrix,
                        Eigen::MatrixXcd::Identity(3, 3));
  c.expect(res <= opt.tolerance, res, "V cubed is not the identity");
  const LocalOperator cw = controlled_w();
  res = residual(cw.matrix * cw.matrix * cw.matrix,
                 Eigen::MatrixXcd::Identity(9, 9));
  c.expect(res <= opt.tolerance, res, "C-W cubed is not the identity");
  c.expect(std::abs(cw.matrix(3 * 1 + 0, 3 * 1 + 2) - cplx{1, 0}) <=
               opt.tolerance,
           0.0, "C-W does not map |1,2> to |1,0>");

  const LocalOperator cs4 = qubit_controlled_shift(4, 1);
  c.expect(std::abs(cs4.matrix(4 + 3, 4 + 2) - cplx{1, 0}) <= opt.tolerance, 0.0,
           "controlled shift does not map |1,2> to |1,3>");
  c.expect(std::abs(cs4.matrix(4 + 0, 4 + 3) - cplx{1, 0}) <= opt.tolerance, 0.0,
           "controlled shift does not wrap |1,3> to |1,0>");
  res = residual(qubit_controlled_shift(3, -1).matrix, controlled_v().matrix);
  c.expect(res <= opt.tolerance, res,
           "shift by -1 on a qutrit is not the controlled-V gate");

  // One- and two-receiver sender phases.
  const Eigen::MatrixXcd n1 = sender_phase_n(0.83, 1).matrix;
  c.expect(std::abs(n1(0, 0) - phase(-0.83)) <= opt.tolerance, 0.0,
           "one-receiver phase on |0> is wrong");
  c.expect(std::abs(n1(1, 1) - phase(0.83)) <= opt.tolerance, 0.0,
           "one-receiver phase on |1> is wrong");
  const Eigen::MatrixXcd n2 = sender_phase_n(0.41, 2).matrix;
  const Eigen::MatrixXcd b3 = sender_phase_basic(0.41).matrix;
  static const int relabel[3] = {2, 0, 1};  // basic level -> zero count
  double worst = 0.0;
  for (int i = 0; i < 3; ++i)
    worst = std::max(worst, std::abs(b3(i, i) - n2(relabel[i], relabel[i])));
  c.expect(worst <= opt.tolerance, worst,
           "two-receiver phase does not match the basic one under relabeling");

  // sigma_z advances an equatorial angle by -pi/2 together with an exact
  // e^{i pi/2} prefactor.
  for (double theta : {0.0, 0.37, 1.1, 2.9}) {
    const StateVector in = equatorial_qubit(theta);
    const StateVector flipped = apply_local(in, sigma_z(), {0});
    const StateVector rotated = equatorial_qubit(theta - kPi / 2.0);
    double diff = 0.0;
    for (int i = 0; i < 2; ++i)
      diff = std::max(diff, std::abs(flipped.amplitudes[i] -
                                     phase(kPi / 2.0) * rotated.amplitudes[i]));
    c.expect(diff <= opt.tolerance, diff,
             "sigma_z is not e^{i pi/2} times the -pi/2 rotation");
    c.expect_near(fidelity_up_to_global_phase(flipped, rotated), 1.0,
                  opt.tolerance, "sigma_z output is not the rotated state");
    c.expect_near(std::abs(inner_product(in, flipped)), 0.0, opt.tolerance,
                  "flipped state is not orthogonal to the original");
  }

  // Controlled sender phase blocks.
  const Eigen::MatrixXcd csp = controlled_sender_phase(0.0, kPi / 2.0).matrix;
  worst = residual(csp.topLeftCorner(3, 3), Eigen::MatrixXcd::Identity(3, 3));
  Eigen::MatrixXcd lower = Eigen::MatrixXcd::Zero(3, 3);
  lower(0, 0) = -1;
  lower(1, 1) = -1;
  lower(2, 2) = 1;
  worst = std::max(worst, residual(csp.bottomRightCorner(3, 3), lower));
  c.expect(worst <= opt.tolerance, worst,
           "controlled sender phase blocks are wrong at (0, pi/2)");
  out.push_back(c.r);
}

// ---------------------------------------------------------------------------
// circuits suite
// ---------------------------------------------------------------------------

void check_cross_method(std::vector<CheckResult>& out, const VerifyOptions& opt) {
  Checker c("circuits", "cross-method-equality");
  const std::vector<double> ps{0.0, 0.09, 0.25, 0.5, 0.64, 0.91, 1.0};
  for (double p : ps) {
    const double a = std::sqrt(p), b = std::sqrt(1.0 - p);
    const double fid = fidelity_up_to_global_phase(
        resource_basic(a, b, Construction::direct).state,
        resource_basic(a, b, Construction::circuit).state);
    c.expect_near(fid, 1.0, opt.tolerance,
                  "three-level resource: circuit differs from direct at p=" +
                      std::to_string(p));
  }
  {
    const double fid = fidelity_up_to_global_phase(
        resource_diff_bases(Construction::direct).state,
        resource_diff_bases(Construction::circuit).state);
    c.expect_near(fid, 1.0, opt.tolerance,
                  "rotated-basis resource: circuit differs from direct");
  }
  for (int n = 1; n <= 8; ++n)
    for (double p : {0.2, 0.5, 0.77}) {
      const double a = std::sqrt(p), b = std::sqrt(1.0 - p);
      const double fid = fidelity_up_to_global_phase(
          resource_n_party(a, b, n, Construction::direct).state,
          resource_n_party(a, b, n, Construction::circuit).state);
      c.expect_near(fid, 1.0, opt.tolerance,
                    "many-receiver resource: circuit differs from direct at n=" +
                        std::to_string(n));
    }
  {
    const StateVector direct = resource_diff_states(Construction::direct).state;
    const double f1 = fidelity_up_to_global_phase(
        direct, resource_diff_states(Construction::qudit_circuit).state);
    c.expect_near(f1, 1.0, opt.tolerance,
                  "four-level resource: qudit circuit differs from direct");
    const double f2 = fidelity_up_to_global_phase(
        direct, resource_diff_states(Construction::two_qubit_circuit).state);
    c.expect_near(f2, 1.0, opt.tolerance,
                  "four-level resource: two-qubit circuit differs from direct");
  }
  std::mt19937_64 eng(opt.seed + 4);
  for (int trial = 0; trial < 8; ++trial) {
    double a, b, g;
    if (trial == 0) {
      a = b = g = 1.0 / std::sqrt(3.0);
    } else if (trial == 1) {
      const double q = uniform_unit(eng);
      a = std::sqrt(q);
      b = std::sqrt(1.0 - q);
      g = 0.0;  // vanishing third coefficient reduces to the qubit structure
    } else {
      random_triple(eng, a, b, g);
    }
    const double fid = fidelity_up_to_global_phase(
        resource_qutrit(a, b, g, Construction::direct).state,
        resource_qutrit(a, b, g, Construction::circuit).state);
    c.expect_near(fid, 1.0, opt.tolerance,
                  "six-level resource: circuit differs from direct");
  }
  out.push_back(c.r);
}

void check_entanglement_values(std::vector<CheckResult>& out,
                               const VerifyOptions& opt) {
  Checker c("circuits", "entanglement-values");
  for (int i = 0; i <= 20; ++i) {
    const double p = i / 20.0;
    const ResourceState r =
        resource_basic(std::sqrt(p), std::sqrt(1.0 - p), Construction::direct);
    c.expect_near(sender_entropy(r), broadcast_entanglement(p), opt.tolerance,
                  "three-level resource entropy mismatch at p=" +
                      std::to_string(p));
  }
  const double u = 1.0 / std::sqrt(2.0);
  c.expect_near(sender_entropy(resource_basic(u, u, Construction::direct)), 1.5,
                opt.tolerance, "uniform three-level resource is not 1.5 bits");
  c.expect_near(sender_entropy(resource_diff_states(Construction::direct)), 2.0,
                opt.tolerance, "four-level resource is not 2 bits");
  std::mt19937_64 eng(opt.seed + 5);
  for (int n = 1; n <= 8; ++n)
    for (int trial = 0; trial < 3; ++trial) {
      double a, b;
      random_pair(eng, a, b);
      const double e =
          sender_entropy(resource_n_party(a, b, n, Construction::direct));
      c.expect(e <= std::log2(n + 1.0) + opt.tolerance,
               std::max(0.0, e - std::log2(n + 1.0)),
               "many-receiver resource entropy exceeds log2(n+1)");
    }
  out.push_back(c.r);
}

void check_dicke_conditioning(std::vector<CheckResult>& out,
                              const VerifyOptions& opt) {
  Checker c("circuits", "dicke-conditioning");
  std::mt19937_64 eng(opt.seed + 6);
  for (int n = 1; n <= 6; ++n) {
    double a, b;
    random_pair(eng, a, b);
    if (a < 0.05 || b < 0.05) {
      a = 0.6;
      b = 0.8;
    }
    const ResourceState r = resource_n_party(a, b, n, Construction::direct);
    for (int k = 0; k <= n; ++k) {
      std::vector<cplx> e(n + 1, cplx{0, 0});
      e[k] = cplx{1, 0};
      StateVector cond = project_subsystem(r.state, 0, e);
      const double nrm = cond.norm();
      c.expect(nrm > 0, 0.0, "conditioned branch vanished unexpectedly");
      for (cplx& amp : cond.amplitudes) amp /= nrm;
      const double fid =
          fidelity_up_to_global_phase(cond, dicke_state(n, k));
      c.expect_near(fid, 1.0, opt.tolerance,
                    "conditioning the qudit on level " + std::to_string(k) +
                        " does not leave the symmetric state");
    }
  }
  out.push_back(c.r);
}

void check_qutrit_stages(std::vector<CheckResult>& out, const VerifyOptions& opt) {
  Checker c("circuits", "six-level-circuit-stages");
  std::mt19937_64 eng(opt.seed + 7);
  for (int trial = 0; trial < 4; ++trial) {
    double a, b, g;
    if (trial == 0)
      a = b = g = 1.0 / std::sqrt(3.0);
    else
      random_triple(eng, a, b, g);
    const SubsystemLayout layout = make_layout({6, 3, 3}, {"a", "b", "c"});
    const StateVector qutrit =
        make_state(make_layout({3}), {cplx{a, 0}, cplx{b, 0}, cplx{g, 0}});
    StateVector s = tensor(basis_state(make_layout({6}), {0}),
                           tensor(qutrit, qutrit));
    s.layout = layout;
    const LocalOperator shift = value_controlled_shift(3, 6);
    s = apply_local(s, shift, {1, 0});
    s = apply_local(s, shift, {2, 0});
    // After the two value shifts every (j,k) pair sits on level j+k, so the
    // (0,2),(2,0) terms share level 2 with (1,1), and (1,2),(2,1) sit on 3.
    const double coeff[3] = {a, b, g};
    double worst = 0.0;
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        const cplx amp = s.amplitudes[layout.flatten({j + k, j, k})];
        worst = std::max(worst, std::abs(amp - cplx{coeff[j] * coeff[k], 0}));
      }
    c.expect(worst <= opt.tolerance, worst,
             "mid-circuit levels are not the pair sums");
    std::vector<int> amounts(9, 0);
    amounts[2] = 1;
    amounts[6] = 1;
    amounts[5] = 2;
    amounts[7] = 2;
    s = apply_local(s, conditional_shift({3, 3}, 6, amounts, "pair-fixup"),
                    {1, 2, 0});
    const double fid = fidelity_up_to_global_phase(
        s, resource_qutrit(a, b, g, Construction::direct).state);
    c.expect_near(fid, 1.0, opt.tolerance,
                  "conditional shifts do not produce the six-level resource");
  }
  out.push_back(c.r);
}

void check_singlet(std::vector<CheckResult>& out, const VerifyOptions& opt) {
  Checker c("circuits", "singlet-properties");
  const StateVector s = singlet();
  const SubsystemLayout layout = s.layout;
  double worst = std::abs(s.amplitudes[layout.flatten({0, 1})] +
                          s.amplitudes[layout.flatten({1, 0})]);
  c.expect(worst <= opt.tolerance, worst, "swap does not flip the sign");
  const DensityMatrix rho = partial_trace(s, {0});
  worst = (rho.entries - Eigen::MatrixXcd::Identity(2, 2) * 0.5)
              .cwiseAbs()
              .maxCoeff();
  c.expect(worst <= opt.tolerance, worst, "reduced state is not I/2");
  c.expect_near(von_neumann_entropy(rho), 1.0, opt.tolerance,
                "singlet does not carry one entanglement bit");
  const double u = 1.0 / std::sqrt(2.0);
  const StateVector triplet =
      make_state(make_layout({2, 2}, {"a", "b"}),
                 {cplx{0, 0}, cplx{u, 0}, cplx{u, 0}, cplx{0, 0}});
  c.expect_near(std::abs(inner_product(s, triplet)), 0.0, opt.tolerance,
                "singlet is not orthogonal to the symmetric partner");
  out.push_back(c.r);
}

// ---------------------------------------------------------------------------
// protocols suite
// ---------------------------------------------------------------------------

void check_deterministic_success(std::vector<CheckResult>& out,
                                 const VerifyOptions& opt) {
  Checker fid("protocols", "deterministic-success");
  Checker uni("protocols", "equiprobable-outcomes");
  std::mt19937_64 eng(opt.seed + 8);
  auto scan = [&](const ProtocolTranscript& t, double uniform_p) {
    double total = 0.0;
    for (const BranchRecord& b : t.branches) {
      fid.expect(b.fidelity >= 1.0 - opt.tolerance,
                 std::max(0.0, 1.0 - b.fidelity),
                 t.protocol + ": branch fidelity below 1");
      uni.expect_near(b.probability, uniform_p, opt.tolerance,
                      t.protocol + ": outcome probabilities are not uniform");
      total += b.probability;
    }
    fid.expect(std::abs(total - 1.0) <= opt.tolerance, std::abs(total - 1.0),
               t.protocol + ": probabilities do not sum to 1");
    fid.expect(t.verification_passed, 0.0,
               t.protocol + ": transcript did not verify");
  };
  for (int i = 0; i < 50; ++i) {
    const double theta = kPi * uniform_unit(eng);
    double a, b;
    random_pair(eng, a, b);
    scan(run_basic_broadcast(a, b, theta), 1.0 / 3.0);
    scan(run_diff_bases(theta), 1.0 / 3.0);
    const int n = 1 + i % 8;
    scan(run_n_party(a, b, theta, n), 1.0 / (n + 1.0));
    scan(run_diff_states(theta, kPi * uniform_unit(eng)), 0.25);
    scan(run_single_receiver_rsp(theta), 0.5);
    // The control-qubit stage is angle-dependent, so only the first-stage
    // probability (the metric the run records) is checked for uniformity.
    const ProtocolTranscript ce =
        run_controlled_entanglement(theta, kPi * uniform_unit(eng));
    double total = 0.0;
    for (const BranchRecord& br : ce.branches) {
      fid.expect(br.fidelity >= 1.0 - opt.tolerance,
                 std::max(0.0, 1.0 - br.fidelity),
                 "controlled_entanglement: branch fidelity below 1");
      const double eq = br.metrics.at("control_entangled_fidelity");
      fid.expect(eq >= 1.0 - opt.tolerance, std::max(0.0, 1.0 - eq),
                 "controlled_entanglement: pre-split state mismatch");
      total += br.probability;
      const double first_stage =
          br.probability /
          std::max(br.metrics.at("control_branch_probability"), 1e-300);
      uni.expect_near(first_stage, 1.0 / 3.0, opt.tolerance,
                      "controlled_entanglement: sender outcomes not uniform");
    }
    fid.expect(std::abs(total - 1.0) <= opt.tolerance, std::abs(total - 1.0),
               "controlled_entanglement: probabilities do not sum to 1");
    fid.expect(ce.verification_passed, 0.0,
               "controlled_entanglement: transcript did not verify");
  }
  out.push_back(fid.r);
  out.push_back(uni.r);
}

void check_qutrit_outcomes(std::vector<CheckResult>& out,
                           const VerifyOptions& opt) {
  std::vector<Checker> per;
  per.reserve(6);
  for (int m = 0; m < 6; ++m)
    per.emplace_back("protocols", "qutrit-outcome-" + std::to_string(m));
  Checker uni("protocols", "qutrit-equiprobable");

  std::mt19937_64 eng(opt.seed + 9);
  const MeasurementBasis basis = six_level_basis(0);
  for (int trial = 0; trial < 10; ++trial) {
    double a, b, g;
    if (trial == 0)
      a = b = g = 1.0 / std::sqrt(3.0);
    else
      random_triple(eng, a, b, g);
    const double t1 = kPi * uniform_unit(eng);
    const double t2 = kPi * uniform_unit(eng);
    const ResourceState rs = resource_qutrit(a, b, g, Construction::direct);
    const StateVector after =
        apply_local(rs.state, sender_phase_qutrit(t1, t2), {0});
    const StateVector target = equatorial_qutrit(t1, t2, a, b, g);
    const StateVector joint = tensor(target, target);
    for (int m = 0; m < 6; ++m) {
      StateVector bc = project_subsystem(after, 0, basis.vectors[m]);
      const double p = bc.norm() * bc.norm();
      uni.expect_near(p, 1.0 / 6.0, opt.tolerance,
                      "six-level outcome probabilities are not uniform");
      const double nrm = bc.norm();
      for (cplx& amp : bc.amplitudes) amp /= nrm;
      const LocalOperator corr = qutrit_correction(opt, m);
      bc = apply_local(bc, corr, {0});
      bc = apply_local(bc, corr, {1});
      const double f = fidelity_up_to_global_phase(bc, joint);
      per[m].expect(f >= 1.0 - opt.tolerance, std::max(0.0, 1.0 - f),
                    "corrected outcome-" + std::to_string(m) +
                        " state misses the product target (fidelity " +
                        std::to_string(f) + ")");
    }
  }
  for (Checker& c : per) out.push_back(c.r);
  out.push_back(uni.r);
}

void check_probabilistic(std::vector<CheckResult>& out, const VerifyOptions& opt) {
  Checker c("protocols", "probabilistic-failure-weight");
  std::mt19937_64 eng(opt.seed + 10);
  for (int i = 0; i < 20; ++i) {
    double a, b;
    random_pair(eng, a, b);
    const double theta = kPi * uniform_unit(eng);
    const ProtocolTranscript t = run_probabilistic_unknown_angle(a, b, theta);
    double success = 0.0, failure = 0.0;
    for (const BranchRecord& br : t.branches) {
      if (br.success) {
        success += br.probability;
        c.expect(br.fidelity >= 1.0 - opt.tolerance,
                 std::max(0.0, 1.0 - br.fidelity),
                 "continued branch does not deliver the target");
      } else {
        failure += br.probability;
        c.expect(br.corrections.empty(), 0.0,
                 "aborted branch records a correction");
        c.expect(br.joint_amplitudes.empty(), 0.0,
                 "aborted branch records a corrected joint state");
      }
    }
    c.expect_near(success, 1.0 / 3.0, opt.tolerance,
                  "success weight is not one third");
    c.expect_near(failure, 2.0 / 3.0, opt.tolerance,
                  "failure weight is not two thirds");
  }
  out.push_back(c.r);
}

void check_locality(std::vector<CheckResult>& out, const VerifyOptions& opt) {
  Checker c("protocols", "locality-audit");
  std::vector<ProtocolTranscript> all;
  all.push_back(run_single_receiver_rsp(0.6));
  all.push_back(run_basic_broadcast(0.6, 0.8, 1.1));
  all.push_back(run_diff_bases(0.9));
  all.push_back(run_probabilistic_unknown_angle(0.6, 0.8, 0.4));
  all.push_back(run_n_party(0.6, 0.8, 0.7, 4));
  all.push_back(run_diff_states(0.3, 1.1));
  all.push_back(run_qutrit_broadcast(0.5, 1.3, 0.5, 0.5, 1.0 / std::sqrt(2.0)));
  all.push_back(run_encrypted_transfer(0.8, 1.9, 64));
  all.push_back(run_voting({0, 1, 1}, 0.4, 2, opt.seed));
  all.push_back(run_bell_sharing());
  all.push_back(run_controlled_entanglement(0.2, 1.4));
  for (const ProtocolTranscript& t : all) {
    const std::vector<std::string> violations = audit_locality(t);
    c.expect(violations.empty(), static_cast<double>(violations.size()),
             t.protocol + ": " +
                 (violations.empty() ? "" : violations.front()));
  }
  out.push_back(c.r);
}

void check_resource_dominance(std::vector<CheckResult>& out,
                              const VerifyOptions& opt) {
  Checker c("protocols", "resource-dominance");
  std::vector<ProtocolTranscript> all;
  all.push_back(run_single_receiver_rsp(0.6));
  all.push_back(run_basic_broadcast(0.6, 0.8, 1.1));
  all.push_back(run_basic_broadcast(1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), 0.5));
  all.push_back(run_diff_bases(0.9));
  all.push_back(run_probabilistic_unknown_angle(0.6, 0.8, 0.4));
  for (int n = 1; n <= 8; ++n) all.push_back(run_n_party(0.6, 0.8, 0.7, n));
  all.push_back(run_diff_states(0.3, 1.1));
  all.push_back(run_qutrit_broadcast(0.5, 1.3, 0.5, 0.5, 1.0 / std::sqrt(2.0)));
  all.push_back(run_voting({1, 0}, 0.4, 1, opt.seed));
  all.push_back(run_bell_sharing());
  all.push_back(run_controlled_entanglement(0.2, 1.4));
  for (const ProtocolTranscript& t : all) {
    const ResourceReport& r = t.report;
    c.expect(r.entanglement_ebits <= r.baseline_ebits + opt.tolerance,
             std::max(0.0, r.entanglement_ebits - r.baseline_ebits),
             t.protocol + ": entanglement exceeds the teleportation baseline");
    c.expect(r.classical_bits < r.baseline_bits - opt.tolerance,
             std::max(0.0, r.classical_bits - r.baseline_bits),
             t.protocol + ": classical bits do not beat the baseline");
    if (t.protocol == "basic" || t.protocol == "diff_bases" ||
        t.protocol == "qutrit")
      c.expect(r.entanglement_ebits < r.baseline_ebits - opt.tolerance, 0.0,
               t.protocol + ": entanglement saving is not strict");
  }
  out.push_back(c.r);
}

void check_sample_statistics(std::vector<CheckResult>& out,
                             const VerifyOptions& opt) {
  Checker c("protocols", "sample-frequencies");
  const int trials = 10000;
  int counts[3] = {0, 0, 0};
  const double a = 1.0 / std::sqrt(2.0);
  RunOptions ro;
  ro.mode = MeasureMode::sample_one;
  for (int i = 0; i < trials; ++i) {
    ro.seed = opt.seed + i;
    const ProtocolTranscript t = run_basic_broadcast(a, a, 0.9, ro);
    ++counts[t.branches.front().outcome_path.front()];
  }
  const double expect_p = 1.0 / 3.0;
  const double sigma = std::sqrt(expect_p * (1 - expect_p) / trials);
  for (int m = 0; m < 3; ++m) {
    const double freq = static_cast<double>(counts[m]) / trials;
    c.expect(std::abs(freq - expect_p) <= 3.0 * sigma, std::abs(freq - expect_p),
             "sampled outcome " + std::to_string(m) +
                 " frequency is off by more than three standard errors");
  }
  out.push_back(c.r);
}

void check_sample_enumerate_consistency(std::vector<CheckResult>& out,
                                        const VerifyOptions& opt) {
  Checker c("protocols", "sample-enumerate-consistency");
  RunOptions sample;
  sample.mode = MeasureMode::sample_one;
  for (std::uint64_t seed : {opt.seed, opt.seed + 17, opt.seed + 99}) {
    sample.seed = seed;
    const ProtocolTranscript s = run_basic_broadcast(0.6, 0.8, 1.2, sample);
    const ProtocolTranscript e = run_basic_broadcast(0.6, 0.8, 1.2);
    c.expect(s.branches.size() == 1, 0.0, "sampled run has several branches");
    const BranchRecord& sb = s.branches.front();
    const BranchRecord& eb = e.branches.at(sb.outcome_path.front());
    c.expect_near(sb.probability, eb.probability, opt.tolerance,
                  "sampled branch probability differs from enumeration");
    c.expect_near(sb.fidelity, eb.fidelity, opt.tolerance,
                  "sampled branch fidelity differs from enumeration");
    double worst = 0.0;
    for (std::size_t i = 0; i < sb.joint_amplitudes.size(); ++i)
      worst = std::max(worst,
                       std::abs(sb.joint_amplitudes[i] - eb.joint_amplitudes[i]));
    c.expect(worst <= opt.tolerance, worst,
             "sampled branch state differs from enumeration");
  }
  out.push_back(c.r);
}

void check_voting(std::vector<CheckResult>& out, const VerifyOptions& opt) {
  Checker c("protocols", "voting-decode-and-integrity");
  std::mt19937_64 eng(opt.seed + 11);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + static_cast<int>(uniform_unit(eng) * 5) % 5;
    std::vector<int> votes(n);
    for (int& v : votes) v = uniform_unit(eng) < 0.5 ? 0 : 1;
    const double theta = kPi * uniform_unit(eng);
    const ProtocolTranscript t = run_voting(votes, theta, 2, opt.seed + trial);
    const BranchRecord& b = t.branches.front();
    c.expect(t.verification_passed && b.success, 0.0,
             "untampered vote did not verify");
    for (int v = 0; v < n; ++v) {
      const double decoded =
          b.metrics.at("decoded_vote_" + std::to_string(v + 1));
      c.expect_near(decoded, votes[v], 0.0, "vote decoded incorrectly");
    }
    c.expect(b.metrics.at("readout_orthogonality_residual") <= 1e-12,
             b.metrics.at("readout_orthogonality_residual"),
             "flipped and unflipped readout states are not orthogonal");
    // Same election with one decoy flipped in transit.
    const ProtocolTranscript bad = run_voting(
        votes, theta, 2, opt.seed + trial,
        std::make_pair(static_cast<int>(uniform_unit(eng) * n) % n, 1));
    c.expect(bad.branches.front().metrics.at("tamper_flagged") == 1.0, 0.0,
             "injected tamper went unflagged");
    c.expect(!bad.verification_passed, 0.0,
             "tampered election still verified");
  }
  out.push_back(c.r);
}

void check_encrypted(std::vector<CheckResult>& out, const VerifyOptions& opt) {
  Checker c("protocols", "encrypted-transfer");
  std::mt19937_64 eng(opt.seed + 12);
  for (int trial = 0; trial < 20; ++trial) {
    const double theta = kPi * uniform_unit(eng);
    const double phi = kPi * uniform_unit(eng);
    const ProtocolTranscript t = run_encrypted_transfer(theta, phi, 256);
    c.expect(t.verification_passed, 0.0, "encrypted transfer did not verify");
    for (const BranchRecord& b : t.branches) {
      c.expect_near(b.probability, 0.5, opt.tolerance,
                    "projector outcome probability is not one half");
      if (b.success)
        c.expect(b.fidelity >= 1.0 - opt.tolerance,
                 std::max(0.0, 1.0 - b.fidelity),
                 "recovered message state is off target");
      c.expect(b.metrics.at("eavesdropper_trace_distance") < 1e-6,
               b.metrics.at("eavesdropper_trace_distance"),
               "eavesdropper average is distinguishable from I/2");
    }
  }
  out.push_back(c.r);
}

void check_bell(std::vector<CheckResult>& out, const VerifyOptions& opt) {
  Checker c("protocols", "bell-sharing");
  const ProtocolTranscript t = run_bell_sharing();
  const double want[3] = {0.25, 0.25, 0.5};
  for (const BranchRecord& b : t.branches) {
    c.expect_near(b.probability, want[b.outcome_path.front()], opt.tolerance,
                  "Bell-sharing outcome probability mismatch");
    c.expect(b.fidelity >= 1.0 - opt.tolerance, std::max(0.0, 1.0 - b.fidelity),
             "conditional receiver state is not the expected Bell state");
    c.expect_near(b.metrics.at("receiver_entropy_bits"), 1.0, opt.tolerance,
                  "conditional receiver state is not maximally entangled");
  }
  c.expect(t.verification_passed, 0.0, "Bell sharing did not verify");
  out.push_back(c.r);
}

void check_entropy_sweep_protocol(std::vector<CheckResult>& out,
                                  const VerifyOptions& opt) {
  Checker c("protocols", "entropy-sweep");
  const std::vector<EntropySweepRow> rows = entropy_sweep(0.0, 1.0, 101);
  c.expect(rows.size() == 101, 0.0, "unexpected row count");
  double peak = -1.0;
  double peak_p = -1.0;
  for (const EntropySweepRow& row : rows) {
    c.expect(row.abs_diff <= opt.tolerance, row.abs_diff,
             "closed form and numerical entropy disagree at p=" +
                 std::to_string(row.p));
    c.expect(row.closed_form <= 1.5 + opt.tolerance,
             std::max(0.0, row.closed_form - 1.5),
             "entropy exceeds 1.5 bits");
    if (row.closed_form > peak) {
      peak = row.closed_form;
      peak_p = row.p;
    }
  }
  c.expect_near(rows.front().closed_form, 0.0, opt.tolerance,
                "entropy at p=0 is not 0");
  c.expect_near(rows.back().closed_form, 0.0, opt.tolerance,
                "entropy at p=1 is not 0");
  c.expect_near(peak, 1.5, opt.tolerance, "maximum entropy is not 1.5");
  c.expect_near(peak_p, 0.5, 1e-9, "maximum is not attained at p=0.5");
  out.push_back(c.r);
}

void check_qutrit_run_flag(std::vector<CheckResult>& out,
                           const VerifyOptions& opt) {
  Checker c("protocols", "qutrit-run-reporting");
  const double u = 1.0 / std::sqrt(3.0);
  const ProtocolTranscript t = run_qutrit_broadcast(0.7, 1.9, u, u, u);
  int good = 0, bad = 0;
  for (const BranchRecord& b : t.branches) {
    c.expect_near(b.probability, 1.0 / 6.0, opt.tolerance,
                  "six-level outcome probability is not 1/6");
    if (b.success)
      ++good;
    else
      ++bad;
  }
  c.expect(good == 3 && bad == 3, std::abs(good - 3.0),
           "expected exactly three product-restorable outcomes");
  c.expect(!t.verification_passed, 0.0,
           "the run should report the unrestorable outcomes honestly");
  out.push_back(c.r);
}

// ---------------------------------------------------------------------------
// cli suite (in-process serialization checks)
// ---------------------------------------------------------------------------

void check_cli_determinism(std::vector<CheckResult>& out,
                           const VerifyOptions& opt) {
  Checker c("cli", "byte-determinism");
  RunOptions sample;
  sample.mode = MeasureMode::sample_one;
  sample.seed = opt.seed;
  const std::string a = to_canonical_string(run_basic_broadcast(0.6, 0.8, 1.0, sample));
  const std::string b = to_canonical_string(run_basic_broadcast(0.6, 0.8, 1.0, sample));
  c.expect(a == b, 0.0, "identical sampled runs serialize differently");
  const std::string e1 = to_canonical_string(run_diff_states(0.3, 0.9));
  const std::string e2 = to_canonical_string(run_diff_states(0.3, 0.9));
  c.expect(e1 == e2, 0.0, "identical enumerated runs serialize differently");
  const std::string v1 =
      to_canonical_string(run_voting({0, 1}, 0.4, 2, opt.seed));
  const std::string v2 =
      to_canonical_string(run_voting({0, 1}, 0.4, 2, opt.seed));
  c.expect(v1 == v2, 0.0, "identical voting runs serialize differently");
  out.push_back(c.r);
}

void check_cli_round_trip(std::vector<CheckResult>& out,
                          const VerifyOptions& opt) {
  Checker c("cli", "json-round-trip");
  std::vector<ProtocolTranscript> all;
  all.push_back(run_basic_broadcast(0.6, 0.8, 1.0));
  all.push_back(run_qutrit_broadcast(0.4, 1.2, 0.5, 0.5, 1.0 / std::sqrt(2.0)));
  all.push_back(run_encrypted_transfer(0.7, 2.1, 16));
  all.push_back(run_voting({1, 0, 1}, 0.5, 1, opt.seed));
  all.push_back(run_controlled_entanglement(0.0, kPi / 2.0));
  for (const ProtocolTranscript& t : all) {
    const nlohmann::json j = to_json(t);
    const nlohmann::json reparsed = nlohmann::json::parse(j.dump());
    const ProtocolTranscript back = transcript_from_json(reparsed);
    c.expect(back == t, 0.0,
             t.protocol + ": JSON round-trip changed the transcript");
    const std::string csv = to_csv(t);
    std::size_t lines = 0;
    for (char ch : csv)
      if (ch == '\n') ++lines;
    c.expect(lines == t.branches.size() + 1, 0.0,
             t.protocol + ": CSV row count mismatch");
  }
  out.push_back(c.r);
}

}  // namespace

std::vector<CheckResult> run_verification(const std::string& suite,
                                          const VerifyOptions& opt) {
  std::vector<CheckResult> out;
  bool known = false;
  if (suite == "hilbert" || suite == "all") {
    known = true;
    check_unitarity(out, opt);
    check_measurement_completeness(out, opt);
    check_partial_trace(out, opt);
    check_entropy_oracle(out, opt);
    check_index_round_trip(out, opt);
  }
  if (suite == "gates" || suite == "all") {
    known = true;
    check_gate_kinds(out, opt);
    check_correction_qutrit_consistency(out, opt);
    check_printed_corrections(out, opt);
    check_branch_phase_compatibility(out, opt);
    check_fourier_vs_sender_basis(out, opt);
    check_elementary_identities(out, opt);
  }
  if (suite == "circuits" || suite == "all") {
    known = true;
    check_cross_method(out, opt);
    check_entanglement_values(out, opt);
    check_dicke_conditioning(out, opt);
    check_qutrit_stages(out, opt);
    check_singlet(out, opt);
  }
  if (suite == "protocols" || suite == "all") {
    known = true;
    check_deterministic_success(out, opt);
    check_qutrit_outcomes(out, opt);
    check_probabilistic(out, opt);
    check_locality(out, opt);
    check_resource_dominance(out, opt);
    check_sample_statistics(out, opt);
    check_sample_enumerate_consistency(out, opt);
    check_voting(out, opt);
    check_encrypted(out, opt);
    check_bell(out, opt);
    check_entropy_sweep_protocol(out, opt);
    check_qutrit_run_flag(out, opt);
  }
  if (suite == "cli" || suite == "all") {
    known = true;
    check_cli_determinism(out, opt);
    check_cli_round_trip(out, opt);
  }
  if (!known)
    throw std::invalid_argument("unknown verification suite '" + suite + "'");
  return out;
}

}  // namespace rsp
