#include "rsp/circuits.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "rsp/gates.hpp"
#include "rsp/operators.hpp"

namespace rsp {

std::string construction_name(Construction c) {
  switch (c) {
    case Construction::direct: return "direct";
    case Construction::circuit: return "circuit";
    case Construction::qudit_circuit: return "qudit_circuit";
    case Construction::two_qubit_circuit: return "two_qubit_circuit";
  }
  throw std::invalid_argument("construction_name: bad enum value");
}

Construction construction_from_name(const std::string& name) {
  if (name == "direct") return Construction::direct;
  if (name == "circuit") return Construction::circuit;
  if (name == "qudit_circuit") return Construction::qudit_circuit;
  if (name == "two_qubit_circuit") return Construction::two_qubit_circuit;
  throw std::invalid_argument("unknown construction '" + name + "'");
}

namespace {

void check_pair(double alpha, double beta) {
  if (alpha < 0 || beta < 0)
    throw std::invalid_argument("coefficients must be non-negative reals");
  const double n2 = alpha * alpha + beta * beta;
  if (std::abs(n2 - 1.0) > kAlgebraTol)
    throw std::invalid_argument("coefficients not normalized: alpha^2+beta^2 = " +
                                std::to_string(n2));
}

void check_triple(double alpha, double beta, double gamma) {
  if (alpha < 0 || beta < 0 || gamma < 0)
    throw std::invalid_argument("coefficients must be non-negative reals");
  const double n2 = alpha * alpha + beta * beta + gamma * gamma;
  if (std::abs(n2 - 1.0) > kAlgebraTol)
    throw std::invalid_argument(
        "coefficients not normalized: alpha^2+beta^2+gamma^2 = " +
        std::to_string(n2));
}

void require_method(Construction how, std::initializer_list<Construction> allowed,
                    const std::string& who) {
  for (Construction c : allowed)
    if (c == how) return;
  throw std::invalid_argument(who + ": construction '" + construction_name(how) +
                              "' is not available");
}

double binomial(int n, int k) {
  double c = 1;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

}  // namespace

ResourceState resource_basic(double alpha, double beta, Construction how) {
  check_pair(alpha, beta);
  require_method(how, {Construction::direct, Construction::circuit},
                 "resource_basic");
  const SubsystemLayout layout = make_layout({3, 2, 2}, {"a", "b", "c"});
  ResourceState r;
  r.sender_subsystems = {0};
  r.receiver_subsystems = {1, 2};
  r.construction = how;
  if (how == Construction::direct) {
    std::vector<cplx> amps(12, cplx{0, 0});
    amps[layout.flatten({0, 0, 0})] = alpha * alpha;
    amps[layout.flatten({1, 1, 1})] = beta * beta;
    amps[layout.flatten({2, 0, 1})] = alpha * beta;
    amps[layout.flatten({2, 1, 0})] = alpha * beta;
    r.state = make_state(layout, std::move(amps));
    r.build_steps = {"transcribe amplitudes alpha^2|0,00> + beta^2|1,11> + "
                     "alpha*beta|2>(|01>+|10>)"};
  } else {
    const StateVector qubit =
        make_state(make_layout({2}), {cplx{alpha, 0}, cplx{beta, 0}});
    StateVector s = tensor(basis_state(make_layout({3}, {"a"}), {0}),
                           tensor(qubit, qubit));
    s.layout = layout;
    const LocalOperator cv = controlled_v();
    s = apply_local(s, cv, {1, 0});
    s = apply_local(s, cv, {2, 0});
    r.state = std::move(s);
    r.build_steps = {"start |0>_a (alpha|0>+beta|1>)_b (alpha|0>+beta|1>)_c",
                     "controlled-V with control b, target a",
                     "controlled-V with control c, target a"};
  }
  return r;
}

ResourceState resource_diff_bases(Construction how) {
  require_method(how, {Construction::direct, Construction::circuit},
                 "resource_diff_bases");
  const double s = std::sqrt(0.5);
  ResourceState r;
  r.sender_subsystems = {0};
  r.receiver_subsystems = {1, 2};
  r.construction = how;
  if (how == Construction::direct) {
    const SubsystemLayout layout = make_layout({3, 2, 2}, {"a", "b", "c"});
    const double q = 0.5 * s;  // 1/(2*sqrt2)
    std::vector<cplx> amps(12, cplx{0, 0});
    // (1/2)[|0,0,+x> + |1,1,-x> + |2,0,-x> + |2,1,+x>] expanded over |0>,|1>.
    amps[layout.flatten({0, 0, 0})] = q;
    amps[layout.flatten({0, 0, 1})] = q;
    amps[layout.flatten({1, 1, 0})] = q;
    amps[layout.flatten({1, 1, 1})] = -q;
    amps[layout.flatten({2, 0, 0})] = q;
    amps[layout.flatten({2, 0, 1})] = -q;
    amps[layout.flatten({2, 1, 0})] = q;
    amps[layout.flatten({2, 1, 1})] = q;
    r.state = make_state(layout, std::move(amps));
    r.build_steps = {"transcribe amplitudes (1/2)[|0,0,+x> + |1,1,-x> + "
                     "|2>(|0,-x> + |1,+x>)]"};
  } else {
    ResourceState base = resource_basic(s, s, Construction::circuit);
    r.state = apply_local(base.state, hadamard(), {2});
    r.build_steps = base.build_steps;
    r.build_steps.push_back("Hadamard on c");
  }
  return r;
}

ResourceState resource_n_party(double alpha, double beta, int n, Construction how) {
  if (n < 1 || n > 8)
    throw std::invalid_argument("resource_n_party: n must be in 1..8, got " +
                                std::to_string(n));
  check_pair(alpha, beta);
  require_method(how, {Construction::direct, Construction::circuit},
                 "resource_n_party");
  std::vector<int> dims{n + 1};
  std::vector<std::string> labels{"a"};
  for (int i = 1; i <= n; ++i) {
    dims.push_back(2);
    labels.push_back("r" + std::to_string(i));
  }
  const SubsystemLayout layout = make_layout(dims, labels);
  ResourceState r;
  r.sender_subsystems = {0};
  for (int i = 1; i <= n; ++i) r.receiver_subsystems.push_back(i);
  r.construction = how;
  if (how == Construction::direct) {
    // Level k pairs with the Dicke state having k zeros; spreading the
    // binomial amplitude over bitstrings leaves alpha^zeros * beta^ones each.
    std::vector<cplx> amps(layout.total_dim(), cplx{0, 0});
    const long n_strings = 1L << n;
    for (long bits = 0; bits < n_strings; ++bits) {
      std::vector<int> idx(n + 1);
      int zeros = 0;
      for (int i = 0; i < n; ++i) {
        const int bit = static_cast<int>((bits >> (n - 1 - i)) & 1);
        idx[i + 1] = bit;
        zeros += 1 - bit;
      }
      idx[0] = zeros;
      amps[layout.flatten(idx)] =
          std::pow(alpha, zeros) * std::pow(beta, n - zeros);
    }
    r.state = make_state(layout, std::move(amps));
    r.build_steps = {"transcribe amplitudes sum_k alpha^k beta^(n-k) "
                     "sqrt(C(n,k)) |k>_a |k zeros>"};
  } else {
    const StateVector qubit =
        make_state(make_layout({2}), {cplx{alpha, 0}, cplx{beta, 0}});
    StateVector s = basis_state(make_layout({n + 1}), {0});
    for (int i = 0; i < n; ++i) s = tensor(s, qubit);
    s.layout = layout;
    const LocalOperator shift = qubit_controlled_shift(n + 1, +1);
    r.build_steps = {"start |0>_a with each receiver qubit in alpha|0>+beta|1>"};
    for (int i = 1; i <= n; ++i) {
      s = apply_local(s, shift, {i, 0});
      r.build_steps.push_back("controlled-shift(+1) with control r" +
                              std::to_string(i) + ", target a");
    }
    // The shifts leave the qudit counting ones; flip it to count zeros.
    std::vector<int> image(n + 1);
    for (int j = 0; j <= n; ++j) image[j] = n - j;
    s = apply_local(s, permutation_op(n + 1, image, "relabel(j->n-j)"), {0});
    r.build_steps.push_back("relabel a: |j> -> |" + std::to_string(n) + "-j>");
    r.state = std::move(s);
  }
  return r;
}

StateVector dicke_state(int n, int zeros) {
  if (n < 1 || zeros < 0 || zeros > n)
    throw std::invalid_argument("dicke_state: need 0 <= zeros <= n and n >= 1");
  const SubsystemLayout layout = make_layout(std::vector<int>(n, 2));
  std::vector<cplx> amps(layout.total_dim(), cplx{0, 0});
  const double a = 1.0 / std::sqrt(binomial(n, zeros));
  for (long bits = 0; bits < (1L << n); ++bits) {
    int z = 0;
    for (int i = 0; i < n; ++i) z += static_cast<int>(~(bits >> i) & 1);
    if (z == zeros) amps[bits] = a;
  }
  return make_state(layout, std::move(amps));
}

ResourceState resource_diff_states(Construction how) {
  require_method(how,
                 {Construction::direct, Construction::qudit_circuit,
                  Construction::two_qubit_circuit},
                 "resource_diff_states");
  const SubsystemLayout layout = make_layout({4, 2, 2}, {"a", "b", "c"});
  ResourceState r;
  r.sender_subsystems = {0};
  r.receiver_subsystems = {1, 2};
  r.construction = how;
  if (how == Construction::direct) {
    std::vector<cplx> amps(16, cplx{0, 0});
    for (int k = 0; k < 4; ++k)
      amps[layout.flatten({k, (k >> 1) & 1, k & 1})] = 0.5;
    r.state = make_state(layout, std::move(amps));
    r.build_steps = {"transcribe amplitudes (1/2) sum_k |k>_a |k as bits>_bc"};
  } else if (how == Construction::qudit_circuit) {
    const double s = std::sqrt(0.5);
    const StateVector plus = make_state(make_layout({2}), {cplx{s, 0}, cplx{s, 0}});
    StateVector st =
        tensor(basis_state(make_layout({4}), {0}), tensor(plus, plus));
    st.layout = layout;
    const LocalOperator shift = qubit_controlled_shift(4, +1);
    st = apply_local(st, shift, {1, 0});
    st = apply_local(st, shift, {1, 0});
    st = apply_local(st, shift, {2, 0});
    r.state = std::move(st);
    r.build_steps = {"start |0>_a |+x>_b |+x>_c",
                     "controlled-shift(+1 mod 4) with control b, target a, twice",
                     "controlled-shift(+1 mod 4) with control c, target a"};
  } else {
    const double s = std::sqrt(0.5);
    const StateVector plus = make_state(make_layout({2}), {cplx{s, 0}, cplx{s, 0}});
    StateVector st = tensor(
        basis_state(make_layout({2, 2}, {"a1", "a2"}), {0, 0}), tensor(plus, plus));
    st.layout = make_layout({2, 2, 2, 2}, {"a1", "a2", "b", "c"});
    const LocalOperator cx = cnot();
    st = apply_local(st, cx, {2, 0});
    st = apply_local(st, cx, {3, 1});
    st = merge_subsystems(st, 0, 2, "a");
    r.state = std::move(st);
    r.build_steps = {"start |0>_a1 |0>_a2 |+x>_b |+x>_c",
                     "CNOT with control b, target a1",
                     "CNOT with control c, target a2",
                     "regroup (a1,a2) as the four-level a"};
  }
  return r;
}

ResourceState resource_qutrit(double alpha, double beta, double gamma,
                              Construction how) {
  check_triple(alpha, beta, gamma);
  require_method(how, {Construction::direct, Construction::circuit},
                 "resource_qutrit");
  const SubsystemLayout layout = make_layout({6, 3, 3}, {"a", "b", "c"});
  ResourceState r;
  r.sender_subsystems = {0};
  r.receiver_subsystems = {1, 2};
  r.construction = how;
  if (how == Construction::direct) {
    std::vector<cplx> amps(54, cplx{0, 0});
    amps[layout.flatten({0, 0, 0})] = alpha * alpha;
    amps[layout.flatten({1, 0, 1})] = alpha * beta;
    amps[layout.flatten({1, 1, 0})] = alpha * beta;
    amps[layout.flatten({2, 1, 1})] = beta * beta;
    amps[layout.flatten({3, 0, 2})] = alpha * gamma;
    amps[layout.flatten({3, 2, 0})] = alpha * gamma;
    amps[layout.flatten({4, 2, 2})] = gamma * gamma;
    amps[layout.flatten({5, 1, 2})] = beta * gamma;
    amps[layout.flatten({5, 2, 1})] = beta * gamma;
    r.state = make_state(layout, std::move(amps));
    r.build_steps = {"transcribe amplitudes alpha^2|0,00> + alpha*beta|1>(|01>+|10>)"
                     " + beta^2|2,11> + alpha*gamma|3>(|02>+|20>) + gamma^2|4,22>"
                     " + beta*gamma|5>(|12>+|21>)"};
  } else {
    const StateVector qutrit = make_state(
        make_layout({3}), {cplx{alpha, 0}, cplx{beta, 0}, cplx{gamma, 0}});
    StateVector s = tensor(basis_state(make_layout({6}), {0}),
                           tensor(qutrit, qutrit));
    s.layout = layout;
    const LocalOperator shift = value_controlled_shift(3, 6);
    s = apply_local(s, shift, {1, 0});
    s = apply_local(s, shift, {2, 0});
    // Move the (02,20) terms from level 2 to 3 and the (12,21) terms from 3 to 5.
    std::vector<int> amounts(9, 0);
    amounts[0 * 3 + 2] = 1;
    amounts[2 * 3 + 0] = 1;
    amounts[1 * 3 + 2] = 2;
    amounts[2 * 3 + 1] = 2;
    s = apply_local(
        s, conditional_shift({3, 3}, 6, amounts, "pair-conditional-shift"),
        {1, 2, 0});
    r.state = std::move(s);
    r.build_steps = {
        "start |0>_a with each receiver qutrit in alpha|0>+beta|1>+gamma|2>",
        "value-controlled-shift with control b, target a",
        "value-controlled-shift with control c, target a",
        "conditional shift on a: +1 for bc in {02,20}, +2 for bc in {12,21}"};
  }
  return r;
}

StateVector singlet() {
  const double s = std::sqrt(0.5);
  const SubsystemLayout layout = make_layout({2, 2}, {"a", "b"});
  std::vector<cplx> amps(4, cplx{0, 0});
  amps[layout.flatten({0, 1})] = s;
  amps[layout.flatten({1, 0})] = -s;
  return make_state(layout, std::move(amps));
}

double sender_entropy(const ResourceState& r) {
  return von_neumann_entropy(partial_trace(r.state, r.sender_subsystems));
}

}  // namespace rsp
