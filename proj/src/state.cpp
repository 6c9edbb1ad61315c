#include "rsp/state.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace rsp {

double StateVector::norm() const {
  double n2 = 0;
  for (const cplx& a : amplitudes) n2 += std::norm(a);
  return std::sqrt(n2);
}

StateVector make_state(SubsystemLayout layout, std::vector<cplx> amplitudes) {
  const long want = layout.total_dim();
  if (static_cast<long>(amplitudes.size()) != want)
    throw std::invalid_argument("make_state: expected " + std::to_string(want) +
                                " amplitudes, got " + std::to_string(amplitudes.size()));
  double n2 = 0;
  for (const cplx& a : amplitudes) n2 += std::norm(a);
  const double n = std::sqrt(n2);
  if (std::abs(n - 1.0) > kNormTol)
    throw std::invalid_argument("make_state: state norm is " + std::to_string(n) +
                                ", further than " + std::to_string(kNormTol) +
                                " from 1");
  for (cplx& a : amplitudes) a /= n;
  return StateVector{std::move(layout), std::move(amplitudes)};
}

StateVector basis_state(SubsystemLayout layout, const std::vector<int>& indices) {
  std::vector<cplx> amps(layout.total_dim(), cplx{0, 0});
  amps[layout.flatten(indices)] = cplx{1, 0};
  return StateVector{std::move(layout), std::move(amps)};
}

StateVector tensor(const StateVector& a, const StateVector& b) {
  SubsystemLayout layout;
  layout.dims = a.layout.dims;
  layout.dims.insert(layout.dims.end(), b.layout.dims.begin(), b.layout.dims.end());
  const bool have_labels = !a.layout.labels.empty() && !b.layout.labels.empty();
  if (have_labels) {
    layout.labels = a.layout.labels;
    layout.labels.insert(layout.labels.end(), b.layout.labels.begin(),
                         b.layout.labels.end());
  }
  std::vector<cplx> amps;
  amps.reserve(a.amplitudes.size() * b.amplitudes.size());
  for (const cplx& x : a.amplitudes)
    for (const cplx& y : b.amplitudes) amps.push_back(x * y);
  return StateVector{std::move(layout), std::move(amps)};
}

cplx inner_product(const StateVector& a, const StateVector& b) {
  if (a.layout.dims != b.layout.dims)
    throw std::invalid_argument("inner_product: layouts differ");
  cplx s{0, 0};
  for (size_t i = 0; i < a.amplitudes.size(); ++i)
    s += std::conj(a.amplitudes[i]) * b.amplitudes[i];
  return s;
}

double fidelity_up_to_global_phase(const StateVector& a, const StateVector& b) {
  return std::norm(inner_product(a, b));
}

StateVector merge_subsystems(const StateVector& s, int first, int count,
                             const std::string& label) {
  const int n = s.layout.count();
  if (first < 0 || count < 2 || first + count > n)
    throw std::invalid_argument("merge_subsystems: invalid range");
  SubsystemLayout layout;
  long merged = 1;
  for (int i = first; i < first + count; ++i) merged *= s.layout.dims[i];
  if (merged > kMaxTotalDim)
    throw std::invalid_argument("merge_subsystems: merged dimension too large");
  for (int i = 0; i < n; ++i) {
    if (i == first) {
      layout.dims.push_back(static_cast<int>(merged));
      if (!s.layout.labels.empty()) layout.labels.push_back(label);
    } else if (i > first && i < first + count) {
      continue;
    } else {
      layout.dims.push_back(s.layout.dims[i]);
      if (!s.layout.labels.empty()) layout.labels.push_back(s.layout.labels[i]);
    }
  }
  // Adjacent subsystems are contiguous in the flat index, so the amplitude
  // array is unchanged; only the bookkeeping moves.
  return StateVector{std::move(layout), s.amplitudes};
}

DensityMatrix partial_trace(const StateVector& s, const std::vector<int>& keep) {
  const int n = s.layout.count();
  for (size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] < 0 || keep[i] >= n)
      throw std::invalid_argument("partial_trace: no subsystem " +
                                  std::to_string(keep[i]));
    if (i > 0 && keep[i] <= keep[i - 1])
      throw std::invalid_argument("partial_trace: keep list must be strictly increasing");
  }
  if (keep.empty()) throw std::invalid_argument("partial_trace: empty keep list");

  std::vector<int> traced;
  for (int i = 0; i < n; ++i)
    if (std::find(keep.begin(), keep.end(), i) == keep.end()) traced.push_back(i);

  const std::vector<long> strides = s.layout.strides();
  SubsystemLayout kept_layout;
  for (int i : keep) {
    kept_layout.dims.push_back(s.layout.dims[i]);
    if (!s.layout.labels.empty()) kept_layout.labels.push_back(s.layout.labels[i]);
  }
  const long dk = kept_layout.total_dim();
  long dt = 1;
  for (int i : traced) dt *= s.layout.dims[i];

  // Offset tables: flat index = kept_offset[r] + traced_offset[t].
  std::vector<long> kept_offset(dk, 0);
  for (long r = 0; r < dk; ++r) {
    long rest = r;
    for (int i = static_cast<int>(keep.size()) - 1; i >= 0; --i) {
      const int d = s.layout.dims[keep[i]];
      kept_offset[r] += (rest % d) * strides[keep[i]];
      rest /= d;
    }
  }
  std::vector<long> traced_offset(dt, 0);
  for (long t = 0; t < dt; ++t) {
    long rest = t;
    for (int i = static_cast<int>(traced.size()) - 1; i >= 0; --i) {
      const int d = s.layout.dims[traced[i]];
      traced_offset[t] += (rest % d) * strides[traced[i]];
      rest /= d;
    }
  }

  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dk, dk);
  for (long t = 0; t < dt; ++t) {
    for (long r = 0; r < dk; ++r) {
      const cplx ar = s.amplitudes[kept_offset[r] + traced_offset[t]];
      if (ar == cplx{0, 0}) continue;
      for (long c = 0; c < dk; ++c)
        rho(r, c) += ar * std::conj(s.amplitudes[kept_offset[c] + traced_offset[t]]);
    }
  }
  return DensityMatrix{std::move(kept_layout), std::move(rho)};
}

std::vector<double> eigenvalues(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho.entries);
  if (solver.info() != Eigen::Success)
    throw std::invalid_argument("eigenvalues: eigensolver failed");
  const Eigen::VectorXd ev = solver.eigenvalues();
  return std::vector<double>(ev.data(), ev.data() + ev.size());
}

double von_neumann_entropy(const DensityMatrix& rho) {
  double h = 0;
  for (double p : eigenvalues(rho)) {
    if (p < kEigenvalueFloor) continue;
    h -= p * std::log2(p);
  }
  return h;
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.entries.rows() != b.entries.rows())
    throw std::invalid_argument("trace_distance: dimension mismatch");
  const DensityMatrix diff{a.layout, a.entries - b.entries};
  double t = 0;
  for (double p : eigenvalues(diff)) t += std::abs(p);
  return t / 2;
}

double overlap_with(const DensityMatrix& rho, const StateVector& target) {
  const long d = rho.entries.rows();
  if (!target.layout.same_dims(rho.layout) ||
      static_cast<long>(target.amplitudes.size()) != d)
    throw std::invalid_argument("overlap_with: target register does not match rho");
  const Eigen::Map<const Eigen::VectorXcd> v(target.amplitudes.data(), d);
  return std::real(v.dot(rho.entries * v)) / v.squaredNorm();
}

}  // namespace rsp
