#include "rsp/measure.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "rsp/operators.hpp"

namespace rsp {

double uniform_unit(std::mt19937_64& rng) {
  // 53-bit mantissa draw; identical across standard libraries, unlike
  // std::uniform_real_distribution.
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

MeasurementBasis make_basis(int target, std::vector<std::vector<cplx>> vectors,
                            std::string name) {
  if (vectors.empty()) throw std::invalid_argument("make_basis: no vectors");
  const size_t d = vectors.size();
  for (const auto& v : vectors)
    if (v.size() != d)
      throw std::invalid_argument("make_basis: '" + name + "' needs " +
                                  std::to_string(d) + " vectors of length " +
                                  std::to_string(d));
  for (size_t i = 0; i < d; ++i) {
    for (size_t j = 0; j < d; ++j) {
      cplx g{0, 0};
      for (size_t k = 0; k < d; ++k) g += std::conj(vectors[i][k]) * vectors[j][k];
      const cplx want = (i == j) ? cplx{1, 0} : cplx{0, 0};
      if (std::abs(g - want) > kAlgebraTol)
        throw std::invalid_argument("make_basis: '" + name +
                                    "' is not orthonormal (Gram element " +
                                    std::to_string(i) + "," + std::to_string(j) +
                                    " off by " + std::to_string(std::abs(g - want)) +
                                    ")");
    }
  }
  return MeasurementBasis{target, std::move(vectors), std::move(name)};
}

StateVector project_subsystem(const StateVector& s, int target,
                              const std::vector<cplx>& vec) {
  const int n = s.layout.count();
  if (target < 0 || target >= n)
    throw std::invalid_argument("project_subsystem: no subsystem " +
                                std::to_string(target));
  const int d = s.layout.dims[target];
  if (static_cast<int>(vec.size()) != d)
    throw std::invalid_argument("project_subsystem: vector length " +
                                std::to_string(vec.size()) + " for dimension " +
                                std::to_string(d));
  const std::vector<long> strides = s.layout.strides();
  const long stride = strides[target];
  const SubsystemLayout rest_layout = s.layout.without(target);
  const long d_rest = rest_layout.total_dim();

  std::vector<cplx> out(d_rest, cplx{0, 0});
  // Flat index of the full register = base + j*stride, where base enumerates
  // the other subsystems in order.  Contract against conj(vec[j]).
  std::vector<int> rest_subsystems;
  for (int i = 0; i < n; ++i)
    if (i != target) rest_subsystems.push_back(i);
  for (long t = 0; t < d_rest; ++t) {
    long base = 0;
    long rest = t;
    for (int i = static_cast<int>(rest_subsystems.size()) - 1; i >= 0; --i) {
      const int di = s.layout.dims[rest_subsystems[i]];
      base += (rest % di) * strides[rest_subsystems[i]];
      rest /= di;
    }
    cplx acc{0, 0};
    for (int j = 0; j < d; ++j) acc += std::conj(vec[j]) * s.amplitudes[base + j * stride];
    out[t] = acc;
  }
  return StateVector{rest_layout, std::move(out)};
}

namespace {

StateVector collapsed_state(const StateVector& s, int target,
                            const std::vector<cplx>& vec,
                            const StateVector& remainder, double probability) {
  // Re-insert the collapsed subsystem so every branch keeps the full register.
  std::vector<cplx> out(s.amplitudes.size(), cplx{0, 0});
  const std::vector<long> strides = s.layout.strides();
  const long stride = strides[target];
  const int n = s.layout.count();
  const int d = s.layout.dims[target];
  std::vector<int> rest_subsystems;
  for (int i = 0; i < n; ++i)
    if (i != target) rest_subsystems.push_back(i);

  const double scale = probability > 0 ? 1.0 / std::sqrt(probability) : 0.0;
  const long d_rest = remainder.layout.total_dim();
  for (long t = 0; t < d_rest; ++t) {
    long base = 0;
    long rest = t;
    for (int i = static_cast<int>(rest_subsystems.size()) - 1; i >= 0; --i) {
      const int di = s.layout.dims[rest_subsystems[i]];
      base += (rest % di) * strides[rest_subsystems[i]];
      rest /= di;
    }
    const cplx amp = remainder.amplitudes[t] * scale;
    for (int j = 0; j < d; ++j) out[base + j * stride] = vec[j] * amp;
  }
  return StateVector{s.layout, std::move(out)};
}

}  // namespace

MeasurementResult measure(const StateVector& s, const MeasurementBasis& basis,
                          MeasureMode mode, std::uint64_t seed) {
  const int target = basis.target;
  if (target < 0 || target >= s.layout.count())
    throw std::invalid_argument("measure: no subsystem " + std::to_string(target));
  if (basis.dim() != s.layout.dims[target])
    throw std::invalid_argument("measure: basis '" + basis.name + "' has dimension " +
                                std::to_string(basis.dim()) + ", subsystem " +
                                std::to_string(target) + " has dimension " +
                                std::to_string(s.layout.dims[target]));

  std::vector<MeasurementBranch> branches;
  branches.reserve(basis.vectors.size());
  for (size_t m = 0; m < basis.vectors.size(); ++m) {
    const StateVector remainder = project_subsystem(s, target, basis.vectors[m]);
    double p = 0;
    for (const cplx& a : remainder.amplitudes) p += std::norm(a);
    branches.push_back(MeasurementBranch{
        static_cast<int>(m), p,
        collapsed_state(s, target, basis.vectors[m], remainder, p)});
  }

  MeasurementResult result{mode, seed, {}};
  if (mode == MeasureMode::enumerate_all) {
    result.branches = std::move(branches);
    return result;
  }

  std::mt19937_64 rng(seed);
  const double u = uniform_unit(rng);
  double cum = 0;
  size_t pick = branches.size() - 1;
  for (size_t m = 0; m < branches.size(); ++m) {
    cum += branches[m].probability;
    if (u < cum) {
      pick = m;
      break;
    }
  }
  result.branches.push_back(std::move(branches[pick]));
  return result;
}

std::vector<MeasurementBranch> measure_with_projectors(
    const StateVector& s, const std::vector<LocalOperator>& projectors,
    const std::vector<int>& targets) {
  if (projectors.empty())
    throw std::invalid_argument("measure_with_projectors: no projectors");
  const long d = projectors.front().dim();
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(d, d);
  for (const LocalOperator& p : projectors) {
    if (p.kind != OperatorKind::projector)
      throw std::invalid_argument("measure_with_projectors: '" + p.name +
                                  "' is not a projector");
    if (p.dim() != d)
      throw std::invalid_argument("measure_with_projectors: mixed dimensions");
    sum += p.matrix;
  }
  if (!matrices_equal(sum, Eigen::MatrixXcd::Identity(d, d), kAlgebraTol))
    throw std::invalid_argument("measure_with_projectors: projectors do not sum to identity");
  for (size_t i = 0; i < projectors.size(); ++i)
    for (size_t j = i + 1; j < projectors.size(); ++j)
      if (!matrices_equal(projectors[i].matrix * projectors[j].matrix,
                          Eigen::MatrixXcd::Zero(d, d), kAlgebraTol))
        throw std::invalid_argument("measure_with_projectors: '" + projectors[i].name +
                                    "' and '" + projectors[j].name +
                                    "' are not orthogonal");

  std::vector<MeasurementBranch> branches;
  for (size_t m = 0; m < projectors.size(); ++m) {
    StateVector branch = apply_local(s, projectors[m], targets);
    double p = 0;
    for (const cplx& a : branch.amplitudes) p += std::norm(a);
    if (p <= kAlgebraTol * kAlgebraTol) continue;
    const double scale = 1.0 / std::sqrt(p);
    for (cplx& a : branch.amplitudes) a *= scale;
    branches.push_back(MeasurementBranch{static_cast<int>(m), p, std::move(branch)});
  }
  return branches;
}

}  // namespace rsp
