#include "rsp/layout.hpp"

#include <stdexcept>
#include <string>

#include "rsp/types.hpp"

namespace rsp {

long SubsystemLayout::total_dim() const {
  long d = 1;
  for (int di : dims) d *= di;
  return d;
}

std::vector<long> SubsystemLayout::strides() const {
  std::vector<long> s(dims.size(), 1);
  for (int i = static_cast<int>(dims.size()) - 2; i >= 0; --i)
    s[i] = s[i + 1] * dims[i + 1];
  return s;
}

long SubsystemLayout::flatten(const std::vector<int>& indices) const {
  if (indices.size() != dims.size())
    throw std::invalid_argument("flatten: expected " + std::to_string(dims.size()) +
                                " indices, got " + std::to_string(indices.size()));
  long f = 0;
  for (size_t i = 0; i < dims.size(); ++i) {
    if (indices[i] < 0 || indices[i] >= dims[i])
      throw std::invalid_argument("flatten: index " + std::to_string(indices[i]) +
                                  " out of range for subsystem " + std::to_string(i) +
                                  " of dimension " + std::to_string(dims[i]));
    f = f * dims[i] + indices[i];
  }
  return f;
}

std::vector<int> SubsystemLayout::unflatten(long flat) const {
  if (flat < 0 || flat >= total_dim())
    throw std::invalid_argument("unflatten: flat index " + std::to_string(flat) +
                                " out of range for total dimension " +
                                std::to_string(total_dim()));
  std::vector<int> idx(dims.size());
  for (int i = static_cast<int>(dims.size()) - 1; i >= 0; --i) {
    idx[i] = static_cast<int>(flat % dims[i]);
    flat /= dims[i];
  }
  return idx;
}

int SubsystemLayout::digit(long flat, int i) const {
  return static_cast<int>((flat / strides()[i]) % dims[i]);
}

SubsystemLayout SubsystemLayout::without(int subsystem) const {
  if (subsystem < 0 || subsystem >= count())
    throw std::invalid_argument("without: no subsystem " + std::to_string(subsystem));
  SubsystemLayout out;
  for (int i = 0; i < count(); ++i) {
    if (i == subsystem) continue;
    out.dims.push_back(dims[i]);
    if (!labels.empty()) out.labels.push_back(labels[i]);
  }
  return out;
}

SubsystemLayout make_layout(std::vector<int> dims, std::vector<std::string> labels) {
  if (dims.empty()) throw std::invalid_argument("make_layout: no subsystems");
  long total = 1;
  for (size_t i = 0; i < dims.size(); ++i) {
    if (dims[i] < 2)
      throw std::invalid_argument("make_layout: subsystem " + std::to_string(i) +
                                  " has dimension " + std::to_string(dims[i]) +
                                  ", minimum is 2");
    total *= dims[i];
    if (total > kMaxTotalDim)
      throw std::invalid_argument("make_layout: total dimension exceeds cap of " +
                                  std::to_string(kMaxTotalDim));
  }
  if (!labels.empty() && labels.size() != dims.size())
    throw std::invalid_argument("make_layout: " + std::to_string(labels.size()) +
                                " labels for " + std::to_string(dims.size()) +
                                " subsystems");
  return SubsystemLayout{std::move(dims), std::move(labels)};
}

}  // namespace rsp
