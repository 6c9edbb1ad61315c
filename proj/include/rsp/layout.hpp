#pragma once

#include <string>
#include <vector>

namespace rsp {

// Ordered list of subsystem dimensions for a mixed-dimension register.
// Subsystem 0 is the most significant digit of the flat index, so flat
// indices enumerate kets in left-to-right order: |i0 i1 ... in>.
struct SubsystemLayout {
  std::vector<int> dims;
  std::vector<std::string> labels;  // empty or one label per subsystem

  int count() const { return static_cast<int>(dims.size()); }
  long total_dim() const;

  // strides()[i] = product of dims[j] for j > i.
  std::vector<long> strides() const;

  long flatten(const std::vector<int>& indices) const;
  std::vector<int> unflatten(long flat) const;

  // Digit of subsystem `i` inside flat index `flat`.
  int digit(long flat, int i) const;

  SubsystemLayout without(int subsystem) const;

  bool same_dims(const SubsystemLayout& other) const { return dims == other.dims; }
  bool operator==(const SubsystemLayout& other) const = default;
};

// Validates dimensions (each >= 2, product within the register cap) and
// labels (either empty or exactly one per subsystem).
SubsystemLayout make_layout(std::vector<int> dims, std::vector<std::string> labels = {});

}  // namespace rsp
