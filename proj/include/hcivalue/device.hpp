#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hcivalue {

/// One independently sampled state variable of an input device (a key, a button, an axis, a sensor).
struct DeviceVariable {
  std::string name;
  std::uint64_t cardinality = 1;  ///< distinguishable states
};

/// An input device as a set of state variables sampled `sampling_rate_hz` times per second.
///
/// Every state of the device alphabet is taken to be equally likely, so the
/// device alphabet is the Cartesian product of its variables and its entropy
/// is the sum of log2(cardinality) over the variables.
class InputDeviceSpec {
 public:
  /// Throws ValidationError for an empty variable list, duplicate or empty
  /// names, zero cardinalities, or a non-positive sampling rate.
  InputDeviceSpec(std::string name, std::vector<DeviceVariable> variables, double sampling_rate_hz);

  const std::string& name() const noexcept { return name_; }
  const std::vector<DeviceVariable>& variables() const noexcept { return variables_; }
  double sampling_rate_hz() const noexcept { return sampling_rate_hz_; }

 private:
  std::string name_;
  std::vector<DeviceVariable> variables_;
  double sampling_rate_hz_;
};

/// Instantaneous device capacity in bits: sum of log2(cardinality). Computed in
/// log space, so the product of cardinalities is never formed.
double instantaneous_capacity(const InputDeviceSpec& device);

/// Bandwidth in bits/s: sampling rate times instantaneous capacity.
double bandwidth(const InputDeviceSpec& device);

}  // namespace hcivalue
