#include "hcivalue/device.hpp"

#include <cmath>
#include <unordered_set>

#include "hcivalue/error.hpp"

namespace hcivalue {

InputDeviceSpec::InputDeviceSpec(std::string name, std::vector<DeviceVariable> variables, double sampling_rate_hz)
    : name_(std::move(name)), variables_(std::move(variables)), sampling_rate_hz_(sampling_rate_hz) {
  const std::string who = "device '" + name_ + "'";
  if (variables_.empty()) throw ValidationError(who + " has no state variables");
  if (!std::isfinite(sampling_rate_hz_) || sampling_rate_hz_ <= 0.0) {
    throw ValidationError(who + ": sampling rate must be > 0 Hz");
  }
  std::unordered_set<std::string> seen;
  for (const auto& v : variables_) {
    if (v.name.empty()) throw ValidationError(who + " has a variable with an empty name");
    if (!seen.insert(v.name).second) throw ValidationError(who + ": duplicate variable '" + v.name + "'");
    if (v.cardinality < 1) throw ValidationError(who + ": variable '" + v.name + "' needs cardinality >= 1");
  }
}

double instantaneous_capacity(const InputDeviceSpec& device) {
  double bits = 0.0;
  for (const auto& v : device.variables()) bits += std::log2(static_cast<double>(v.cardinality));
  return bits;
}

double bandwidth(const InputDeviceSpec& device) { return device.sampling_rate_hz() * instantaneous_capacity(device); }

}  // namespace hcivalue
