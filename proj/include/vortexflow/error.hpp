#pragma once

#include <stdexcept>
#include <string>

namespace vortexflow {

// Raised for contract violations. `field` names the offending input when
// there is one (config key, argument name); it is empty otherwise.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& message, std::string field = {})
      : std::runtime_error(message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace vortexflow
