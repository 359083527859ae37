// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace owg {

/// Raised for malformed or inconsistent input data (files, scene specs,
/// score matrices). Distinct from std::invalid_argument, which is reserved
/// for API contract violations, so callers can map the two to different
/// process exit codes.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace owg
