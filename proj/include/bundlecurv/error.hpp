#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bundlecurv {

enum class ErrorKind {
  Parameter,        // invalid input parameters
  Domain,           // evaluation point outside the valid region
  Divergence,       // ODE solution blew past the overflow guard
  Tolerance,        // conservation residual above the declared tolerance
  DegenerateWarp,   // warp function vanishes or has the wrong sign
  DegenerateMetric, // metric not positive definite / empty window
  MalformedProfile, // empty or inconsistent profile data
  NoSuchBundle,     // no conformally flat circle metric exists
};

/// Stable short code printed by the CLI, e.g. "parameter".
std::string_view error_code(ErrorKind kind) noexcept;

/// CLI exit status for a kind: 2 for parameter errors, 1 otherwise.
int exit_status(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace bundlecurv
