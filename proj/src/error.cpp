#include "bundlecurv/error.hpp"

namespace bundlecurv {

std::string_view error_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Parameter: return "parameter";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Divergence: return "divergence";
    case ErrorKind::Tolerance: return "tolerance";
    case ErrorKind::DegenerateWarp: return "degenerate-warp";
    case ErrorKind::DegenerateMetric: return "degenerate-metric";
    case ErrorKind::MalformedProfile: return "malformed-profile";
    case ErrorKind::NoSuchBundle: return "no-such-bundle";
  }
  return "unknown";
}

int exit_status(ErrorKind kind) noexcept {
  return kind == ErrorKind::Parameter ? 2 : 1;
}

}  // namespace bundlecurv
