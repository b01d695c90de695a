#pragma once

#include <stdexcept>
#include <string>

namespace qoscap {

/// Thrown when a bracketing or root-finding step fails; carries a
/// description of the scanned interval so callers can diagnose.
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qoscap
