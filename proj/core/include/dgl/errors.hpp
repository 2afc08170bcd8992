#pragma once

#include <stdexcept>

namespace dgl {

/// Raised when a simulated protocol or optimizer cannot make progress or
/// meets a non-finite value. Carries a human-readable diagnostic.
class DiagnosticError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace dgl
