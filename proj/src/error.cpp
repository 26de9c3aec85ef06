#include "itolab/error.hpp"

namespace itolab {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::ShapeMismatch: return "shape-mismatch";
    case ErrorKind::AdaptednessViolation: return "adaptedness-violation";
    case ErrorKind::DegenerateInput: return "degenerate-input";
    case ErrorKind::InsufficientSamples: return "insufficient-samples";
    case ErrorKind::InvalidMarket: return "invalid-market";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace itolab
