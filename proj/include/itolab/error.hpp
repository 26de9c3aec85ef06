#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace itolab {

enum class ErrorKind {
  InvalidArgument,
  ShapeMismatch,
  AdaptednessViolation,
  DegenerateInput,
  InsufficientSamples,
  InvalidMarket,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

inline void require(bool condition, ErrorKind kind, const char* message) {
  if (!condition) fail(kind, message);
}

}  // namespace itolab
