#pragma once

#include <stdexcept>
#include <string>

namespace marginalia {

/// Machine-readable failure categories. The C API maps each one onto a
/// status code, so keep the two lists in step.
enum class ErrorCode {
  InvalidArgument,
  MalformedCue,
  NonMonotonicCue,
  BundleInvalid,
  RejectEraserStroke,
  UnknownCapture,
  ClockRegression,
  UnknownButton,
  UnreleasedSnapshot,
  MalformedEvent,
  TraceMalformed,
  VersionMismatch,
  RoleTaken,
  PortInUse,
  Io,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace marginalia
