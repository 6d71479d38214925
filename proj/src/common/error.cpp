#include "common/error.hpp"

namespace marginalia {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::MalformedCue: return "MalformedCue";
    case ErrorCode::NonMonotonicCue: return "NonMonotonicCue";
    case ErrorCode::BundleInvalid: return "BundleInvalid";
    case ErrorCode::RejectEraserStroke: return "RejectEraserStroke";
    case ErrorCode::UnknownCapture: return "UnknownCapture";
    case ErrorCode::ClockRegression: return "ClockRegression";
    case ErrorCode::UnknownButton: return "UnknownButton";
    case ErrorCode::UnreleasedSnapshot: return "UnreleasedSnapshot";
    case ErrorCode::MalformedEvent: return "MalformedEvent";
    case ErrorCode::TraceMalformed: return "TraceMalformed";
    case ErrorCode::VersionMismatch: return "VersionMismatch";
    case ErrorCode::RoleTaken: return "RoleTaken";
    case ErrorCode::PortInUse: return "PortInUse";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace marginalia
