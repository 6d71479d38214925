#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "session/session.hpp"

namespace marginalia::session {

struct ReplayReport {
  std::uint64_t events_processed = 0;
  std::string final_digest;
  double wall_time_ms = 0;
  std::uint64_t effects_count = 0;
};

/// Feeds logged events through `session` in order. With `to_end` the clock
/// is then advanced to the end of the lecture.
ReplayReport replay(Session& session, const std::vector<LoggedEvent>& events, bool to_end = false);

}  // namespace marginalia::session
