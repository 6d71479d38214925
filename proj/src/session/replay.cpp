#include "session/replay.hpp"

#include <chrono>

namespace marginalia::session {

ReplayReport replay(Session& session, const std::vector<LoggedEvent>& events, bool to_end) {
  const auto start = std::chrono::steady_clock::now();
  ReplayReport report;
  for (const auto& logged : events) {
    auto step = session.apply(logged.event);
    report.effects_count += step.changes.effects.size();
    ++report.events_processed;
  }
  if (to_end && session.clock_ms() < session.bundle().duration_ms) {
    session.advance_clock(session.bundle().duration_ms);
    report.effects_count += session.take_changes().effects.size();
  }
  report.final_digest = session.digest();
  report.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace marginalia::session
