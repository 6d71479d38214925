#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "input/types.hpp"

namespace marginalia::session {

/// Which client produced an event. Informational only; the engine never
/// branches on it.
enum class Origin { Headset, Tablet, Observer, Server };
const char* to_string(Origin origin);
std::optional<Origin> origin_from_string(std::string_view name);

namespace event {
struct Gaze { std::optional<input::SurfaceHit> hit; };
struct Pen {
  input::PenPhase phase = input::PenPhase::Away;
  std::optional<notes::Point> pos;
};
struct Gesture { input::Gesture gesture = input::Gesture::DoubleTap; };
struct AttentionChange { input::Attention attention = input::Attention::Indirect; };
/// Heads-down tap on the tablet's own tool palette.
struct TabletButton { input::ButtonId button; };
/// Clock advance with no user input.
struct Tick {};
}  // namespace event

using EventPayload = std::variant<event::Gaze, event::Pen, event::Gesture, event::AttentionChange,
                                  event::TabletButton, event::Tick>;

const char* type_name(const EventPayload& payload);
nlohmann::json payload_to_json(const EventPayload& payload);
/// Throws Error(MalformedEvent) on unknown types, missing fields,
/// non-finite or out-of-range coordinates.
EventPayload payload_from_json(std::string_view type, const nlohmann::json& payload);

struct InputEvent {
  Millis t_ms = 0;
  EventPayload payload;
  std::optional<Origin> origin;
};

/// One entry of the append-only log; also one line of a trace file.
struct LoggedEvent {
  std::uint64_t seq = 0;
  InputEvent event;
};

/// `{"seq":..,"t_ms":..,"type":..,"payload":{..}[,"origin":..]}`
nlohmann::json to_trace_record(const LoggedEvent& logged);
LoggedEvent from_trace_record(const nlohmann::json& record);

/// Newline-delimited trace records. Blank lines are skipped. Throws
/// Error(TraceMalformed) naming the 1-based line for bad JSON, bad payloads,
/// or sequence numbers that don't strictly increase.
std::vector<LoggedEvent> read_trace(std::istream& in);
void write_trace(std::ostream& out, const std::vector<LoggedEvent>& events);
void write_trace_line(std::ostream& out, const LoggedEvent& logged);

}  // namespace marginalia::session
