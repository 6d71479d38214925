#include "session/events.hpp"

#include <cmath>
#include <istream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "common/error.hpp"

namespace marginalia::session {
namespace {

using nlohmann::json;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void malformed(const std::string& what) { fail(ErrorCode::MalformedEvent, what); }

const json& field(const json& obj, const char* key) {
  if (!obj.is_object()) malformed("payload must be an object");
  auto it = obj.find(key);
  if (it == obj.end()) malformed(std::string("missing field '") + key + "'");
  return *it;
}

std::string string_field(const json& obj, const char* key) {
  const json& v = field(obj, key);
  if (!v.is_string()) malformed(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

double unit_coord(const json& obj, const char* key) {
  const json& v = field(obj, key);
  if (!v.is_number()) malformed(std::string("field '") + key + "' must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d) || d < 0.0 || d > 1.0) {
    malformed(std::string("field '") + key + "' outside [0,1]");
  }
  return d;
}

notes::Point unit_point(const json& obj) { return {unit_coord(obj, "x"), unit_coord(obj, "y")}; }

}  // namespace

const char* to_string(Origin origin) {
  switch (origin) {
    case Origin::Headset: return "headset";
    case Origin::Tablet: return "tablet";
    case Origin::Observer: return "observer";
    case Origin::Server: return "server";
  }
  return "server";
}

std::optional<Origin> origin_from_string(std::string_view name) {
  if (name == "headset") return Origin::Headset;
  if (name == "tablet") return Origin::Tablet;
  if (name == "observer") return Origin::Observer;
  if (name == "server") return Origin::Server;
  return std::nullopt;
}

const char* type_name(const EventPayload& payload) {
  return std::visit(overloaded{[](const event::Gaze&) { return "gaze"; },
                               [](const event::Pen&) { return "pen"; },
                               [](const event::Gesture&) { return "gesture"; },
                               [](const event::AttentionChange&) { return "attention"; },
                               [](const event::TabletButton&) { return "tablet_button"; },
                               [](const event::Tick&) { return "tick"; }},
                    payload);
}

json payload_to_json(const EventPayload& payload) {
  return std::visit(
      overloaded{
          [](const event::Gaze& g) -> json {
            if (!g.hit) return {{"hit", nullptr}};
            return {{"hit", {{"surface", g.hit->surface.to_string()}, {"x", g.hit->pos.x}, {"y", g.hit->pos.y}}}};
          },
          [](const event::Pen& p) -> json {
            json j = {{"phase", input::to_string(p.phase)}};
            if (p.pos) {
              j["x"] = p.pos->x;
              j["y"] = p.pos->y;
            }
            return j;
          },
          [](const event::Gesture& g) -> json { return {{"gesture", input::to_string(g.gesture)}}; },
          [](const event::AttentionChange& a) -> json {
            return {{"attention", input::to_string(a.attention)}};
          },
          [](const event::TabletButton& b) -> json { return {{"button", b.button.to_string()}}; },
          [](const event::Tick&) -> json { return json::object(); },
      },
      payload);
}

EventPayload payload_from_json(std::string_view type, const json& payload) {
  if (!payload.is_object()) malformed("payload must be an object");
  if (type == "gaze") {
    const json& hit = field(payload, "hit");
    if (hit.is_null()) return event::Gaze{};
    auto surface = input::Surface::parse(string_field(hit, "surface"));
    if (!surface) malformed("unknown surface in gaze hit");
    return event::Gaze{input::SurfaceHit{*surface, unit_point(hit)}};
  }
  if (type == "pen") {
    const auto phase_name = string_field(payload, "phase");
    event::Pen pen;
    if (phase_name == "away") {
      pen.phase = input::PenPhase::Away;
    } else if (phase_name == "hover") {
      pen.phase = input::PenPhase::Hover;
    } else if (phase_name == "contact") {
      pen.phase = input::PenPhase::Contact;
    } else {
      malformed("unknown pen phase '" + phase_name + "'");
    }
    const bool has_pos = payload.contains("x") || payload.contains("y");
    if (pen.phase == input::PenPhase::Away) {
      if (has_pos) malformed("away pen sample must not carry a position");
    } else {
      pen.pos = unit_point(payload);
    }
    return pen;
  }
  if (type == "gesture") {
    const auto name = string_field(payload, "gesture");
    if (name == "double_tap") return event::Gesture{input::Gesture::DoubleTap};
    if (name == "squeeze") return event::Gesture{input::Gesture::Squeeze};
    malformed("unknown gesture '" + name + "'");
  }
  if (type == "attention") {
    const auto name = string_field(payload, "attention");
    if (name == "direct") return event::AttentionChange{input::Attention::Direct};
    if (name == "indirect") return event::AttentionChange{input::Attention::Indirect};
    malformed("unknown attention '" + name + "'");
  }
  if (type == "tablet_button") {
    auto b = input::ButtonId::parse(string_field(payload, "button"));
    using K = input::ButtonKind;
    if (!b || !(b->kind == K::NotesScrollUp || b->kind == K::NotesScrollDown || b->kind == K::ToolPen ||
                b->kind == K::ToolHighlighter || b->kind == K::ToolEraser)) {
      malformed("tablet_button must name a tablet palette button");
    }
    return event::TabletButton{*b};
  }
  if (type == "tick") return event::Tick{};
  malformed("unknown event type '" + std::string(type) + "'");
}

json to_trace_record(const LoggedEvent& logged) {
  json j = {{"seq", logged.seq},
            {"t_ms", logged.event.t_ms},
            {"type", type_name(logged.event.payload)},
            {"payload", payload_to_json(logged.event.payload)}};
  if (logged.event.origin) j["origin"] = to_string(*logged.event.origin);
  return j;
}

LoggedEvent from_trace_record(const json& record) {
  if (!record.is_object()) malformed("trace record must be an object");
  const json& seq = field(record, "seq");
  const json& t = field(record, "t_ms");
  if (!seq.is_number_unsigned()) malformed("seq must be a non-negative integer");
  if (!t.is_number_integer() || t.get<Millis>() < 0) malformed("t_ms must be a non-negative integer");
  LoggedEvent out;
  out.seq = seq.get<std::uint64_t>();
  out.event.t_ms = t.get<Millis>();
  out.event.payload = payload_from_json(string_field(record, "type"), field(record, "payload"));
  if (auto it = record.find("origin"); it != record.end()) {
    if (!it->is_string()) malformed("origin must be a string");
    out.event.origin = origin_from_string(it->get<std::string>());
    if (!out.event.origin) malformed("unknown origin");
  }
  return out;
}

std::vector<LoggedEvent> read_trace(std::istream& in) {
  std::vector<LoggedEvent> events;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      auto logged = from_trace_record(json::parse(line));
      if (!events.empty() && logged.seq <= events.back().seq) {
        fail(ErrorCode::TraceMalformed, "line " + std::to_string(line_no) + ": seq does not increase");
      }
      events.push_back(std::move(logged));
    } catch (const json::exception& e) {
      fail(ErrorCode::TraceMalformed, "line " + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      if (e.code() == ErrorCode::TraceMalformed) throw;
      fail(ErrorCode::TraceMalformed, "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return events;
}

void write_trace_line(std::ostream& out, const LoggedEvent& logged) {
  out << to_trace_record(logged).dump() << '\n';
}

void write_trace(std::ostream& out, const std::vector<LoggedEvent>& events) {
  for (const auto& e : events) write_trace_line(out, e);
}

}  // namespace marginalia::session
