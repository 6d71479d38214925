#include "sync/protocol.hpp"

#include <array>
#include <utility>

#include "common/error.hpp"

namespace marginalia::sync {
namespace {

using nlohmann::json;

constexpr std::array<std::pair<ClientRole, const char*>, 3> kRoles{{
    {ClientRole::HeadsetSim, "headset"},
    {ClientRole::TabletSim, "tablet"},
    {ClientRole::Observer, "observer"},
}};

constexpr std::array<std::pair<MessageKind, const char*>, 8> kKinds{{
    {MessageKind::Hello, "hello"},
    {MessageKind::Event, "event"},
    {MessageKind::Delta, "delta"},
    {MessageKind::FullState, "full_state"},
    {MessageKind::Ack, "ack"},
    {MessageKind::Error, "error"},
    {MessageKind::ResyncRequest, "resync_request"},
    {MessageKind::Control, "control"},
}};

const char* preview_kind(session::InkPreview::Kind k) {
  switch (k) {
    case session::InkPreview::Kind::Start: return "start";
    case session::InkPreview::Kind::Extend: return "extend";
    case session::InkPreview::Kind::End: return "end";
  }
  return "start";
}

}  // namespace

const char* to_string(ClientRole role) {
  for (const auto& [r, name] : kRoles) {
    if (r == role) return name;
  }
  return "observer";
}

std::optional<ClientRole> role_from_string(std::string_view name) {
  for (const auto& [r, n] : kRoles) {
    if (name == n) return r;
  }
  return std::nullopt;
}

session::Origin origin_of(ClientRole role) {
  switch (role) {
    case ClientRole::HeadsetSim: return session::Origin::Headset;
    case ClientRole::TabletSim: return session::Origin::Tablet;
    case ClientRole::Observer: return session::Origin::Observer;
  }
  return session::Origin::Observer;
}

const char* to_string(MessageKind kind) {
  for (const auto& [k, name] : kKinds) {
    if (k == kind) return name;
  }
  return "error";
}

std::optional<MessageKind> kind_from_string(std::string_view name) {
  for (const auto& [k, n] : kKinds) {
    if (name == n) return k;
  }
  return std::nullopt;
}

std::string encode(const Envelope& e) {
  return json{{"seq", e.seq}, {"t_ms", e.t_ms}, {"kind", to_string(e.kind)}, {"payload", e.payload}}.dump();
}

Envelope decode(std::string_view text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) fail(ErrorCode::MalformedEvent, "message is not a JSON object");
  auto seq = j.find("seq");
  auto t = j.find("t_ms");
  auto kind = j.find("kind");
  if (seq == j.end() || !seq->is_number_unsigned()) fail(ErrorCode::MalformedEvent, "missing or invalid seq");
  if (kind == j.end() || !kind->is_string()) fail(ErrorCode::MalformedEvent, "missing or invalid kind");
  Envelope e;
  e.seq = seq->get<std::uint64_t>();
  if (t != j.end()) {
    if (!t->is_number_integer()) fail(ErrorCode::MalformedEvent, "invalid t_ms");
    e.t_ms = t->get<Millis>();
  }
  auto k = kind_from_string(kind->get<std::string>());
  if (!k) fail(ErrorCode::MalformedEvent, "unknown message kind '" + kind->get<std::string>() + "'");
  e.kind = *k;
  if (auto p = j.find("payload"); p != j.end()) {
    if (!p->is_object()) fail(ErrorCode::MalformedEvent, "payload must be an object");
    e.payload = std::move(*p);
  }
  return e;
}

json step_delta(const session::Session& s, const session::StepChanges& c) {
  json d = {{"clock_ms", s.clock_ms()}};
  if (!c.doc_ops.empty()) {
    json ops = json::array();
    for (const auto& op : c.doc_ops) ops.push_back(notes::to_json(op));
    d["doc_ops"] = std::move(ops);
  }
  if (c.slides) d["slides"] = to_json(s.panel(session::PanelKind::Slides));
  if (c.transcripts) d["transcripts"] = to_json(s.panel(session::PanelKind::Transcripts));
  if (c.tools) {
    d["tools"] = {{"active", notes::to_string(s.tools().active)},
                  {"last_drawing", notes::to_string(s.tools().last_drawing)}};
  }
  if (c.interaction) d["interaction"] = s.interaction_view();
  if (c.navigator) {
    d["navigator"] = s.navigator_json();
    d["layout"] = layout_json(s);
  }
  if (!c.preview.empty()) {
    json preview = json::array();
    for (const auto& p : c.preview) {
      preview.push_back({{"kind", preview_kind(p.kind)},
                         {"surface", p.surface.to_string()},
                         {"tool", notes::to_string(p.tool)},
                         {"point", {p.point.x, p.point.y, p.point.t_ms}}});
    }
    d["preview"] = std::move(preview);
  }
  if (!c.effects.empty()) {
    json effects = json::array();
    for (const auto& e : c.effects) effects.push_back(session::to_json(e));
    d["effects"] = std::move(effects);
  }
  return d;
}

json full_state(const session::Session& s) {
  return {{"digest", s.digest()},
          {"state", s.canonical_state()},
          {"interaction", s.interaction_view()},
          {"navigator", s.navigator_json()},
          {"duration_ms", s.bundle().duration_ms},
          {"lecture", lecture_json(s.bundle())},
          {"layout", layout_json(s)}};
}

json lecture_json(const ingest::LectureBundle& b) {
  json slides = json::array();
  for (std::size_t i = 0; i < b.slide_events.size(); ++i) {
    const auto& e = b.slide_events[i];
    slides.push_back({{"snapshot_id", ingest::slide_snapshot_id(i)},
                      {"t_ms", e.t_ms},
                      {"image", e.image_ref},
                      {"slide_index", e.slide_index},
                      {"build_index", e.build_index}});
  }
  json blocks = json::array();
  for (const auto& blk : b.transcript_blocks) {
    blocks.push_back({{"block_id", blk.block_id}, {"start_ms", blk.start_ms}, {"end_ms", blk.end_ms}, {"text", blk.text}});
  }
  return {{"title", b.title},
          {"duration_ms", b.duration_ms},
          {"slide_aspect_ratio", b.slide_aspect_ratio},
          {"slides", std::move(slides)},
          {"transcript_blocks", std::move(blocks)}};
}

json layout_json(const session::Session& s) {
  json buttons = json::array();
  for (const auto& a : s.fsm_config().layout) {
    buttons.push_back({{"button", a.button.to_string()},
                       {"panel", input::Surface{a.host, {}}.to_string()},
                       {"edge", input::to_string(a.edge)},
                       {"from", a.span_lo},
                       {"to", a.span_hi}});
  }
  const auto& c = s.config();
  return {{"gain", s.fsm_config().gain},
          {"snap_margin", s.fsm_config().snap_margin},
          {"notes_view_height", c.notes_view_height},
          {"capture_column_width", c.layout.capture_column_width},
          {"transcript_aspect_ratio", c.transcript_aspect_ratio},
          {"buttons", std::move(buttons)}};
}

}  // namespace marginalia::sync
