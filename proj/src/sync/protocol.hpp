#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "session/session.hpp"

namespace marginalia::sync {

inline constexpr int kProtocolVersion = 1;

enum class ClientRole { HeadsetSim, TabletSim, Observer };
const char* to_string(ClientRole role);
std::optional<ClientRole> role_from_string(std::string_view name);
session::Origin origin_of(ClientRole role);

enum class MessageKind { Hello, Event, Delta, FullState, Ack, Error, ResyncRequest, Control };
const char* to_string(MessageKind kind);
std::optional<MessageKind> kind_from_string(std::string_view name);

/// One wire message: `{"seq":..,"t_ms":..,"kind":..,"payload":{..}}`.
struct Envelope {
  std::uint64_t seq = 0;
  Millis t_ms = 0;
  MessageKind kind = MessageKind::Hello;
  nlohmann::json payload = nlohmann::json::object();
};

std::string encode(const Envelope& envelope);
/// Throws Error(MalformedEvent) for anything that is not a well-formed envelope.
Envelope decode(std::string_view text);

/// Delta body for one engine step, without the sequence fields the relay
/// stamps on. Keys only appear for parts of the state that changed.
nlohmann::json step_delta(const session::Session& session, const session::StepChanges& changes);

/// Everything a client needs to rebuild its mirror from scratch.
nlohmann::json full_state(const session::Session& session);

/// Slide events and transcript blocks of the lecture, for rendering.
nlohmann::json lecture_json(const ingest::LectureBundle& bundle);

/// Button hitboxes and the geometry constants the engine works with.
nlohmann::json layout_json(const session::Session& session);

}  // namespace marginalia::sync
