#include "sync/relay.hpp"

#include <algorithm>
#include <chrono>
#include <ostream>

#include "common/error.hpp"

namespace marginalia::sync {

using nlohmann::json;

Relay::Relay(session::Session& session, RelayConfig config) : session_(session), config_(config) {}

ConnId Relay::open_connection() {
  const ConnId id = next_conn_++;
  conns_.emplace(id, Connection{});
  return id;
}

void Relay::close_connection(ConnId conn) { conns_.erase(conn); }

Millis Relay::now() const {
  const Millis clock = session_.clock_ms();
  return clock_ ? std::max(clock, clock_()) : clock;
}

void Relay::send(ConnId conn, MessageKind kind, json payload) {
  auto it = conns_.find(conn);
  if (it == conns_.end() || it->second.closing) return;
  Connection& c = it->second;
  if (c.outbox.size() >= config_.max_outbox) {
    c.outbox.clear();
    c.closing = true;
    return;
  }
  c.outbox.push_back(encode({++c.out_seq, session_.clock_ms(), kind, std::move(payload)}));
}

void Relay::send_error(ConnId conn, const std::string& code, const std::string& message) {
  send(conn, MessageKind::Error, {{"code", code}, {"message", message}});
}

void Relay::send_full_state(ConnId conn) {
  json state = full_state(session_);
  state["engine_seq"] = session_.event_log().size();
  state["delta_seq"] = delta_seq_;
  send(conn, MessageKind::FullState, std::move(state));
}

void Relay::receive(ConnId conn, std::string_view text) {
  auto it = conns_.find(conn);
  if (it == conns_.end() || it->second.closing) return;
  Envelope e;
  try {
    e = decode(text);
  } catch (const Error& err) {
    send_error(conn, to_string(err.code()), err.what());
    return;
  }
  if (e.kind == MessageKind::Hello) {
    on_hello(conn, e);
    return;
  }
  if (!it->second.role) {
    send_error(conn, "NotRegistered", "send hello first");
    return;
  }
  switch (e.kind) {
    case MessageKind::Event: on_event(conn, e); break;
    case MessageKind::ResyncRequest: send_full_state(conn); break;
    case MessageKind::Control:
      if (on_control_) on_control_(e.payload);
      break;
    default:
      send_error(conn, to_string(ErrorCode::MalformedEvent),
                 std::string("clients may not send ") + to_string(e.kind));
  }
}

void Relay::on_hello(ConnId conn, const Envelope& e) {
  Connection& c = conns_.at(conn);
  const auto& p = e.payload;
  auto version = p.find("protocol_version");
  if (version == p.end() || !version->is_number_integer() || version->get<int>() != kProtocolVersion) {
    send_error(conn, to_string(ErrorCode::VersionMismatch),
               "server speaks protocol version " + std::to_string(kProtocolVersion));
    c.closing = true;
    return;
  }
  auto role_field = p.find("role");
  std::optional<ClientRole> role;
  if (role_field != p.end() && role_field->is_string()) role = role_from_string(role_field->get<std::string>());
  if (!role) {
    send_error(conn, to_string(ErrorCode::MalformedEvent), "hello needs a role");
    c.closing = true;
    return;
  }
  if (c.role) {
    send_error(conn, to_string(ErrorCode::MalformedEvent), "already registered");
    return;
  }
  if (*role != ClientRole::Observer) {
    for (const auto& [id, other] : conns_) {
      if (id != conn && !other.closing && other.role == role) {
        send_error(conn, to_string(ErrorCode::RoleTaken), std::string(to_string(*role)) + " is already connected");
        c.closing = true;
        return;
      }
    }
  }
  c.role = role;
  send_full_state(conn);
}

void Relay::on_event(ConnId conn, const Envelope& e) {
  session::InputEvent event;
  try {
    auto type = e.payload.find("type");
    if (type == e.payload.end() || !type->is_string()) fail(ErrorCode::MalformedEvent, "event needs a type");
    auto payload = e.payload.find("payload");
    event.payload =
        session::payload_from_json(type->get<std::string>(), payload == e.payload.end() ? json::object() : *payload);
  } catch (const Error& err) {
    send_error(conn, to_string(err.code()), err.what());
    return;
  } catch (const json::exception& err) {
    send_error(conn, to_string(ErrorCode::MalformedEvent), err.what());
    return;
  }
  event.t_ms = now();
  event.origin = origin_of(*conns_.at(conn).role);
  run_step(event, conn, e.seq);
}

void Relay::tick(Millis t_ms) {
  session::InputEvent event;
  event.t_ms = std::max(t_ms, session_.clock_ms());
  event.payload = session::event::Tick{};
  event.origin = session::Origin::Server;
  run_step(event, std::nullopt, 0);
}

void Relay::run_step(const session::InputEvent& event, std::optional<ConnId> from, std::uint64_t client_seq) {
  const auto start = std::chrono::steady_clock::now();
  auto step = session_.apply(event);
  if (recorder_) session::write_trace_line(*recorder_, session_.event_log().back());

  if (from) {
    send(*from, MessageKind::Ack, {{"engine_seq", step.seq}, {"client_seq", client_seq}});
    for (const auto& message : step.changes.errors) send_error(*from, "IntentRejected", message);
  }
  if (!step.changes.empty()) {
    json delta = step_delta(session_, step.changes);
    delta["engine_seq"] = step.seq;
    delta["delta_seq"] = ++delta_seq_;
    for (auto& [id, c] : conns_) {
      if (c.role) send(id, MessageKind::Delta, delta);
    }
  }
  latency_us_.push_back(std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - start).count());
}

std::optional<std::string> Relay::pop(ConnId conn) {
  auto it = conns_.find(conn);
  if (it == conns_.end() || it->second.outbox.empty()) return std::nullopt;
  std::string out = std::move(it->second.outbox.front());
  it->second.outbox.pop_front();
  return out;
}

std::size_t Relay::pending(ConnId conn) const {
  auto it = conns_.find(conn);
  return it == conns_.end() ? 0 : it->second.outbox.size();
}

bool Relay::closing(ConnId conn) const {
  auto it = conns_.find(conn);
  return it == conns_.end() || it->second.closing;
}

bool Relay::registered(ConnId conn) const {
  auto it = conns_.find(conn);
  return it != conns_.end() && it->second.role.has_value();
}

std::optional<ClientRole> Relay::role(ConnId conn) const {
  auto it = conns_.find(conn);
  return it == conns_.end() ? std::nullopt : it->second.role;
}

std::vector<ConnId> Relay::connections() const {
  std::vector<ConnId> out;
  for (const auto& [id, c] : conns_) out.push_back(id);
  return out;
}

LatencyStats Relay::latency() const {
  LatencyStats s;
  s.count = latency_us_.size();
  if (s.count == 0) return s;
  auto sorted = latency_us_;
  std::sort(sorted.begin(), sorted.end());
  auto at = [&](double q) { return sorted[std::min(sorted.size() - 1, static_cast<std::size_t>(q * sorted.size()))]; };
  s.p50_us = at(0.50);
  s.p99_us = at(0.99);
  s.max_us = sorted.back();
  return s;
}

}  // namespace marginalia::sync
