#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "session/session.hpp"
#include "sync/protocol.hpp"

namespace marginalia::sync {

using ConnId = std::uint64_t;

struct RelayConfig {
  /// Unsent messages a client may lag behind before it is dropped.
  std::size_t max_outbox = 4096;
};

/// Per-event engine latency, in microseconds.
struct LatencyStats {
  std::size_t count = 0;
  double p50_us = 0;
  double p99_us = 0;
  double max_us = 0;
};

/// Connection bookkeeping, sequencing and fan-out in front of one session.
/// Knows nothing about sockets: the transport feeds text in with receive()
/// and pulls outgoing text with pop(). Single-threaded.
class Relay {
 public:
  explicit Relay(session::Session& session, RelayConfig config = {});

  ConnId open_connection();
  void close_connection(ConnId conn);

  /// Handles one client message. Protocol errors are answered on the same
  /// connection; a bad hello also marks the connection for closing.
  void receive(ConnId conn, std::string_view text);

  /// Runs a server-originated clock tick at `t_ms` (clamped to the session
  /// clock) and broadcasts its delta, if any.
  void tick(Millis t_ms);

  /// Lecture time used to stamp client events; defaults to the session clock.
  void set_clock(std::function<Millis()> clock) { clock_ = std::move(clock); }
  void set_control_handler(std::function<void(const nlohmann::json&)> handler) {
    on_control_ = std::move(handler);
  }
  /// Appends every engine event to `out` as a trace line.
  void set_recorder(std::ostream* out) { recorder_ = out; }

  std::optional<std::string> pop(ConnId conn);
  std::size_t pending(ConnId conn) const;
  /// True once the connection should be closed by the transport, either
  /// after a rejected hello or because its outbox overflowed.
  bool closing(ConnId conn) const;
  bool registered(ConnId conn) const;
  std::optional<ClientRole> role(ConnId conn) const;
  std::vector<ConnId> connections() const;

  std::uint64_t delta_seq() const { return delta_seq_; }
  session::Session& session() { return session_; }
  LatencyStats latency() const;

 private:
  struct Connection {
    std::optional<ClientRole> role;
    std::uint64_t out_seq = 0;
    std::deque<std::string> outbox;
    bool closing = false;
  };

  Millis now() const;
  void send(ConnId conn, MessageKind kind, nlohmann::json payload);
  void send_error(ConnId conn, const std::string& code, const std::string& message);
  void send_full_state(ConnId conn);
  void on_hello(ConnId conn, const Envelope& e);
  void on_event(ConnId conn, const Envelope& e);
  void run_step(const session::InputEvent& event, std::optional<ConnId> from, std::uint64_t client_seq);

  session::Session& session_;
  RelayConfig config_;
  std::map<ConnId, Connection> conns_;
  ConnId next_conn_ = 1;
  std::uint64_t delta_seq_ = 0;
  std::function<Millis()> clock_;
  std::function<void(const nlohmann::json&)> on_control_;
  std::ostream* recorder_ = nullptr;
  std::vector<double> latency_us_;
};

}  // namespace marginalia::sync
