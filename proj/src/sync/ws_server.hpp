#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "ingest/bundle.hpp"
#include "session/session.hpp"
#include "sync/relay.hpp"

namespace marginalia::sync {

struct ServerOptions {
  std::string host = "127.0.0.1";
  std::uint16_t port = 8765;  // 0 picks a free port
  double speed = 1.0;         // lecture ms per wall-clock ms
  bool autostart = false;
  std::string record_path;    // trace file, empty for none
  bool exit_on_end = false;
  Millis tick_interval_ms = 50;  // wall clock
  session::SessionConfig session;
};

/// WebSocket endpoint hosting one lecture session. All engine work runs on
/// the thread that calls run().
class Server {
 public:
  /// Binds the listening socket; throws Error(PortInUse) or Error(Io).
  Server(std::shared_ptr<const ingest::LectureBundle> bundle, ServerOptions options);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  std::uint16_t port() const;
  /// Serves until stop(), or until the lecture ends with exit_on_end.
  void run();
  /// Safe to call from any thread.
  void stop();

  /// Only meaningful once run() has returned.
  LatencyStats latency() const;
  std::string digest() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace marginalia::sync
