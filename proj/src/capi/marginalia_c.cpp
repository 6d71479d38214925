#include "marginalia/marginalia.h"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <fstream>
#include <memory>
#include <string>

#include <nlohmann/json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "common/error.hpp"
#include "ingest/bundle.hpp"
#include "session/replay.hpp"
#include "session/session.hpp"
#include "sync/protocol.hpp"
#include "sync/ws_server.hpp"

using namespace marginalia;
using nlohmann::json;

struct mrg_bundle {
  std::shared_ptr<const ingest::LectureBundle> bundle;
};

struct mrg_session {
  std::unique_ptr<session::Session> session;
};

struct mrg_server {
  std::unique_ptr<sync::Server> server;
};

namespace {

thread_local std::string g_last_error;

void ensure_logger() {
  static const bool once = [] {
    auto logger = spdlog::stderr_color_mt("marginalia");
    logger->set_level(spdlog::level::warn);
    spdlog::set_default_logger(std::move(logger));
    return true;
  }();
  (void)once;
}

mrg_status status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return MRG_E_INVALID_ARGUMENT;
    case ErrorCode::MalformedCue: return MRG_E_MALFORMED_CUE;
    case ErrorCode::NonMonotonicCue: return MRG_E_NON_MONOTONIC_CUE;
    case ErrorCode::BundleInvalid: return MRG_E_BUNDLE_INVALID;
    case ErrorCode::RejectEraserStroke: return MRG_E_REJECT_ERASER_STROKE;
    case ErrorCode::UnknownCapture: return MRG_E_UNKNOWN_CAPTURE;
    case ErrorCode::ClockRegression: return MRG_E_CLOCK_REGRESSION;
    case ErrorCode::UnknownButton: return MRG_E_UNKNOWN_BUTTON;
    case ErrorCode::UnreleasedSnapshot: return MRG_E_UNRELEASED_SNAPSHOT;
    case ErrorCode::MalformedEvent: return MRG_E_MALFORMED_EVENT;
    case ErrorCode::TraceMalformed: return MRG_E_TRACE_MALFORMED;
    case ErrorCode::VersionMismatch: return MRG_E_VERSION_MISMATCH;
    case ErrorCode::RoleTaken: return MRG_E_ROLE_TAKEN;
    case ErrorCode::PortInUse: return MRG_E_PORT_IN_USE;
    case ErrorCode::Io: return MRG_E_IO;
  }
  return MRG_E_INTERNAL;
}

mrg_status set_error(mrg_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

template <class F>
mrg_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return MRG_OK;
  } catch (const Error& e) {
    return set_error(status_of(e.code()), e.what());
  } catch (const json::exception& e) {
    return set_error(MRG_E_MALFORMED_EVENT, e.what());
  } catch (const std::exception& e) {
    return set_error(MRG_E_INTERNAL, e.what());
  } catch (...) {
    return set_error(MRG_E_INTERNAL, "unknown failure");
  }
}

char* dup_string(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(const void* p, const char* what) {
  if (!p) fail(ErrorCode::InvalidArgument, std::string(what) + " is NULL");
}

notes::SnapshotResolver resolver_for(std::shared_ptr<const ingest::LectureBundle> bundle) {
  return [bundle](notes::CaptureKind kind, const std::string& id) -> std::optional<notes::SnapshotContent> {
    if (kind == notes::CaptureKind::Slide) {
      auto ord = ingest::slide_ordinal(id);
      if (!ord || *ord >= bundle->slide_events.size()) return std::nullopt;
      const auto& ref = bundle->slide_events[*ord].image_ref;
      auto path = bundle->root.empty() ? std::filesystem::path(ref) : bundle->root / ref;
      std::error_code ec;
      auto absolute = std::filesystem::absolute(path, ec);
      return notes::SnapshotContent{(ec ? path : absolute).generic_string(), {}};
    }
    const auto* block = bundle->find_block(id);
    if (!block) return std::nullopt;
    return notes::SnapshotContent{{}, block->text};
  };
}

}  // namespace

extern "C" {

const char* mrg_last_error(void) { return g_last_error.c_str(); }

const char* mrg_status_name(mrg_status status) {
  switch (status) {
    case MRG_OK: return "Ok";
    case MRG_E_INVALID_ARGUMENT: return "InvalidArgument";
    case MRG_E_MALFORMED_CUE: return "MalformedCue";
    case MRG_E_NON_MONOTONIC_CUE: return "NonMonotonicCue";
    case MRG_E_BUNDLE_INVALID: return "BundleInvalid";
    case MRG_E_REJECT_ERASER_STROKE: return "RejectEraserStroke";
    case MRG_E_UNKNOWN_CAPTURE: return "UnknownCapture";
    case MRG_E_CLOCK_REGRESSION: return "ClockRegression";
    case MRG_E_UNKNOWN_BUTTON: return "UnknownButton";
    case MRG_E_UNRELEASED_SNAPSHOT: return "UnreleasedSnapshot";
    case MRG_E_MALFORMED_EVENT: return "MalformedEvent";
    case MRG_E_TRACE_MALFORMED: return "TraceMalformed";
    case MRG_E_VERSION_MISMATCH: return "VersionMismatch";
    case MRG_E_ROLE_TAKEN: return "RoleTaken";
    case MRG_E_PORT_IN_USE: return "PortInUse";
    case MRG_E_IO: return "Io";
    case MRG_E_INTERNAL: return "Internal";
  }
  return "Unknown";
}

const char* mrg_version(void) { return "0.1.0"; }

void mrg_string_free(char* s) { std::free(s); }

mrg_status mrg_set_log_level(const char* level) {
  return guarded([&] {
    require(level, "level");
    ensure_logger();
    const auto parsed = spdlog::level::from_str(level);
    if (parsed == spdlog::level::off && std::strcmp(level, "off") != 0) {
      fail(ErrorCode::InvalidArgument, std::string("unknown log level '") + level + "'");
    }
    spdlog::set_level(parsed);
  });
}

mrg_status mrg_bundle_load(const char* dir, mrg_bundle** out) {
  return guarded([&] {
    require(dir, "dir");
    require(out, "out");
    *out = nullptr;
    auto bundle = std::make_shared<const ingest::LectureBundle>(ingest::load_bundle(dir));
    *out = new mrg_bundle{std::move(bundle)};
  });
}

mrg_status mrg_bundle_validate_dir(const char* dir, char** findings_json) {
  return guarded([&] {
    require(dir, "dir");
    require(findings_json, "findings_json");
    json out = json::array();
    for (const auto& f : ingest::validate_bundle_dir(dir)) {
      out.push_back({{"code", f.code}, {"args", f.args}, {"reason", f.reason}, {"display", f.to_string()}});
    }
    *findings_json = dup_string(out.dump());
  });
}

int64_t mrg_bundle_duration_ms(const mrg_bundle* bundle) { return bundle ? bundle->bundle->duration_ms : 0; }

void mrg_bundle_free(mrg_bundle* bundle) { delete bundle; }

mrg_status mrg_session_create(const mrg_bundle* bundle, mrg_session** out) {
  return guarded([&] {
    require(bundle, "bundle");
    require(out, "out");
    *out = new mrg_session{std::make_unique<session::Session>(bundle->bundle)};
  });
}

mrg_status mrg_session_apply_event_json(mrg_session* s, const char* event_json, char** delta_json) {
  return guarded([&] {
    require(s, "session");
    require(event_json, "event_json");
    if (delta_json) *delta_json = nullptr;
    json record = json::parse(event_json, nullptr, false);
    if (record.is_discarded() || !record.is_object()) fail(ErrorCode::MalformedEvent, "event is not a JSON object");
    record["seq"] = s->session->event_log().size() + 1;
    auto logged = session::from_trace_record(record);
    auto step = s->session->apply(std::move(logged.event));
    if (delta_json && !step.changes.empty()) {
      json delta = sync::step_delta(*s->session, step.changes);
      delta["engine_seq"] = step.seq;
      *delta_json = dup_string(delta.dump());
    }
  });
}

mrg_status mrg_session_advance(mrg_session* s, int64_t to_ms) {
  return guarded([&] {
    require(s, "session");
    s->session->advance_clock(to_ms);
    s->session->take_changes();
  });
}

int64_t mrg_session_clock_ms(const mrg_session* s) { return s ? s->session->clock_ms() : 0; }

mrg_status mrg_session_digest(const mrg_session* s, char** hex) {
  return guarded([&] {
    require(s, "session");
    require(hex, "hex");
    *hex = dup_string(s->session->digest());
  });
}

mrg_status mrg_session_state_json(const mrg_session* s, char** out) {
  return guarded([&] {
    require(s, "session");
    require(out, "out");
    *out = dup_string(s->session->canonical_state().dump());
  });
}

mrg_status mrg_session_export(const mrg_session* s, const char* format, char** out) {
  return guarded([&] {
    require(s, "session");
    require(format, "format");
    require(out, "out");
    const std::string f = format;
    if (f == "svg") {
      notes::SvgOptions options;
      options.resolver = resolver_for(s->session->bundle_ptr());
      *out = dup_string(notes::render_svg(s->session->document(), options));
    } else if (f == "structured") {
      *out = dup_string(s->session->document().to_json().dump(2) + "\n");
    } else {
      fail(ErrorCode::InvalidArgument, "unknown export format '" + f + "'");
    }
  });
}

mrg_status mrg_session_write_trace(const mrg_session* s, const char* path) {
  return guarded([&] {
    require(s, "session");
    require(path, "path");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::Io, std::string("cannot write ") + path);
    session::write_trace(out, s->session->event_log());
    if (!out) fail(ErrorCode::Io, std::string("write failed: ") + path);
  });
}

void mrg_session_free(mrg_session* s) { delete s; }

mrg_status mrg_replay(const mrg_bundle* bundle, const char* trace_path, int to_end, mrg_replay_report* report,
                      mrg_session** session_out) {
  return guarded([&] {
    require(bundle, "bundle");
    require(trace_path, "trace_path");
    require(report, "report");
    if (session_out) *session_out = nullptr;
    std::ifstream in(trace_path, std::ios::binary);
    if (!in) fail(ErrorCode::Io, std::string("cannot read ") + trace_path);
    const auto events = session::read_trace(in);
    auto s = std::make_unique<session::Session>(bundle->bundle);
    const auto r = session::replay(*s, events, to_end != 0);
    report->events_processed = r.events_processed;
    std::snprintf(report->final_digest, sizeof report->final_digest, "%s", r.final_digest.c_str());
    report->wall_time_ms = r.wall_time_ms;
    report->effects_count = r.effects_count;
    if (session_out) *session_out = new mrg_session{std::move(s)};
  });
}

void mrg_server_options_init(mrg_server_options* o) {
  if (!o) return;
  *o = mrg_server_options{nullptr, 8765, 1.0, 0, nullptr, 0};
}

mrg_status mrg_server_create(const mrg_bundle* bundle, const mrg_server_options* o, mrg_server** out) {
  return guarded([&] {
    require(bundle, "bundle");
    require(o, "options");
    require(out, "out");
    *out = nullptr;
    ensure_logger();
    sync::ServerOptions options;
    if (o->host) options.host = o->host;
    options.port = o->port;
    options.speed = o->speed > 0 ? o->speed : 1.0;
    options.autostart = o->autostart != 0;
    if (o->record_path) options.record_path = o->record_path;
    options.exit_on_end = o->exit_on_end != 0;
    *out = new mrg_server{std::make_unique<sync::Server>(bundle->bundle, options)};
  });
}

uint16_t mrg_server_port(const mrg_server* server) { return server ? server->server->port() : 0; }

mrg_status mrg_server_run(mrg_server* server) {
  return guarded([&] {
    require(server, "server");
    server->server->run();
  });
}

void mrg_server_stop(mrg_server* server) {
  if (server) server->server->stop();
}

mrg_status mrg_server_latency(const mrg_server* server, double* p50_us, double* p99_us, double* max_us) {
  return guarded([&] {
    require(server, "server");
    const auto stats = server->server->latency();
    if (p50_us) *p50_us = stats.p50_us;
    if (p99_us) *p99_us = stats.p99_us;
    if (max_us) *max_us = stats.max_us;
  });
}

mrg_status mrg_server_digest(const mrg_server* server, char** hex) {
  return guarded([&] {
    require(server, "server");
    require(hex, "hex");
    *hex = dup_string(server->server->digest());
  });
}

void mrg_server_free(mrg_server* server) { delete server; }

}  // extern "C"
