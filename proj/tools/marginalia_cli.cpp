#include <csignal>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>

#include <pthread.h>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "marginalia/marginalia.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitUsage = 64;

struct CString {
  char* p = nullptr;
  ~CString() { mrg_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

struct Bundle {
  mrg_bundle* p = nullptr;
  ~Bundle() { mrg_bundle_free(p); }
};

struct Session {
  mrg_session* p = nullptr;
  ~Session() { mrg_session_free(p); }
};

int report_error(mrg_status status) {
  std::cerr << "error: " << mrg_status_name(status) << ": " << mrg_last_error() << "\n";
  switch (status) {
    case MRG_E_BUNDLE_INVALID:
    case MRG_E_TRACE_MALFORMED:
    case MRG_E_MALFORMED_CUE:
    case MRG_E_NON_MONOTONIC_CUE:
      return kExitInvalid;
    default:
      return kExitFailure;
  }
}

// Prints findings and returns whether the bundle is clean.
bool check_bundle(const std::string& dir, int& exit_code) {
  CString findings;
  if (auto st = mrg_bundle_validate_dir(dir.c_str(), &findings.p); st != MRG_OK) {
    exit_code = report_error(st);
    return false;
  }
  const auto list = nlohmann::json::parse(findings.str());
  for (const auto& f : list) {
    std::cerr << f.at("display").get<std::string>() << ": " << f.at("reason").get<std::string>() << "\n";
  }
  exit_code = list.empty() ? kExitOk : kExitInvalid;
  return list.empty();
}

int load(const std::string& dir, Bundle& bundle) {
  int code = kExitOk;
  if (!check_bundle(dir, code)) return code;
  if (auto st = mrg_bundle_load(dir.c_str(), &bundle.p); st != MRG_OK) return report_error(st);
  return kExitOk;
}

int cmd_validate(const std::string& dir) {
  int code = kExitOk;
  if (check_bundle(dir, code)) std::cout << dir << ": ok\n";
  return code;
}

int cmd_replay(const std::string& bundle_dir, const std::string& trace, const std::string& expect, bool to_end) {
  Bundle bundle;
  if (int code = load(bundle_dir, bundle); code != kExitOk) return code;
  mrg_replay_report report{};
  if (auto st = mrg_replay(bundle.p, trace.c_str(), to_end ? 1 : 0, &report, nullptr); st != MRG_OK) {
    return report_error(st);
  }
  std::printf("events_processed: %llu\nfinal_digest: %s\nwall_time_ms: %.3f\neffects_count: %llu\n",
              static_cast<unsigned long long>(report.events_processed), report.final_digest, report.wall_time_ms,
              static_cast<unsigned long long>(report.effects_count));
  if (!expect.empty() && expect != report.final_digest) {
    std::cerr << "digest mismatch: expected " << expect << "\n";
    return kExitInvalid;
  }
  return kExitOk;
}

int cmd_export(const std::string& bundle_dir, const std::string& trace, const std::string& out_path,
               const std::string& format) {
  Bundle bundle;
  if (int code = load(bundle_dir, bundle); code != kExitOk) return code;
  Session session;
  if (trace.empty()) {
    if (auto st = mrg_session_create(bundle.p, &session.p); st != MRG_OK) return report_error(st);
  } else {
    mrg_replay_report report{};
    if (auto st = mrg_replay(bundle.p, trace.c_str(), 0, &report, &session.p); st != MRG_OK) return report_error(st);
  }
  CString text;
  if (auto st = mrg_session_export(session.p, format.c_str(), &text.p); st != MRG_OK) return report_error(st);
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  out << text.str();
  if (!out) {
    std::cerr << "error: cannot write " << out_path << "\n";
    return kExitFailure;
  }
  return kExitOk;
}

int cmd_serve(const std::string& bundle_dir, const std::string& host, int port, double speed, bool autostart,
              const std::string& record, bool exit_on_end) {
  Bundle bundle;
  if (int code = load(bundle_dir, bundle); code != kExitOk) return code;

  // Signals are taken synchronously on a helper thread so stopping never
  // happens inside a handler.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  mrg_server_options options;
  mrg_server_options_init(&options);
  options.host = host.c_str();
  options.port = static_cast<std::uint16_t>(port);
  options.speed = speed;
  options.autostart = autostart ? 1 : 0;
  options.record_path = record.empty() ? nullptr : record.c_str();
  options.exit_on_end = exit_on_end ? 1 : 0;
  mrg_server* server = nullptr;
  if (auto st = mrg_server_create(bundle.p, &options, &server); st != MRG_OK) return report_error(st);

  std::thread([server, signals] {
    int sig = 0;
    sigwait(&signals, &sig);
    mrg_server_stop(server);
  }).detach();

  std::cout << "listening on ws://" << host << ":" << mrg_server_port(server) << std::endl;
  const auto st = mrg_server_run(server);
  double p50 = 0, p99 = 0, max = 0;
  mrg_server_latency(server, &p50, &p99, &max);
  std::cout << "engine latency us: p50 " << p50 << " p99 " << p99 << " max " << max << std::endl;
  char* digest = nullptr;
  if (mrg_server_digest(server, &digest) == MRG_OK) {
    std::cout << "final_digest: " << digest << std::endl;
    mrg_string_free(digest);
  }
  // The signal thread may still hold the handle, so the server is not freed.
  if (st != MRG_OK) return report_error(st);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* level = std::getenv("MARGINALIA_LOG")) {
    if (mrg_set_log_level(level) != MRG_OK) {
      std::cerr << "warning: " << mrg_last_error() << "\n";
    }
  }

  CLI::App app{"Gaze+Pen lecture note-taking engine"};
  app.require_subcommand(1);

  std::string bundle_dir, trace, expect, out_path, format, record, host = "127.0.0.1";
  int port = 8765;
  double speed = 1.0;
  bool autostart = false, to_end = false, exit_on_end = false;

  auto* serve = app.add_subcommand("serve", "Host a live session over WebSocket");
  serve->add_option("--bundle", bundle_dir, "Lecture bundle directory")->required();
  serve->add_option("--port", port, "TCP port, 0 for any free port")->check(CLI::Range(0, 65535));
  serve->add_option("--host", host, "Address to bind");
  serve->add_option("--speed", speed, "Lecture playback speed")->check(CLI::PositiveNumber);
  serve->add_flag("--autostart", autostart, "Start the lecture clock immediately");
  serve->add_option("--record", record, "Write every engine event to this trace file");
  serve->add_flag("--exit-on-end", exit_on_end, "Stop once the lecture clock reaches the end");

  auto* replay = app.add_subcommand("replay", "Replay a trace headlessly and print its digest");
  replay->add_option("--bundle", bundle_dir, "Lecture bundle directory")->required();
  replay->add_option("--trace", trace, "Trace file")->required();
  replay->add_option("--expect", expect, "Expected final digest");
  replay->add_flag("--to-end", to_end, "Run the clock to the end of the lecture after the trace");

  auto* validate = app.add_subcommand("validate", "Check a lecture bundle");
  validate->add_option("dir", bundle_dir, "Lecture bundle directory")->required();

  auto* exp = app.add_subcommand("export", "Export the notes produced by a trace");
  exp->add_option("--bundle", bundle_dir, "Lecture bundle directory")->required();
  exp->add_option("--trace", trace, "Trace file; omit for an empty session");
  exp->add_option("--out", out_path, "Output file")->required();
  exp->add_option("--format", format, "svg or structured")
      ->required()
      ->check(CLI::IsMember({"svg", "structured"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (*serve) return cmd_serve(bundle_dir, host, port, speed, autostart, record, exit_on_end);
  if (*replay) return cmd_replay(bundle_dir, trace, expect, to_end);
  if (*validate) return cmd_validate(bundle_dir);
  if (*exp) return cmd_export(bundle_dir, trace, out_path, format);
  return kExitUsage;
}
