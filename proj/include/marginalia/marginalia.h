#ifndef MARGINALIA_MARGINALIA_H
#define MARGINALIA_MARGINALIA_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define MRG_API __declspec(dllexport)
#else
#define MRG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mrg_status {
  MRG_OK = 0,
  MRG_E_INVALID_ARGUMENT = 1,
  MRG_E_MALFORMED_CUE = 2,
  MRG_E_NON_MONOTONIC_CUE = 3,
  MRG_E_BUNDLE_INVALID = 4,
  MRG_E_REJECT_ERASER_STROKE = 5,
  MRG_E_UNKNOWN_CAPTURE = 6,
  MRG_E_CLOCK_REGRESSION = 7,
  MRG_E_UNKNOWN_BUTTON = 8,
  MRG_E_UNRELEASED_SNAPSHOT = 9,
  MRG_E_MALFORMED_EVENT = 10,
  MRG_E_TRACE_MALFORMED = 11,
  MRG_E_VERSION_MISMATCH = 12,
  MRG_E_ROLE_TAKEN = 13,
  MRG_E_PORT_IN_USE = 14,
  MRG_E_IO = 15,
  MRG_E_INTERNAL = 99
} mrg_status;

typedef struct mrg_bundle mrg_bundle;
typedef struct mrg_session mrg_session;
typedef struct mrg_server mrg_server;

/* Message for the last failing call on this thread; never NULL. */
MRG_API const char* mrg_last_error(void);
MRG_API const char* mrg_status_name(mrg_status status);
MRG_API const char* mrg_version(void);

/* Strings returned through char** out-parameters are owned by the caller. */
MRG_API void mrg_string_free(char* s);

/* "trace", "debug", "info", "warn", "error", "critical" or "off". */
MRG_API mrg_status mrg_set_log_level(const char* level);

/* Lecture bundles */
MRG_API mrg_status mrg_bundle_load(const char* dir, mrg_bundle** out);
/* Writes a JSON array of findings, `[]` when the bundle is clean. */
MRG_API mrg_status mrg_bundle_validate_dir(const char* dir, char** findings_json);
MRG_API int64_t mrg_bundle_duration_ms(const mrg_bundle* bundle);
MRG_API void mrg_bundle_free(mrg_bundle* bundle);

/* Sessions */
MRG_API mrg_status mrg_session_create(const mrg_bundle* bundle, mrg_session** out);
/* `event_json` is `{"t_ms":..,"type":..,"payload":{..}}`, optionally with
 * "origin". On success `delta_json` (if non-NULL) receives the step's delta,
 * or NULL when nothing changed. */
MRG_API mrg_status mrg_session_apply_event_json(mrg_session* session, const char* event_json, char** delta_json);
MRG_API mrg_status mrg_session_advance(mrg_session* session, int64_t to_ms);
MRG_API int64_t mrg_session_clock_ms(const mrg_session* session);
MRG_API mrg_status mrg_session_digest(const mrg_session* session, char** hex);
MRG_API mrg_status mrg_session_state_json(const mrg_session* session, char** json);
/* `format` is "svg" or "structured". */
MRG_API mrg_status mrg_session_export(const mrg_session* session, const char* format, char** out);
MRG_API mrg_status mrg_session_write_trace(const mrg_session* session, const char* path);
MRG_API void mrg_session_free(mrg_session* session);

/* Replay */
typedef struct mrg_replay_report {
  uint64_t events_processed;
  char final_digest[65];
  double wall_time_ms;
  uint64_t effects_count;
} mrg_replay_report;

/* Replays a trace file into a fresh session. With `to_end` non-zero the clock
 * then runs to the end of the lecture. `session_out` may be NULL; otherwise it
 * receives the final session. */
MRG_API mrg_status mrg_replay(const mrg_bundle* bundle, const char* trace_path, int to_end,
                              mrg_replay_report* report, mrg_session** session_out);

/* Protocol server */
typedef struct mrg_server_options {
  const char* host;        /* NULL for 127.0.0.1 */
  uint16_t port;           /* 0 picks a free port */
  double speed;            /* <= 0 means 1.0 */
  int autostart;
  const char* record_path; /* NULL for none */
  int exit_on_end;
} mrg_server_options;

MRG_API void mrg_server_options_init(mrg_server_options* options);
MRG_API mrg_status mrg_server_create(const mrg_bundle* bundle, const mrg_server_options* options, mrg_server** out);
MRG_API uint16_t mrg_server_port(const mrg_server* server);
/* Blocks until the server stops. */
MRG_API mrg_status mrg_server_run(mrg_server* server);
/* Thread-safe. */
MRG_API void mrg_server_stop(mrg_server* server);
/* Engine latency after run(): p50, p99 and max in microseconds. */
MRG_API mrg_status mrg_server_latency(const mrg_server* server, double* p50_us, double* p99_us, double* max_us);
/* Digest of the hosted session; meaningful after run(). */
MRG_API mrg_status mrg_server_digest(const mrg_server* server, char** hex);
MRG_API void mrg_server_free(mrg_server* server);

#ifdef __cplusplus
}
#endif

#endif
