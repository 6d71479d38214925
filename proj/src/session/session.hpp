#pragma once

#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ingest/bundle.hpp"
#include "input/gaze_pen.hpp"
#include "notes/document.hpp"
#include "session/events.hpp"

namespace marginalia::session {

enum class PanelKind { Slides, Transcripts };
enum class SyncMode { Live, OutOfSync };

const char* to_string(PanelKind panel);
const char* to_string(SyncMode sync);
input::Surface surface_of(PanelKind panel);

struct PanelState {
  PanelKind panel = PanelKind::Slides;
  std::optional<std::string> live_snapshot;
  std::optional<std::string> displayed_snapshot;
  SyncMode sync = SyncMode::Live;
  std::map<std::string, std::vector<notes::Stroke>> overlay;  // capture-local coords
  std::map<std::string, notes::CaptureId> open_capture;
  std::map<std::string, Millis> last_overlay_edit_ms;

  bool displayed_is_live() const { return displayed_snapshot == live_snapshot; }
  friend bool operator==(const PanelState&, const PanelState&) = default;
};

nlohmann::json to_json(const PanelState& panel);

namespace effect {
struct GreenCheck { PanelKind panel; };
struct GreenFlash { PanelKind panel; std::string snapshot_id; };
struct ButtonFlash { input::ButtonId button; };
struct PanelHighlight { input::Surface surface; };
}  // namespace effect

using FeedbackEffect =
    std::variant<effect::GreenCheck, effect::GreenFlash, effect::ButtonFlash, effect::PanelHighlight>;
using Effects = std::vector<FeedbackEffect>;

nlohmann::json to_json(const FeedbackEffect& effect);

/// Live ink for the UI to draw while a stroke is still being made.
struct InkPreview {
  enum class Kind { Start, Extend, End } kind = Kind::Start;
  input::Surface surface;
  notes::Tool tool = notes::Tool::Pen;
  notes::InkPoint point;
};

/// Everything one engine step touched, for building a delta.
struct StepChanges {
  bool clock = false;
  bool slides = false;
  bool transcripts = false;
  bool tools = false;
  bool interaction = false;
  bool navigator = false;
  std::vector<notes::DocOp> doc_ops;
  std::vector<InkPreview> preview;
  Effects effects;
  std::vector<std::string> errors;  // rejected intents, e.g. UnknownButton

  bool state_changed() const {
    return clock || slides || transcripts || tools || interaction || navigator || !doc_ops.empty() ||
           !preview.empty();
  }
  bool empty() const { return !state_changed() && effects.empty(); }
};

struct StepResult {
  std::uint64_t seq = 0;
  Millis t_ms = 0;
  StepChanges changes;
};

struct SessionConfig {
  double pen_gain = 1.0;
  double snap_margin = 0.02;
  notes::LayoutConfig layout;
  Millis annotation_grace_ms = 2000;
  double eraser_radius = 0.01;
  /// Canvas height visible on the tablet and the Notes Panel (portrait 3:4).
  double notes_view_height = 4.0 / 3.0;
  std::size_t navigator_size = 6;
  /// Width / height of a transcript capture box.
  double transcript_aspect_ratio = 5.0;
};

struct NavigatorThumb {
  std::size_t ordinal = 0;
  std::string snapshot_id;
  bool displayed = false;
};

/// The authoritative lecture session. One instance per lecture; every
/// mutation happens through the methods below on a single thread.
class Session {
 public:
  explicit Session(std::shared_ptr<const ingest::LectureBundle> bundle, SessionConfig config = {});

  /// One engine step: logs the event, advances the clock to its timestamp,
  /// runs it through the Gaze+Pen machine and dispatches the intents.
  /// Throws Error(ClockRegression) without logging if t_ms < clock.
  StepResult apply(InputEvent event);

  Effects advance_clock(Millis to_ms);
  bool annotation_in_progress(PanelKind panel) const;
  Effects apply_intent(const input::Intent& intent);
  /// Adds a stroke (capture-local points) to the displayed snapshot.
  Effects annotate_snapshot(PanelKind panel, notes::Tool tool, std::vector<notes::InkPoint> points);
  Effects manual_capture(PanelKind panel);
  Effects press_button(const input::ButtonId& button);
  Effects navigate(PanelKind panel, const std::string& snapshot_id);
  Effects go_live(PanelKind panel);

  /// SHA-256 over the canonical state, lowercase hex.
  std::string digest() const;
  /// Document, both panels, tools and clock; the digest input.
  nlohmann::json canonical_state() const;
  /// Cursor, mode and attention for rendering; not part of the digest.
  nlohmann::json interaction_view() const;
  nlohmann::json navigator_json() const;

  Millis clock_ms() const { return clock_ms_; }
  const ingest::LectureBundle& bundle() const { return *bundle_; }
  std::shared_ptr<const ingest::LectureBundle> bundle_ptr() const { return bundle_; }
  const SessionConfig& config() const { return config_; }
  const PanelState& panel(PanelKind kind) const {
    return kind == PanelKind::Slides ? slides_ : transcripts_;
  }
  const notes::NoteDocument& document() const { return document_; }
  const notes::ToolState& tools() const { return tools_; }
  const input::InteractionState& interaction() const { return interaction_; }
  const input::FsmConfig& fsm_config() const { return fsm_; }
  const std::vector<LoggedEvent>& event_log() const { return event_log_; }
  std::vector<NavigatorThumb> navigator() const;
  std::size_t released_slides() const { return released_slides_; }
  std::size_t released_blocks() const { return released_blocks_; }

  /// Feedback produced so far and not yet taken.
  Effects take_effects() { return std::exchange(pending_.effects, {}); }
  /// Changes accumulated by direct operation calls since the last step.
  StepChanges take_changes();

 private:
  struct InkBuilder {
    input::Surface surface;
    notes::Tool tool = notes::Tool::Pen;
    std::optional<std::string> snapshot;  // snapshot panels only
    std::vector<notes::InkPoint> points;  // surface / capture-local coords
  };

  PanelState& panel_mut(PanelKind kind) { return kind == PanelKind::Slides ? slides_ : transcripts_; }
  void mark_panel(PanelKind kind);
  void emit(Effects& out, FeedbackEffect effect);
  double aspect_ratio(PanelKind kind) const;
  void release(PanelKind kind, std::string snapshot_id, Millis at_ms);
  bool is_released(PanelKind kind, const std::string& snapshot_id) const;
  void refresh_layout();
  notes::Point to_canvas(const notes::Point& surface_pos) const;
  void erase_at(const InkBuilder& ink, const notes::Point& pos);
  void purge_overlays(const std::vector<notes::StrokeId>& removed);
  Effects annotate(PanelKind panel, const std::string& snapshot, notes::Tool tool,
                   std::vector<notes::InkPoint> points);
  Effects finish_ink();
  void run_transition(input::Transition transition, Effects& out);
  void collect_doc_ops();

  std::shared_ptr<const ingest::LectureBundle> bundle_;
  SessionConfig config_;
  input::FsmConfig fsm_;
  Millis clock_ms_ = 0;
  std::size_t released_slides_ = 0;
  std::size_t released_blocks_ = 0;
  PanelState slides_;
  PanelState transcripts_;
  notes::NoteDocument document_;
  notes::ToolState tools_;
  input::InteractionState interaction_;
  std::optional<input::Surface> highlighted_;
  std::optional<InkBuilder> ink_;
  std::vector<LoggedEvent> event_log_;
  StepChanges pending_;
};

}  // namespace marginalia::session
