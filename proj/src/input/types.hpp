#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "notes/document.hpp"
#include "notes/geometry.hpp"

namespace marginalia::input {

using notes::Point;

enum class ButtonKind {
  SlidesLive,
  TranscriptsLive,
  TranscriptsScrollUp,
  TranscriptsScrollDown,
  NotesScrollUp,
  NotesScrollDown,
  ToolPen,
  ToolHighlighter,
  ToolEraser,
  SlideThumb,
};

struct ButtonId {
  ButtonKind kind = ButtonKind::SlidesLive;
  int thumb = 0;  // slide event ordinal, SlideThumb only

  std::string to_string() const;
  /// "slides_live", "notes_scroll_down", "slide_thumb:3", ...
  static std::optional<ButtonId> parse(std::string_view text);

  friend auto operator<=>(const ButtonId&, const ButtonId&) = default;
};

enum class SurfaceKind { SlidesPanel, TranscriptsPanel, NotesPanel, Button, TabletDirect };

struct Surface {
  SurfaceKind kind = SurfaceKind::SlidesPanel;
  ButtonId button;  // meaningful when kind == Button

  static Surface slides() { return {SurfaceKind::SlidesPanel, {}}; }
  static Surface transcripts() { return {SurfaceKind::TranscriptsPanel, {}}; }
  static Surface notes() { return {SurfaceKind::NotesPanel, {}}; }
  static Surface tablet() { return {SurfaceKind::TabletDirect, {}}; }
  static Surface of(ButtonId b) { return {SurfaceKind::Button, b}; }

  bool is_button() const { return kind == SurfaceKind::Button; }
  bool is_panel() const {
    return kind == SurfaceKind::SlidesPanel || kind == SurfaceKind::TranscriptsPanel ||
           kind == SurfaceKind::NotesPanel;
  }
  bool is_snapshot_panel() const {
    return kind == SurfaceKind::SlidesPanel || kind == SurfaceKind::TranscriptsPanel;
  }

  /// "slides", "transcripts", "notes", "tablet", "button:<id>".
  std::string to_string() const;
  static std::optional<Surface> parse(std::string_view text);

  friend bool operator==(const Surface& a, const Surface& b) {
    return a.kind == b.kind && (a.kind != SurfaceKind::Button || a.button == b.button);
  }
};

struct SurfaceHit {
  Surface surface;
  Point pos;  // surface-normalized [0,1]^2
  friend bool operator==(const SurfaceHit&, const SurfaceHit&) = default;
};

struct GazeSample {
  Millis t_ms = 0;
  std::optional<SurfaceHit> hit;
};

enum class PenPhase { Away, Hover, Contact };

struct PenSample {
  Millis t_ms = 0;
  PenPhase phase = PenPhase::Away;
  std::optional<Point> tablet_pos;  // present iff phase != Away
};

enum class Gesture { DoubleTap, Squeeze };

struct PenGesture {
  Gesture kind = Gesture::DoubleTap;
  Millis t_ms = 0;
};

enum class Mode { Idle, Hover, PenDown };
enum class Attention { Direct, Indirect };

const char* to_string(Mode mode);
const char* to_string(Attention attention);
const char* to_string(PenPhase phase);
const char* to_string(Gesture gesture);

namespace intent {
struct StartStroke { Surface surface; Point pos; Millis t_ms = 0; };
struct ExtendStroke { Point pos; Millis t_ms = 0; };
struct EndStroke {};
struct PressButton { ButtonId button; };
struct CaptureUnderCursor { Surface surface; };
struct SwitchTool { notes::Tool tool = notes::Tool::Pen; };
struct CursorMoved { Surface surface; Point pos; };
struct CursorHidden {};
}  // namespace intent

using Intent = std::variant<intent::StartStroke, intent::ExtendStroke, intent::EndStroke,
                            intent::PressButton, intent::CaptureUnderCursor, intent::SwitchTool,
                            intent::CursorMoved, intent::CursorHidden>;

}  // namespace marginalia::input
