#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "input/types.hpp"

namespace marginalia::input {

enum class Edge { Left, Right, Top, Bottom };
const char* to_string(Edge edge);

/// A button docked along one edge of a spatial panel. The hover cursor
/// snaps onto it when it comes within the snap margin of that edge inside
/// [span_lo, span_hi) along the edge.
struct ButtonAnchor {
  ButtonId button;
  SurfaceKind host = SurfaceKind::SlidesPanel;
  Edge edge = Edge::Right;
  double span_lo = 0;
  double span_hi = 0;
};

using ButtonLayout = std::vector<ButtonAnchor>;

/// Button inventory docked around the panels. `thumbs` are the slide
/// ordinals currently shown in the slide navigator, oldest first.
ButtonLayout default_button_layout(std::span<const int> thumbs);

struct FsmConfig {
  double gain = 1.0;          // surface units per tablet unit
  double snap_margin = 0.02;  // surface units
  ButtonLayout layout = default_button_layout({});
};

struct Cursor {
  Surface surface;
  Point pos;
  friend bool operator==(const Cursor&, const Cursor&) = default;
};

struct StrokeInProgress {
  Surface surface;
  Point last;
  std::size_t points = 0;
  friend bool operator==(const StrokeInProgress&, const StrokeInProgress&) = default;
};

struct InteractionState {
  Mode mode = Mode::Idle;
  Attention attention = Attention::Indirect;
  std::optional<Cursor> cursor;
  std::optional<ButtonId> armed_button;
  std::optional<StrokeInProgress> stroke_in_progress;
  std::optional<Point> last_pen_pos;

  /// Latest gaze hit; where the cursor appears on hover entry.
  std::optional<SurfaceHit> gaze_seed;
  /// While the cursor sits on a docked button: the clamped position on the
  /// host panel that pen motion keeps steering.
  std::optional<Cursor> anchor;
  /// Direct (heads-down) ink in progress on the tablet.
  std::optional<StrokeInProgress> direct_stroke;

  friend bool operator==(const InteractionState&, const InteractionState&) = default;
};

enum class CursorStyle { Hidden, Pen, Highlighter, Eraser, ButtonHover, ButtonPressed };
const char* to_string(CursorStyle style);
CursorStyle cursor_style(const InteractionState& state, const notes::ToolState& tools);

/// Result of one FSM step. `modes` lists every mode the step passed
/// through, starting with the mode before the step, so a lift straight from
/// pen-down to away reads PenDown, Hover, Idle.
struct Transition {
  InteractionState state;
  std::vector<Intent> intents;
  std::array<Mode, 3> modes{};
  std::uint8_t mode_count = 0;

  std::span<const Mode> mode_path() const { return {modes.data(), mode_count}; }
};

Transition on_gaze(const InteractionState& state, const GazeSample& sample);
Transition on_pen(const InteractionState& state, const PenSample& sample, const FsmConfig& config);
Transition on_gesture(const InteractionState& state, const PenGesture& gesture,
                      const notes::ToolState& tools);
Transition set_attention(const InteractionState& state, Attention attention);

}  // namespace marginalia::input
