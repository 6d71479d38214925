#include "input/gaze_pen.hpp"

#include <algorithm>

namespace marginalia::input {
namespace {

Point clamp_unit(Point p) {
  return {std::clamp(p.x, 0.0, 1.0), std::clamp(p.y, 0.0, 1.0)};
}

double edge_distance(Edge edge, Point p) {
  switch (edge) {
    case Edge::Left: return p.x;
    case Edge::Right: return 1.0 - p.x;
    case Edge::Top: return p.y;
    case Edge::Bottom: return 1.0 - p.y;
  }
  return 1.0;
}

double along_edge(Edge edge, Point p) {
  return (edge == Edge::Left || edge == Edge::Right) ? p.y : p.x;
}

Point anchor_point(const ButtonAnchor& a) {
  const double mid = (a.span_lo + a.span_hi) / 2.0;
  switch (a.edge) {
    case Edge::Left: return {0.0, mid};
    case Edge::Right: return {1.0, mid};
    case Edge::Top: return {mid, 0.0};
    case Edge::Bottom: return {mid, 1.0};
  }
  return {0.5, 0.5};
}

const ButtonAnchor* snap_target(const FsmConfig& config, SurfaceKind host, Point p) {
  for (const auto& a : config.layout) {
    if (a.host != host) continue;
    const double along = along_edge(a.edge, p);
    if (edge_distance(a.edge, p) <= config.snap_margin && along >= a.span_lo && along < a.span_hi) {
      return &a;
    }
  }
  return nullptr;
}

const ButtonAnchor* find_anchor(const FsmConfig& config, const ButtonId& b) {
  for (const auto& a : config.layout) {
    if (a.button == b) return &a;
  }
  return nullptr;
}

constexpr Point kButtonCentre{0.5, 0.5};

class Step {
 public:
  explicit Step(const InteractionState& s) {
    t_.state = s;
    t_.modes[0] = s.mode;
    t_.mode_count = 1;
  }

  InteractionState& state() { return t_.state; }

  void go(Mode m) {
    if (t_.state.mode == m) return;
    t_.state.mode = m;
    t_.modes[t_.mode_count++] = m;
  }

  void emit(Intent i) { t_.intents.push_back(std::move(i)); }

  Transition done() { return std::move(t_); }

 private:
  Transition t_;
};

// Place the cursor where the gaze seed points.
void reveal_cursor(Step& step, const FsmConfig& config) {
  auto& s = step.state();
  const SurfaceHit& seed = *s.gaze_seed;
  s.cursor = Cursor{seed.surface, seed.surface.is_button() ? kButtonCentre : seed.pos};
  s.anchor.reset();
  if (seed.surface.is_button()) {
    if (const auto* a = find_anchor(config, seed.surface.button)) {
      s.anchor = Cursor{Surface{a->host, {}}, anchor_point(*a)};
    }
  }
  step.go(Mode::Hover);
  step.emit(intent::CursorMoved{s.cursor->surface, s.cursor->pos});
}

void hover_move(Step& step, Point delta, const FsmConfig& config) {
  auto& s = step.state();
  if (!s.cursor) return;
  Cursor host;
  if (s.cursor->surface.is_button()) {
    if (!s.anchor) return;  // button without a dock position: stays put
    host = *s.anchor;
  } else {
    host = *s.cursor;
  }
  host.pos = clamp_unit({host.pos.x + config.gain * delta.x, host.pos.y + config.gain * delta.y});

  Cursor next = host;
  s.anchor.reset();
  if (const auto* a = snap_target(config, host.surface.kind, host.pos)) {
    next = Cursor{Surface::of(a->button), kButtonCentre};
    s.anchor = host;
  }
  if (next == *s.cursor) return;
  s.cursor = next;
  step.emit(intent::CursorMoved{next.surface, next.pos});
}

void touch_down(Step& step, Millis t_ms) {
  auto& s = step.state();
  step.go(Mode::PenDown);
  if (s.cursor->surface.is_button()) {
    s.armed_button = s.cursor->surface.button;
    step.emit(intent::PressButton{s.cursor->surface.button});
  } else if (s.cursor->surface.is_panel()) {
    s.stroke_in_progress = StrokeInProgress{s.cursor->surface, s.cursor->pos, 1};
    step.emit(intent::StartStroke{s.cursor->surface, s.cursor->pos, t_ms});
  }
}

void contact_move(Step& step, Point delta, Millis t_ms, const FsmConfig& config) {
  auto& s = step.state();
  if (!s.stroke_in_progress) return;  // pressing a button: ignore drift
  const Point next = clamp_unit(
      {s.cursor->pos.x + config.gain * delta.x, s.cursor->pos.y + config.gain * delta.y});
  if (next == s.cursor->pos) return;
  s.cursor->pos = next;
  s.stroke_in_progress->last = next;
  ++s.stroke_in_progress->points;
  step.emit(intent::ExtendStroke{next, t_ms});
}

void lift_to_hover(Step& step) {
  auto& s = step.state();
  if (s.stroke_in_progress) step.emit(intent::EndStroke{});
  s.stroke_in_progress.reset();
  s.armed_button.reset();
  step.go(Mode::Hover);
}

void lift_to_idle(Step& step) {
  auto& s = step.state();
  if (s.mode == Mode::PenDown) lift_to_hover(step);
  s.cursor.reset();
  s.anchor.reset();
  s.last_pen_pos.reset();
  step.go(Mode::Idle);
  step.emit(intent::CursorHidden{});
}

Transition direct_pen(const InteractionState& state, const PenSample& sample) {
  Step step(state);
  auto& s = step.state();
  if (sample.phase == PenPhase::Contact) {
    const Point pos = clamp_unit(*sample.tablet_pos);
    if (!s.direct_stroke) {
      s.direct_stroke = StrokeInProgress{Surface::tablet(), pos, 1};
      step.emit(intent::StartStroke{Surface::tablet(), pos, sample.t_ms});
    } else if (!(pos == s.direct_stroke->last)) {
      s.direct_stroke->last = pos;
      ++s.direct_stroke->points;
      step.emit(intent::ExtendStroke{pos, sample.t_ms});
    }
  } else if (s.direct_stroke) {
    s.direct_stroke.reset();
    step.emit(intent::EndStroke{});
  }
  s.last_pen_pos = sample.tablet_pos;
  return step.done();
}

}  // namespace

const char* to_string(Edge edge) {
  switch (edge) {
    case Edge::Left: return "left";
    case Edge::Right: return "right";
    case Edge::Top: return "top";
    case Edge::Bottom: return "bottom";
  }
  return "right";
}

ButtonLayout default_button_layout(std::span<const int> thumbs) {
  using K = ButtonKind;
  ButtonLayout layout{
      {{K::SlidesLive, 0}, SurfaceKind::SlidesPanel, Edge::Right, 0.0, 0.15},
      {{K::TranscriptsLive, 0}, SurfaceKind::TranscriptsPanel, Edge::Right, 0.0, 0.15},
      {{K::TranscriptsScrollUp, 0}, SurfaceKind::TranscriptsPanel, Edge::Right, 0.35, 0.5},
      {{K::TranscriptsScrollDown, 0}, SurfaceKind::TranscriptsPanel, Edge::Right, 0.5, 0.65},
      {{K::NotesScrollUp, 0}, SurfaceKind::NotesPanel, Edge::Left, 0.0, 0.15},
      {{K::NotesScrollDown, 0}, SurfaceKind::NotesPanel, Edge::Left, 0.15, 0.3},
      {{K::ToolPen, 0}, SurfaceKind::NotesPanel, Edge::Left, 0.45, 0.6},
      {{K::ToolHighlighter, 0}, SurfaceKind::NotesPanel, Edge::Left, 0.6, 0.75},
      {{K::ToolEraser, 0}, SurfaceKind::NotesPanel, Edge::Left, 0.75, 0.9},
  };
  // Navigator strip along the bottom of the slides panel, six slots.
  constexpr double kSlot = 1.0 / 6.0;
  for (std::size_t i = 0; i < thumbs.size() && i < 6; ++i) {
    layout.push_back({{K::SlideThumb, thumbs[i]}, SurfaceKind::SlidesPanel, Edge::Bottom,
                      static_cast<double>(i) * kSlot, static_cast<double>(i + 1) * kSlot});
  }
  return layout;
}

const char* to_string(CursorStyle style) {
  switch (style) {
    case CursorStyle::Hidden: return "hidden";
    case CursorStyle::Pen: return "pen";
    case CursorStyle::Highlighter: return "highlighter";
    case CursorStyle::Eraser: return "eraser";
    case CursorStyle::ButtonHover: return "button_hover";
    case CursorStyle::ButtonPressed: return "button_pressed";
  }
  return "hidden";
}

CursorStyle cursor_style(const InteractionState& state, const notes::ToolState& tools) {
  if (!state.cursor) return CursorStyle::Hidden;
  if (state.cursor->surface.is_button()) {
    return state.armed_button ? CursorStyle::ButtonPressed : CursorStyle::ButtonHover;
  }
  switch (tools.active) {
    case notes::Tool::Pen: return CursorStyle::Pen;
    case notes::Tool::Highlighter: return CursorStyle::Highlighter;
    case notes::Tool::Eraser: return CursorStyle::Eraser;
  }
  return CursorStyle::Pen;
}

Transition on_gaze(const InteractionState& state, const GazeSample& sample) {
  Step step(state);
  // Only the seed is recorded; the cursor itself never follows gaze.
  if (sample.hit && sample.hit->surface.kind != SurfaceKind::TabletDirect) {
    step.state().gaze_seed = SurfaceHit{sample.hit->surface, clamp_unit(sample.hit->pos)};
  }
  return step.done();
}

Transition on_pen(const InteractionState& state, const PenSample& sample, const FsmConfig& config) {
  if (sample.phase != PenPhase::Away && !sample.tablet_pos) {
    return Step(state).done();  // malformed; protocol layer rejects these earlier
  }
  if (state.attention == Attention::Direct) return direct_pen(state, sample);

  Step step(state);
  auto& s = step.state();
  const auto delta = [&]() -> Point {
    if (!s.last_pen_pos || !sample.tablet_pos) return {0, 0};
    return {sample.tablet_pos->x - s.last_pen_pos->x, sample.tablet_pos->y - s.last_pen_pos->y};
  };

  switch (sample.phase) {
    case PenPhase::Away:
      if (s.mode != Mode::Idle) lift_to_idle(step);
      break;

    case PenPhase::Hover:
      if (s.mode == Mode::Idle) {
        if (!s.gaze_seed) break;  // nothing to reveal yet
        reveal_cursor(step, config);
      } else if (s.mode == Mode::Hover) {
        hover_move(step, delta(), config);
      } else {
        lift_to_hover(step);  // cursor stays at the stroke end
      }
      break;

    case PenPhase::Contact:
      if (s.mode == Mode::Idle) {
        if (!s.gaze_seed) break;
        reveal_cursor(step, config);
        touch_down(step, sample.t_ms);
      } else if (s.mode == Mode::Hover) {
        hover_move(step, delta(), config);
        touch_down(step, sample.t_ms);
      } else {
        contact_move(step, delta(), sample.t_ms, config);
      }
      break;
  }
  s.last_pen_pos = s.mode == Mode::Idle ? std::nullopt : sample.tablet_pos;
  return step.done();
}

Transition on_gesture(const InteractionState& state, const PenGesture& gesture,
                      const notes::ToolState& tools) {
  Step step(state);
  const auto& s = step.state();
  if (gesture.kind == Gesture::DoubleTap) {
    step.emit(intent::SwitchTool{tools.double_tap_target()});
    return step.done();
  }
  if (s.attention != Attention::Indirect) return step.done();
  std::optional<Surface> target;
  if (s.mode == Mode::Hover && s.cursor) {
    target = s.cursor->surface;
  } else if (s.mode == Mode::Idle && s.gaze_seed) {
    target = s.gaze_seed->surface;
  }
  if (target && target->is_snapshot_panel()) step.emit(intent::CaptureUnderCursor{*target});
  return step.done();
}

Transition set_attention(const InteractionState& state, Attention attention) {
  Step step(state);
  auto& s = step.state();
  if (s.attention == attention) return step.done();

  if (attention == Attention::Direct) {
    if (s.mode != Mode::Idle) lift_to_idle(step);
  } else {
    if (s.direct_stroke) step.emit(intent::EndStroke{});
    s.direct_stroke.reset();
    s.gaze_seed.reset();  // wait for a fresh look at the scene
  }
  s.attention = attention;
  s.last_pen_pos.reset();
  return step.done();
}

}  // namespace marginalia::input
