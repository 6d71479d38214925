#include "session/session.hpp"

#include <set>
#include <tuple>

#include <nlohmann/json.hpp>

#include "common/error.hpp"
#include "session/digest.hpp"

namespace marginalia::session {
namespace {

using nlohmann::json;
using input::Surface;
using input::SurfaceKind;
using notes::InkPoint;
using notes::Tool;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::optional<PanelKind> panel_of(const Surface& s) {
  if (s.kind == SurfaceKind::SlidesPanel) return PanelKind::Slides;
  if (s.kind == SurfaceKind::TranscriptsPanel) return PanelKind::Transcripts;
  return std::nullopt;
}

json optional_string(const std::optional<std::string>& s) {
  return s ? json(*s) : json(nullptr);
}

// What a client can see of the interaction state.
auto visible(const input::InteractionState& s, const notes::ToolState& tools,
             const std::optional<Surface>& highlighted) {
  return std::make_tuple(s.mode, s.attention, s.cursor, s.armed_button,
                         input::cursor_style(s, tools), highlighted);
}

}  // namespace

const char* to_string(PanelKind panel) {
  return panel == PanelKind::Slides ? "slides" : "transcripts";
}

const char* to_string(SyncMode sync) { return sync == SyncMode::Live ? "live" : "out_of_sync"; }

Surface surface_of(PanelKind panel) {
  return panel == PanelKind::Slides ? Surface::slides() : Surface::transcripts();
}

json to_json(const PanelState& p) {
  json overlay = json::object();
  for (const auto& [id, strokes] : p.overlay) {
    json list = json::array();
    for (const auto& s : strokes) list.push_back(notes::to_json(s));
    overlay[id] = std::move(list);
  }
  json open = json::object();
  for (const auto& [id, capture] : p.open_capture) open[id] = capture.value;
  json edits = json::object();
  for (const auto& [id, t] : p.last_overlay_edit_ms) edits[id] = t;
  return {{"panel", to_string(p.panel)},
          {"live_snapshot", optional_string(p.live_snapshot)},
          {"displayed_snapshot", optional_string(p.displayed_snapshot)},
          {"sync", to_string(p.sync)},
          {"displayed_is_live", p.displayed_is_live()},
          {"overlay", std::move(overlay)},
          {"open_capture", std::move(open)},
          {"last_overlay_edit_ms", std::move(edits)}};
}

json to_json(const FeedbackEffect& effect) {
  return std::visit(
      overloaded{
          [](const effect::GreenCheck& e) -> json {
            return {{"effect", "green_check"}, {"panel", to_string(e.panel)}};
          },
          [](const effect::GreenFlash& e) -> json {
            return {{"effect", "green_flash"}, {"panel", to_string(e.panel)}, {"snapshot_id", e.snapshot_id}};
          },
          [](const effect::ButtonFlash& e) -> json {
            return {{"effect", "button_flash"}, {"button", e.button.to_string()}};
          },
          [](const effect::PanelHighlight& e) -> json {
            return {{"effect", "panel_highlight"}, {"surface", e.surface.to_string()}};
          },
      },
      effect);
}

Session::Session(std::shared_ptr<const ingest::LectureBundle> bundle, SessionConfig config)
    : bundle_(std::move(bundle)), config_(config), document_(config.layout) {
  if (!bundle_) fail(ErrorCode::InvalidArgument, "session needs a lecture bundle");
  fsm_.gain = config_.pen_gain;
  fsm_.snap_margin = config_.snap_margin;
  slides_.panel = PanelKind::Slides;
  transcripts_.panel = PanelKind::Transcripts;
  document_.set_journaling(true);
  refresh_layout();
  advance_clock(0);
  take_changes();
}

StepResult Session::apply(InputEvent event) {
  if (event.t_ms < clock_ms_) {
    fail(ErrorCode::ClockRegression, "event at " + std::to_string(event.t_ms) +
                                         " ms precedes session clock " + std::to_string(clock_ms_));
  }
  const auto before = visible(interaction_, tools_, highlighted_);
  const std::uint64_t seq = event_log_.size() + 1;
  const Millis t = event.t_ms;
  event_log_.push_back({seq, event});

  advance_clock(t);
  Effects sink;
  std::visit(
      overloaded{
          [&](const event::Gaze& g) { run_transition(input::on_gaze(interaction_, {t, g.hit}), sink); },
          [&](const event::Pen& p) {
            run_transition(input::on_pen(interaction_, {t, p.phase, p.pos}, fsm_), sink);
          },
          [&](const event::Gesture& g) {
            run_transition(input::on_gesture(interaction_, {g.gesture, t}, tools_), sink);
          },
          [&](const event::AttentionChange& a) {
            run_transition(input::set_attention(interaction_, a.attention), sink);
          },
          [&](const event::TabletButton& b) {
            try {
              press_button(b.button);
            } catch (const Error& e) {
              pending_.errors.emplace_back(e.what());
            }
          },
          [](const event::Tick&) {},
      },
      event.payload);

  if (visible(interaction_, tools_, highlighted_) != before) pending_.interaction = true;
  return {seq, t, take_changes()};
}

void Session::run_transition(input::Transition transition, Effects& out) {
  interaction_ = std::move(transition.state);
  for (const auto& intent : transition.intents) {
    try {
      auto effects = apply_intent(intent);
      out.insert(out.end(), effects.begin(), effects.end());
    } catch (const Error& e) {
      pending_.errors.emplace_back(e.what());
    }
  }
}

Effects Session::advance_clock(Millis to_ms) {
  if (to_ms < clock_ms_) {
    fail(ErrorCode::ClockRegression,
         "cannot rewind clock from " + std::to_string(clock_ms_) + " to " + std::to_string(to_ms));
  }
  const Millis start = clock_ms_;
  const auto& slides = bundle_->slide_events;
  const auto& blocks = bundle_->transcript_blocks;
  for (;;) {
    const bool slide_due = released_slides_ < slides.size() && slides[released_slides_].t_ms <= to_ms;
    // Transcript blocks become available once fully spoken.
    const bool block_due = released_blocks_ < blocks.size() && blocks[released_blocks_].end_ms <= to_ms;
    if (!slide_due && !block_due) break;
    if (slide_due && (!block_due || slides[released_slides_].t_ms <= blocks[released_blocks_].end_ms)) {
      const Millis at = std::max(clock_ms_, slides[released_slides_].t_ms);
      clock_ms_ = at;
      ++released_slides_;
      release(PanelKind::Slides, ingest::slide_snapshot_id(released_slides_ - 1), at);
      refresh_layout();
      pending_.navigator = true;
    } else {
      const Millis at = std::max(clock_ms_, blocks[released_blocks_].end_ms);
      clock_ms_ = at;
      ++released_blocks_;
      release(PanelKind::Transcripts, blocks[released_blocks_ - 1].block_id, at);
    }
  }
  clock_ms_ = to_ms;
  if (clock_ms_ != start) pending_.clock = true;
  return {};
}

void Session::release(PanelKind kind, std::string snapshot_id, Millis /*at_ms*/) {
  PanelState& p = panel_mut(kind);
  p.live_snapshot = snapshot_id;
  if (!p.displayed_snapshot) {
    p.displayed_snapshot = std::move(snapshot_id);
  } else if (p.sync == SyncMode::Live) {
    // Evaluated with the clock parked at the release time, so the outcome
    // does not depend on how coarsely the clock is ticked.
    if (annotation_in_progress(kind)) {
      p.sync = SyncMode::OutOfSync;
    } else {
      p.displayed_snapshot = std::move(snapshot_id);
    }
  }
  mark_panel(kind);
}

bool Session::annotation_in_progress(PanelKind kind) const {
  const auto& s = interaction_;
  if (s.mode == input::Mode::PenDown && s.stroke_in_progress &&
      s.stroke_in_progress->surface == surface_of(kind)) {
    return true;
  }
  const PanelState& p = panel(kind);
  if (!p.displayed_snapshot) return false;
  auto it = p.last_overlay_edit_ms.find(*p.displayed_snapshot);
  return it != p.last_overlay_edit_ms.end() && clock_ms_ - it->second < config_.annotation_grace_ms;
}

Effects Session::apply_intent(const input::Intent& intent) {
  Effects out;
  std::visit(
      overloaded{
          [&](const input::intent::StartStroke& s) {
            if (ink_) {
              auto e = finish_ink();
              out.insert(out.end(), e.begin(), e.end());
            }
            InkBuilder ink{s.surface, tools_.active, std::nullopt, {}};
            notes::Point at = s.pos;
            if (auto kind = panel_of(s.surface)) {
              const auto& displayed = panel(*kind).displayed_snapshot;
              if (!displayed) return;  // nothing on the panel to annotate yet
              ink.snapshot = *displayed;
            } else if (s.surface.kind == SurfaceKind::NotesPanel ||
                       s.surface.kind == SurfaceKind::TabletDirect) {
              at = to_canvas(s.pos);
            } else {
              return;
            }
            const InkPoint point{at.x, at.y, s.t_ms};
            ink.points.push_back(point);
            ink_ = std::move(ink);
            if (ink_->tool == Tool::Eraser) {
              erase_at(*ink_, at);
            } else {
              pending_.preview.push_back({InkPreview::Kind::Start, ink_->surface, ink_->tool, point});
            }
          },
          [&](const input::intent::ExtendStroke& s) {
            if (!ink_) return;
            const notes::Point at = panel_of(ink_->surface) ? s.pos : to_canvas(s.pos);
            const InkPoint point{at.x, at.y, s.t_ms};
            ink_->points.push_back(point);
            if (ink_->tool == Tool::Eraser) {
              erase_at(*ink_, at);
            } else {
              pending_.preview.push_back({InkPreview::Kind::Extend, ink_->surface, ink_->tool, point});
            }
          },
          [&](const input::intent::EndStroke&) { out = finish_ink(); },
          [&](const input::intent::PressButton& p) { out = press_button(p.button); },
          [&](const input::intent::CaptureUnderCursor& c) {
            if (auto kind = panel_of(c.surface)) out = manual_capture(*kind);
          },
          [&](const input::intent::SwitchTool& s) {
            const auto before = tools_;
            tools_.select(s.tool);
            if (!(tools_ == before)) pending_.tools = true;
          },
          [&](const input::intent::CursorMoved& m) {
            if (!highlighted_ || !(*highlighted_ == m.surface)) {
              highlighted_ = m.surface;
              emit(out, effect::PanelHighlight{m.surface});
            }
          },
          [&](const input::intent::CursorHidden&) { highlighted_.reset(); },
      },
      intent);
  return out;
}

Effects Session::finish_ink() {
  if (!ink_) return {};
  InkBuilder ink = std::move(*ink_);
  ink_.reset();
  if (ink.tool == Tool::Eraser) return {};
  pending_.preview.push_back({InkPreview::Kind::End, ink.surface, ink.tool, ink.points.back()});
  if (auto kind = panel_of(ink.surface)) {
    return annotate(*kind, *ink.snapshot, ink.tool, std::move(ink.points));
  }
  document_.add_free_stroke(
      notes::Stroke::make(document_.next_stroke_id(), ink.tool, std::move(ink.points)));
  return {};
}

void Session::erase_at(const InkBuilder& ink, const notes::Point& pos) {
  std::vector<notes::StrokeId> removed;
  if (auto kind = panel_of(ink.surface)) {
    const PanelState& p = panel(*kind);
    auto it = p.overlay.find(*ink.snapshot);
    if (it == p.overlay.end()) return;
    const double r2 = config_.eraser_radius * config_.eraser_radius;
    for (const auto& s : it->second) {
      bool hit = false;
      if (s.points.size() == 1) {
        hit = notes::distance_sq(pos, {s.points[0].x, s.points[0].y}) <= r2;
      }
      for (std::size_t i = 1; i < s.points.size() && !hit; ++i) {
        hit = notes::segment_distance_sq(pos, {s.points[i - 1].x, s.points[i - 1].y},
                                         {s.points[i].x, s.points[i].y}) <= r2;
      }
      if (hit) removed.push_back(s.id);
    }
    if (removed.empty()) return;
    document_.remove_strokes(removed);
  } else {
    const notes::Point path[] = {pos};
    removed = document_.erase_stroke_at(path, config_.eraser_radius);
  }
  purge_overlays(removed);
}

void Session::purge_overlays(const std::vector<notes::StrokeId>& removed) {
  if (removed.empty()) return;
  const std::set<notes::StrokeId> ids(removed.begin(), removed.end());
  for (PanelKind kind : {PanelKind::Slides, PanelKind::Transcripts}) {
    PanelState& p = panel_mut(kind);
    bool changed = false;
    for (auto it = p.overlay.begin(); it != p.overlay.end();) {
      const auto n = std::erase_if(it->second, [&](const notes::Stroke& s) { return ids.count(s.id) > 0; });
      changed = changed || n > 0;
      it = it->second.empty() ? p.overlay.erase(it) : std::next(it);
    }
    if (changed) mark_panel(kind);
  }
}

Effects Session::annotate_snapshot(PanelKind kind, Tool tool, std::vector<InkPoint> points) {
  const auto& displayed = panel(kind).displayed_snapshot;
  if (!displayed) fail(ErrorCode::InvalidArgument, std::string(to_string(kind)) + " panel shows nothing yet");
  return annotate(kind, *displayed, tool, std::move(points));
}

Effects Session::annotate(PanelKind kind, const std::string& snapshot, Tool tool,
                          std::vector<InkPoint> points) {
  if (tool == Tool::Eraser) fail(ErrorCode::RejectEraserStroke, "eraser strokes are not stored");
  Effects out;
  PanelState& p = panel_mut(kind);
  auto stroke = notes::Stroke::make(document_.next_stroke_id(), tool, std::move(points));
  p.overlay[snapshot].push_back(stroke);
  if (auto open = p.open_capture.find(snapshot); open != p.open_capture.end()) {
    document_.append_annotation(open->second, std::move(stroke));
  } else {
    const auto capture_kind =
        kind == PanelKind::Slides ? notes::CaptureKind::Slide : notes::CaptureKind::Transcript;
    const auto& c =
        document_.place_capture(capture_kind, snapshot, aspect_ratio(kind), clock_ms_, {std::move(stroke)});
    p.open_capture[snapshot] = c.id;
    emit(out, effect::GreenCheck{kind});
  }
  p.last_overlay_edit_ms[snapshot] = clock_ms_;
  mark_panel(kind);
  return out;
}

Effects Session::manual_capture(PanelKind kind) {
  Effects out;
  PanelState& p = panel_mut(kind);
  if (!p.displayed_snapshot) return out;
  const std::string snapshot = *p.displayed_snapshot;
  // Annotations made so far already live in the open capture; the squeeze
  // closes it and files a clean copy of the snapshot.
  p.overlay.erase(snapshot);
  p.open_capture.erase(snapshot);
  const auto capture_kind =
      kind == PanelKind::Slides ? notes::CaptureKind::Slide : notes::CaptureKind::Transcript;
  document_.place_capture(capture_kind, snapshot, aspect_ratio(kind), clock_ms_);
  emit(out, effect::GreenFlash{kind, snapshot});
  mark_panel(kind);
  return out;
}

Effects Session::press_button(const input::ButtonId& button) {
  using K = input::ButtonKind;
  if (button.kind == K::SlideThumb &&
      (button.thumb < 0 || static_cast<std::size_t>(button.thumb) >= released_slides_)) {
    fail(ErrorCode::UnknownButton, "no released slide behind " + button.to_string());
  }
  Effects out;
  auto append = [&](Effects e) { out.insert(out.end(), e.begin(), e.end()); };
  auto step_transcript = [&](int direction) {
    const auto& displayed = transcripts_.displayed_snapshot;
    if (!displayed) return;
    const auto ord = bundle_->block_ordinal(*displayed);
    if (!ord) return;
    const auto next = static_cast<long long>(*ord) + direction;
    if (next < 0 || next >= static_cast<long long>(released_blocks_)) return;
    append(navigate(PanelKind::Transcripts, bundle_->transcript_blocks[next].block_id));
  };
  auto scroll_notes = [&](notes::ScrollDirection dir) { document_.scroll_to_adjacent_capture(dir); };
  auto select_tool = [&](Tool tool) {
    const auto before = tools_;
    tools_.select(tool);
    if (!(tools_ == before)) pending_.tools = true;
  };

  switch (button.kind) {
    case K::SlidesLive: append(go_live(PanelKind::Slides)); break;
    case K::TranscriptsLive: append(go_live(PanelKind::Transcripts)); break;
    case K::SlideThumb:
      append(navigate(PanelKind::Slides, ingest::slide_snapshot_id(static_cast<std::size_t>(button.thumb))));
      break;
    case K::TranscriptsScrollUp: step_transcript(-1); break;
    case K::TranscriptsScrollDown: step_transcript(+1); break;
    case K::NotesScrollUp: scroll_notes(notes::ScrollDirection::Prev); break;
    case K::NotesScrollDown: scroll_notes(notes::ScrollDirection::Next); break;
    case K::ToolPen: select_tool(Tool::Pen); break;
    case K::ToolHighlighter: select_tool(Tool::Highlighter); break;
    case K::ToolEraser: select_tool(Tool::Eraser); break;
  }
  emit(out, effect::ButtonFlash{button});
  return out;
}

Effects Session::navigate(PanelKind kind, const std::string& snapshot_id) {
  if (!is_released(kind, snapshot_id)) {
    fail(ErrorCode::UnreleasedSnapshot, snapshot_id + " has not been released");
  }
  PanelState& p = panel_mut(kind);
  const SyncMode sync = snapshot_id == p.live_snapshot ? SyncMode::Live : SyncMode::OutOfSync;
  if (p.displayed_snapshot != snapshot_id || p.sync != sync) {
    p.displayed_snapshot = snapshot_id;
    p.sync = sync;
    mark_panel(kind);
  }
  return {};
}

Effects Session::go_live(PanelKind kind) {
  PanelState& p = panel_mut(kind);
  if (p.displayed_snapshot != p.live_snapshot || p.sync != SyncMode::Live) {
    p.displayed_snapshot = p.live_snapshot;
    p.sync = SyncMode::Live;
    mark_panel(kind);
  }
  return {};
}

bool Session::is_released(PanelKind kind, const std::string& snapshot_id) const {
  if (kind == PanelKind::Slides) {
    const auto ord = ingest::slide_ordinal(snapshot_id);
    return ord && *ord < released_slides_;
  }
  const auto ord = bundle_->block_ordinal(snapshot_id);
  return ord && *ord < released_blocks_;
}

void Session::mark_panel(PanelKind kind) {
  (kind == PanelKind::Slides ? pending_.slides : pending_.transcripts) = true;
}

void Session::emit(Effects& out, FeedbackEffect effect) {
  out.push_back(effect);
  pending_.effects.push_back(std::move(effect));
}

double Session::aspect_ratio(PanelKind kind) const {
  return kind == PanelKind::Slides ? bundle_->slide_aspect_ratio : config_.transcript_aspect_ratio;
}

void Session::refresh_layout() {
  std::vector<int> thumbs;
  const std::size_t n = released_slides_;
  const std::size_t first = n > config_.navigator_size ? n - config_.navigator_size : 0;
  for (std::size_t i = first; i < n; ++i) thumbs.push_back(static_cast<int>(i));
  fsm_.layout = input::default_button_layout(thumbs);
}

notes::Point Session::to_canvas(const notes::Point& p) const {
  return {p.x, document_.viewport_top_y() + p.y * config_.notes_view_height};
}

std::vector<NavigatorThumb> Session::navigator() const {
  std::vector<NavigatorThumb> out;
  const std::size_t n = released_slides_;
  const std::size_t first = n > config_.navigator_size ? n - config_.navigator_size : 0;
  for (std::size_t i = first; i < n; ++i) {
    auto id = ingest::slide_snapshot_id(i);
    const bool displayed = slides_.displayed_snapshot == id;
    out.push_back({i, std::move(id), displayed});
  }
  return out;
}

StepChanges Session::take_changes() {
  collect_doc_ops();
  return std::exchange(pending_, {});
}

void Session::collect_doc_ops() {
  auto ops = document_.take_journal();
  pending_.doc_ops.insert(pending_.doc_ops.end(), std::make_move_iterator(ops.begin()),
                          std::make_move_iterator(ops.end()));
}

json Session::canonical_state() const {
  return {{"clock_ms", clock_ms_},
          {"document", document_.to_json()},
          {"slides", to_json(slides_)},
          {"transcripts", to_json(transcripts_)},
          {"tools", {{"active", notes::to_string(tools_.active)}, {"last_drawing", notes::to_string(tools_.last_drawing)}}}};
}

std::string Session::digest() const { return sha256_hex(canonical_state().dump()); }

json Session::interaction_view() const {
  const auto& s = interaction_;
  json cursor = nullptr;
  if (s.cursor) cursor = {{"surface", s.cursor->surface.to_string()}, {"x", s.cursor->pos.x}, {"y", s.cursor->pos.y}};
  return {{"mode", input::to_string(s.mode)},
          {"attention", input::to_string(s.attention)},
          {"cursor", std::move(cursor)},
          {"armed_button", s.armed_button ? json(s.armed_button->to_string()) : json(nullptr)},
          {"cursor_style", input::to_string(input::cursor_style(s, tools_))},
          {"highlight", highlighted_ ? json(highlighted_->to_string()) : json(nullptr)}};
}

json Session::navigator_json() const {
  json out = json::array();
  for (const auto& t : navigator()) {
    out.push_back({{"ordinal", t.ordinal}, {"snapshot_id", t.snapshot_id}, {"displayed", t.displayed}});
  }
  return out;
}

}  // namespace marginalia::session
