#include "notes/document.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include <nlohmann/json.hpp>

#include "common/error.hpp"

namespace marginalia::notes {
namespace {

using nlohmann::json;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

json rect_to_json(const Rect& r) {
  return {{"x", r.x}, {"y", r.y}, {"width", r.width}, {"height", r.height}};
}

Rect rect_from_json(const json& j) {
  return {j.at("x").get<double>(), j.at("y").get<double>(), j.at("width").get<double>(),
          j.at("height").get<double>()};
}

CaptureKind kind_from_string(const std::string& s) {
  if (s == "slide") return CaptureKind::Slide;
  if (s == "transcript") return CaptureKind::Transcript;
  fail(ErrorCode::InvalidArgument, "unknown capture kind: " + s);
}

json capture_to_json(const Capture& c) {
  json annotations = json::array();
  for (const auto& s : c.annotations) annotations.push_back(to_json(s));
  return {{"type", "capture"},
          {"capture_id", c.id.value},
          {"kind", to_string(c.kind)},
          {"snapshot_id", c.snapshot_id},
          {"placement", rect_to_json(c.placement)},
          {"created_ms", c.created_ms},
          {"annotations", std::move(annotations)}};
}

Capture capture_from_json(const json& j) {
  Capture c;
  c.id = CaptureId{j.at("capture_id").get<std::uint64_t>()};
  c.kind = kind_from_string(j.at("kind").get<std::string>());
  c.snapshot_id = j.at("snapshot_id").get<std::string>();
  c.placement = rect_from_json(j.at("placement"));
  c.created_ms = j.at("created_ms").get<Millis>();
  for (const auto& a : j.at("annotations")) c.annotations.push_back(stroke_from_json(a));
  return c;
}

bool stroke_hits(const Stroke& s, std::span<const Point> path, double radius_sq,
                 const Capture* host) {
  auto at = [&](std::size_t i) -> Point {
    const auto& p = s.points[i];
    return host ? host->to_canvas(p.x, p.y) : Point{p.x, p.y};
  };
  for (const Point& q : path) {
    if (s.points.size() == 1) {
      if (distance_sq(q, at(0)) <= radius_sq) return true;
      continue;
    }
    for (std::size_t i = 1; i < s.points.size(); ++i) {
      if (segment_distance_sq(q, at(i - 1), at(i)) <= radius_sq) return true;
    }
  }
  return false;
}

}  // namespace

const char* to_string(Tool tool) {
  switch (tool) {
    case Tool::Pen: return "pen";
    case Tool::Highlighter: return "highlighter";
    case Tool::Eraser: return "eraser";
  }
  return "pen";
}

std::optional<Tool> tool_from_string(std::string_view name) {
  if (name == "pen") return Tool::Pen;
  if (name == "highlighter") return Tool::Highlighter;
  if (name == "eraser") return Tool::Eraser;
  return std::nullopt;
}

const char* to_string(CaptureKind kind) {
  return kind == CaptureKind::Slide ? "slide" : "transcript";
}

void ToolState::select(Tool tool) {
  active = tool;
  if (tool != Tool::Eraser) last_drawing = tool;
}

Tool ToolState::double_tap_target() const {
  switch (active) {
    case Tool::Eraser: return last_drawing;
    case Tool::Pen: return Tool::Highlighter;
    case Tool::Highlighter: return Tool::Pen;
  }
  return Tool::Pen;
}

Stroke Stroke::make(StrokeId id, Tool tool, std::vector<InkPoint> points) {
  if (points.empty()) fail(ErrorCode::InvalidArgument, "stroke needs at least one point");
  Stroke s{id, tool, std::move(points), {}};
  double x0 = std::numeric_limits<double>::infinity(), y0 = x0;
  double x1 = -x0, y1 = -x0;
  for (const auto& p : s.points) {
    x0 = std::min(x0, p.x);
    y0 = std::min(y0, p.y);
    x1 = std::max(x1, p.x);
    y1 = std::max(y1, p.y);
  }
  s.bounds = {x0, y0, x1 - x0, y1 - y0};
  return s;
}

json to_json(const Stroke& s) {
  json points = json::array();
  for (const auto& p : s.points) points.push_back(json::array({p.x, p.y, p.t_ms}));
  return {{"type", "stroke"},
          {"stroke_id", s.id.value},
          {"tool", to_string(s.tool)},
          {"bounds", rect_to_json(s.bounds)},
          {"points", std::move(points)}};
}

Stroke stroke_from_json(const json& j) {
  auto tool = tool_from_string(j.at("tool").get<std::string>());
  if (!tool) fail(ErrorCode::InvalidArgument, "unknown tool in stroke record");
  std::vector<InkPoint> points;
  for (const auto& p : j.at("points")) {
    points.push_back({p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<Millis>()});
  }
  return Stroke::make(StrokeId{j.at("stroke_id").get<std::uint64_t>()}, *tool, std::move(points));
}

json to_json(const DocOp& op) {
  return std::visit(
      overloaded{
          [](const op::AddStroke& o) -> json { return {{"op", "add_stroke"}, {"stroke", to_json(o.stroke)}}; },
          [](const op::AddCapture& o) -> json {
            return {{"op", "add_capture"}, {"capture", capture_to_json(o.capture)}};
          },
          [](const op::AppendAnnotation& o) -> json {
            return {{"op", "append_annotation"}, {"capture_id", o.capture.value}, {"stroke", to_json(o.stroke)}};
          },
          [](const op::RemoveStrokes& o) -> json {
            json ids = json::array();
            for (auto id : o.ids) ids.push_back(id.value);
            return {{"op", "remove_strokes"}, {"stroke_ids", std::move(ids)}};
          },
          [](const op::SetViewport& o) -> json { return {{"op", "set_viewport"}, {"top_y", o.top_y}}; },
      },
      op);
}

DocOp doc_op_from_json(const json& j) {
  const auto name = j.at("op").get<std::string>();
  if (name == "add_stroke") return op::AddStroke{stroke_from_json(j.at("stroke"))};
  if (name == "add_capture") return op::AddCapture{capture_from_json(j.at("capture"))};
  if (name == "append_annotation") {
    return op::AppendAnnotation{CaptureId{j.at("capture_id").get<std::uint64_t>()},
                                stroke_from_json(j.at("stroke"))};
  }
  if (name == "remove_strokes") {
    op::RemoveStrokes r;
    for (const auto& id : j.at("stroke_ids")) r.ids.push_back(StrokeId{id.get<std::uint64_t>()});
    return r;
  }
  if (name == "set_viewport") return op::SetViewport{j.at("top_y").get<double>()};
  fail(ErrorCode::InvalidArgument, "unknown document op: " + name);
}

const Capture& NoteDocument::place_capture(CaptureKind kind, std::string snapshot_id,
                                           double aspect_ratio, Millis created_ms,
                                           std::vector<Stroke> annotations) {
  if (!(aspect_ratio > 0)) fail(ErrorCode::InvalidArgument, "aspect ratio must be positive");
  const double w = layout_.capture_column_width;
  Capture c;
  c.id = next_capture_id_;
  c.kind = kind;
  c.snapshot_id = std::move(snapshot_id);
  c.placement = {(1.0 - w) / 2.0, content_frontier() + layout_.capture_gap, w, w / aspect_ratio};
  c.annotations = std::move(annotations);
  c.created_ms = created_ms;
  apply(op::AddCapture{std::move(c)});
  return std::get<Capture>(elements_.back());
}

std::uint64_t NoteDocument::add_free_stroke(Stroke stroke) {
  if (stroke.tool == Tool::Eraser) {
    fail(ErrorCode::RejectEraserStroke, "eraser strokes are not stored");
  }
  apply(op::AddStroke{std::move(stroke)});
  return revision_;
}

std::uint64_t NoteDocument::append_annotation(CaptureId capture, Stroke stroke) {
  if (!find_capture(capture)) {
    fail(ErrorCode::UnknownCapture, "unknown capture " + std::to_string(capture.value));
  }
  if (stroke.tool == Tool::Eraser) {
    fail(ErrorCode::RejectEraserStroke, "eraser strokes are not stored");
  }
  apply(op::AppendAnnotation{capture, std::move(stroke)});
  return revision_;
}

std::vector<StrokeId> NoteDocument::erase_stroke_at(std::span<const Point> path, double radius) {
  if (!(radius > 0)) fail(ErrorCode::InvalidArgument, "eraser radius must be positive");
  const double r2 = radius * radius;
  std::vector<StrokeId> hit;
  for (const auto& e : elements_) {
    if (const auto* s = std::get_if<Stroke>(&e)) {
      if (stroke_hits(*s, path, r2, nullptr)) hit.push_back(s->id);
    } else {
      const auto& c = std::get<Capture>(e);
      for (const auto& a : c.annotations) {
        if (stroke_hits(a, path, r2, &c)) hit.push_back(a.id);
      }
    }
  }
  if (!hit.empty()) apply(op::RemoveStrokes{hit});
  return hit;
}

std::vector<StrokeId> NoteDocument::remove_strokes(std::span<const StrokeId> ids) {
  const std::set<StrokeId> wanted(ids.begin(), ids.end());
  std::vector<StrokeId> present;
  for (const auto& e : elements_) {
    if (const auto* s = std::get_if<Stroke>(&e)) {
      if (wanted.count(s->id)) present.push_back(s->id);
    } else {
      for (const auto& a : std::get<Capture>(e).annotations) {
        if (wanted.count(a.id)) present.push_back(a.id);
      }
    }
  }
  if (!present.empty()) apply(op::RemoveStrokes{present});
  return present;
}

double NoteDocument::scroll_to_adjacent_capture(ScrollDirection direction) {
  std::optional<double> target;
  for (const auto& e : elements_) {
    const auto* c = std::get_if<Capture>(&e);
    if (!c) continue;
    const double y = c->placement.y - layout_.capture_gap;
    if (direction == ScrollDirection::Next && y > viewport_top_y_) {
      if (!target || y < *target) target = y;
    } else if (direction == ScrollDirection::Prev && y < viewport_top_y_) {
      if (!target || y > *target) target = y;
    }
  }
  if (target) apply(op::SetViewport{*target});
  return viewport_top_y_;
}

void NoteDocument::set_viewport(double top_y) {
  if (top_y != viewport_top_y_) apply(op::SetViewport{std::max(0.0, top_y)});
}

const Capture* NoteDocument::find_capture(CaptureId id) const {
  for (const auto& e : elements_) {
    if (const auto* c = std::get_if<Capture>(&e); c && c->id == id) return c;
  }
  return nullptr;
}

Capture* NoteDocument::find_capture_mut(CaptureId id) {
  return const_cast<Capture*>(std::as_const(*this).find_capture(id));
}

void NoteDocument::apply(const DocOp& op) {
  std::visit(
      overloaded{
          [&](const op::AddStroke& o) {
            elements_.emplace_back(o.stroke);
            bump_frontier(o.stroke.bounds.bottom());
            next_stroke_id_.value = std::max(next_stroke_id_.value, o.stroke.id.value + 1);
          },
          [&](const op::AddCapture& o) {
            elements_.emplace_back(o.capture);
            bump_frontier(o.capture.placement.bottom());
            next_capture_id_.value = std::max(next_capture_id_.value, o.capture.id.value + 1);
            for (const auto& a : o.capture.annotations) {
              next_stroke_id_.value = std::max(next_stroke_id_.value, a.id.value + 1);
            }
          },
          [&](const op::AppendAnnotation& o) {
            Capture* c = find_capture_mut(o.capture);
            if (!c) fail(ErrorCode::UnknownCapture, "unknown capture " + std::to_string(o.capture.value));
            c->annotations.push_back(o.stroke);
            next_stroke_id_.value = std::max(next_stroke_id_.value, o.stroke.id.value + 1);
          },
          [&](const op::RemoveStrokes& o) {
            const std::set<StrokeId> ids(o.ids.begin(), o.ids.end());
            std::erase_if(elements_, [&](const Element& e) {
              const auto* s = std::get_if<Stroke>(&e);
              return s && ids.count(s->id);
            });
            for (auto& e : elements_) {
              if (auto* c = std::get_if<Capture>(&e)) {
                std::erase_if(c->annotations, [&](const Stroke& s) { return ids.count(s.id) > 0; });
              }
            }
          },
          [&](const op::SetViewport& o) { viewport_top_y_ = o.top_y; },
      },
      op);
  ++revision_;
  if (journaling_) journal_.push_back(op);
}

json NoteDocument::to_json() const {
  json elements = json::array();
  for (const auto& e : elements_) {
    elements.push_back(std::visit(
        overloaded{[](const Stroke& s) { return notes::to_json(s); },
                   [](const Capture& c) { return capture_to_json(c); }},
        e));
  }
  return {{"format", "marginalia.notes"},
          {"version", 1},
          {"revision", revision_},
          {"viewport_top_y", viewport_top_y_},
          {"content_frontier", frontier_},
          {"next_stroke_id", next_stroke_id_.value},
          {"next_capture_id", next_capture_id_.value},
          {"elements", std::move(elements)}};
}

NoteDocument NoteDocument::from_json(const json& j, LayoutConfig layout) {
  try {
    if (j.at("format").get<std::string>() != "marginalia.notes" || j.at("version").get<int>() != 1) {
      fail(ErrorCode::InvalidArgument, "not a marginalia.notes v1 record");
    }
    NoteDocument doc(layout);
    for (const auto& e : j.at("elements")) {
      const auto type = e.at("type").get<std::string>();
      if (type == "stroke") {
        doc.elements_.emplace_back(stroke_from_json(e));
      } else if (type == "capture") {
        doc.elements_.emplace_back(capture_from_json(e));
      } else {
        fail(ErrorCode::InvalidArgument, "unknown element type: " + type);
      }
    }
    doc.revision_ = j.at("revision").get<std::uint64_t>();
    doc.viewport_top_y_ = j.at("viewport_top_y").get<double>();
    doc.frontier_ = j.at("content_frontier").get<double>();
    doc.next_stroke_id_ = StrokeId{j.at("next_stroke_id").get<std::uint64_t>()};
    doc.next_capture_id_ = CaptureId{j.at("next_capture_id").get<std::uint64_t>()};
    return doc;
  } catch (const json::exception& e) {
    fail(ErrorCode::InvalidArgument, std::string("malformed notes record: ") + e.what());
  }
}

}  // namespace marginalia::notes
