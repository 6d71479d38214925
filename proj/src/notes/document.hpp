#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "notes/geometry.hpp"

namespace marginalia::notes {

enum class Tool { Pen, Highlighter, Eraser };

const char* to_string(Tool tool);
std::optional<Tool> tool_from_string(std::string_view name);

/// Active tool plus the drawing tool a double-tap returns to.
struct ToolState {
  Tool active = Tool::Pen;
  Tool last_drawing = Tool::Pen;  // never Eraser

  void select(Tool tool);
  /// Eraser goes back to the last drawing tool; otherwise Pen and
  /// Highlighter swap.
  Tool double_tap_target() const;

  friend bool operator==(const ToolState&, const ToolState&) = default;
};

struct StrokeTag {};
struct CaptureTag {};
using StrokeId = Id<StrokeTag>;
using CaptureId = Id<CaptureTag>;

struct Stroke {
  StrokeId id;
  Tool tool = Tool::Pen;
  std::vector<InkPoint> points;
  Rect bounds;

  /// Builds a stroke with its tight bounding box. Requires >= 1 point.
  static Stroke make(StrokeId id, Tool tool, std::vector<InkPoint> points);
  friend bool operator==(const Stroke&, const Stroke&) = default;
};

enum class CaptureKind { Slide, Transcript };
const char* to_string(CaptureKind kind);

struct Capture {
  CaptureId id;
  CaptureKind kind = CaptureKind::Slide;
  std::string snapshot_id;
  Rect placement;
  std::vector<Stroke> annotations;  // capture-local [0,1]^2
  Millis created_ms = 0;

  /// Maps a capture-local point onto the canvas.
  Point to_canvas(double u, double v) const {
    return {placement.x + u * placement.width, placement.y + v * placement.height};
  }
  friend bool operator==(const Capture&, const Capture&) = default;
};

using Element = std::variant<Stroke, Capture>;

struct LayoutConfig {
  double capture_column_width = 0.7;
  double capture_gap = 0.03;
};

enum class ScrollDirection { Prev, Next };

/// Document mutations. Every mutating call funnels through exactly one of
/// these, so applying the same op sequence reproduces the same document.
namespace op {
struct AddStroke { Stroke stroke; };
struct AddCapture { Capture capture; };
struct AppendAnnotation { CaptureId capture; Stroke stroke; };
struct RemoveStrokes { std::vector<StrokeId> ids; };
struct SetViewport { double top_y = 0; };
}  // namespace op
using DocOp = std::variant<op::AddStroke, op::AddCapture, op::AppendAnnotation, op::RemoveStrokes,
                           op::SetViewport>;

nlohmann::json to_json(const DocOp& op);
DocOp doc_op_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Stroke& stroke);
Stroke stroke_from_json(const nlohmann::json& j);

class NoteDocument {
 public:
  explicit NoteDocument(LayoutConfig layout = {}) : layout_(layout) {}

  const std::vector<Element>& elements() const { return elements_; }
  double viewport_top_y() const { return viewport_top_y_; }
  std::uint64_t revision() const { return revision_; }
  const LayoutConfig& layout() const { return layout_; }

  /// Lowest bottom edge reached by any content so far. Erasing does not pull
  /// it back up, so later captures never land on space that held ink.
  double content_frontier() const { return frontier_; }

  StrokeId next_stroke_id() const { return next_stroke_id_; }
  CaptureId next_capture_id() const { return next_capture_id_; }

  /// Appends a capture centred in the column below the frontier.
  const Capture& place_capture(CaptureKind kind, std::string snapshot_id, double aspect_ratio,
                               Millis created_ms, std::vector<Stroke> annotations = {});
  std::uint64_t add_free_stroke(Stroke stroke);
  std::uint64_t append_annotation(CaptureId capture, Stroke stroke);

  /// Removes every free stroke and capture annotation whose polyline passes
  /// within `radius` of a path point. Whole strokes only.
  std::vector<StrokeId> erase_stroke_at(std::span<const Point> path, double radius);
  std::vector<StrokeId> remove_strokes(std::span<const StrokeId> ids);

  double scroll_to_adjacent_capture(ScrollDirection direction);
  void set_viewport(double top_y);

  const Capture* find_capture(CaptureId id) const;

  /// The single mutation primitive; bumps revision by one.
  void apply(const DocOp& op);

  /// When enabled, every applied op is also appended to the journal.
  void set_journaling(bool on) { journaling_ = on; }
  std::vector<DocOp> take_journal() { return std::exchange(journal_, {}); }

  /// Structured record; `from_json(to_json())` reproduces the document and
  /// re-serializes byte-identically.
  nlohmann::json to_json() const;
  static NoteDocument from_json(const nlohmann::json& j, LayoutConfig layout = {});

  friend bool operator==(const NoteDocument& a, const NoteDocument& b) {
    return a.elements_ == b.elements_ && a.viewport_top_y_ == b.viewport_top_y_ &&
           a.revision_ == b.revision_ && a.frontier_ == b.frontier_;
  }

 private:
  Capture* find_capture_mut(CaptureId id);
  void bump_frontier(double y) { frontier_ = std::max(frontier_, y); }

  LayoutConfig layout_;
  std::vector<Element> elements_;
  double viewport_top_y_ = 0;
  double frontier_ = 0;
  std::uint64_t revision_ = 0;
  StrokeId next_stroke_id_{1};
  CaptureId next_capture_id_{1};
  bool journaling_ = false;
  std::vector<DocOp> journal_;
};

/// What a capture shows, for rendering.
struct SnapshotContent {
  std::string image_href;  // slides
  std::string text;        // transcript blocks
};
using SnapshotResolver =
    std::function<std::optional<SnapshotContent>(CaptureKind, const std::string& snapshot_id)>;

struct SvgOptions {
  double pixels_per_unit = 1000.0;
  double min_height = 4.0 / 3.0;  // canvas units
  SnapshotResolver resolver;
};

/// SVG 1.1 rendering: captures as framed boxes with their annotations
/// mapped onto the canvas, free strokes drawn in creation order.
std::string render_svg(const NoteDocument& doc, const SvgOptions& options = {});

}  // namespace marginalia::notes
