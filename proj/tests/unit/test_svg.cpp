#include <doctest.h>

#include <regex>

#include "notes/document.hpp"

using namespace marginalia;
using namespace marginalia::notes;

namespace {

std::size_t count(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("empty document renders an empty page") {
  const auto svg = render_svg(NoteDocument{});
  CHECK(svg.starts_with("<?xml"));
  CHECK(svg.find("<g id=\"content\"></g>") != std::string::npos);
  CHECK(svg.find("height=\"1333.33\"") != std::string::npos);
}

TEST_CASE("captures render framed with mapped annotations") {
  NoteDocument doc;
  const auto cid = doc.place_capture(CaptureKind::Slide, "sl-0003", 4.0 / 3.0, 0).id;
  doc.append_annotation(cid, Stroke::make(StrokeId{1}, Tool::Pen, {{0, 0, 0}, {1, 1, 5}}));
  doc.place_capture(CaptureKind::Transcript, "tb-0002", 5.0, 0);
  doc.add_free_stroke(Stroke::make(StrokeId{2}, Tool::Highlighter, {{0.5, 0.8, 0}}));

  SvgOptions opts;
  opts.resolver = [](CaptureKind kind, const std::string& id) -> std::optional<SnapshotContent> {
    if (kind == CaptureKind::Slide) return SnapshotContent{"/tmp/" + id + ".png", ""};
    return SnapshotContent{"", "Collisions & chaining <explained>"};
  };
  const auto svg = render_svg(doc, opts);
  CHECK(count(svg, "class=\"capture-frame\"") == 2);
  CHECK(svg.find("data-snapshot-id=\"sl-0003\"") != std::string::npos);
  CHECK(svg.find("xlink:href=\"/tmp/sl-0003.png\"") != std::string::npos);
  CHECK(svg.find("Collisions &amp; chaining &lt;explained&gt;") != std::string::npos);
  // Capture-local (0,0)-(1,1) spans the frame in pixels.
  CHECK(svg.find("points=\"150.00,30.00 850.00,555.00\"") != std::string::npos);
  CHECK(svg.find("<circle class=\"stroke highlighter\" data-stroke-id=\"2\" cx=\"500.00\" cy=\"800.00\"") !=
        std::string::npos);
  CHECK(count(svg, "<g") == count(svg, "</g>"));
}

TEST_CASE("rendering is deterministic") {
  NoteDocument doc;
  doc.place_capture(CaptureKind::Slide, "sl-0000", 4.0 / 3.0, 0);
  CHECK(render_svg(doc) == render_svg(doc));
  CHECK(render_svg(doc).find("<image") == std::string::npos);
}
