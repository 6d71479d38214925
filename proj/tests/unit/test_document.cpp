#include <doctest.h>

#include <random>

#include <nlohmann/json.hpp>

#include "common/error.hpp"
#include "notes/document.hpp"
#include "properties.hpp"

using namespace marginalia;
using namespace marginalia::notes;

namespace {

Stroke stroke(std::uint64_t id, std::vector<InkPoint> pts, Tool tool = Tool::Pen) {
  return Stroke::make(StrokeId{id}, tool, std::move(pts));
}

}  // namespace

TEST_CASE("first capture lands at the top of the column") {
  NoteDocument doc;
  const auto& c = doc.place_capture(CaptureKind::Slide, "sl-0000", 4.0 / 3.0, 100);
  CHECK(c.id.value == 1);
  CHECK(c.placement.x == doctest::Approx(0.15));
  CHECK(c.placement.right() == doctest::Approx(0.85));
  CHECK(c.placement.y == doctest::Approx(0.03));
  CHECK(c.placement.bottom() == doctest::Approx(0.555));
  CHECK(doc.content_frontier() == doctest::Approx(0.555));
  const auto& d = doc.place_capture(CaptureKind::Transcript, "tb-0001", 5.0, 200);
  CHECK(d.placement.y == doctest::Approx(0.585));
  CHECK(d.placement.height == doctest::Approx(0.14));
}

TEST_CASE("captures go below free ink") {
  NoteDocument doc;
  doc.add_free_stroke(stroke(1, {{0.1, 0.2, 0}, {0.3, 0.9, 10}}));
  CHECK(doc.content_frontier() == doctest::Approx(0.9));
  const auto& c = doc.place_capture(CaptureKind::Slide, "sl-0000", 2.0, 0);
  CHECK(c.placement.y == doctest::Approx(0.93));
}

TEST_CASE("frontier never moves up when ink is erased") {
  NoteDocument doc;
  doc.add_free_stroke(stroke(1, {{0.5, 1.0, 0}, {0.6, 1.2, 10}}));
  const std::vector<Point> path{{0.55, 1.1}};
  CHECK(doc.erase_stroke_at(path, 0.01).size() == 1);
  CHECK(doc.elements().empty());
  CHECK(doc.content_frontier() == doctest::Approx(1.2));
  const auto& c = doc.place_capture(CaptureKind::Slide, "sl-0001", 4.0 / 3.0, 0);
  CHECK(c.placement.y == doctest::Approx(1.23));
}

TEST_CASE("eraser strokes are rejected") {
  NoteDocument doc;
  try {
    doc.add_free_stroke(stroke(1, {{0, 0, 0}}, Tool::Eraser));
    FAIL("expected rejection");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RejectEraserStroke);
  }
  CHECK(doc.revision() == 0);
}

TEST_CASE("annotating an unknown capture fails") {
  NoteDocument doc;
  try {
    doc.append_annotation(CaptureId{7}, stroke(1, {{0, 0, 0}}));
    FAIL("expected UnknownCapture");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownCapture);
  }
}

TEST_CASE("scrolling steps between captures") {
  NoteDocument doc;
  doc.place_capture(CaptureKind::Slide, "sl-0000", 4.0 / 3.0, 0);
  doc.place_capture(CaptureKind::Slide, "sl-0001", 4.0 / 3.0, 0);
  doc.place_capture(CaptureKind::Slide, "sl-0002", 4.0 / 3.0, 0);
  CHECK(doc.scroll_to_adjacent_capture(ScrollDirection::Next) == doctest::Approx(0.555));
  CHECK(doc.scroll_to_adjacent_capture(ScrollDirection::Next) == doctest::Approx(1.11));
  CHECK(doc.scroll_to_adjacent_capture(ScrollDirection::Next) == doctest::Approx(1.11));
  CHECK(doc.scroll_to_adjacent_capture(ScrollDirection::Prev) == doctest::Approx(0.555));
  CHECK(doc.scroll_to_adjacent_capture(ScrollDirection::Prev) == doctest::Approx(0.0));
  CHECK(doc.scroll_to_adjacent_capture(ScrollDirection::Prev) == doctest::Approx(0.0));
}

TEST_CASE("revision counts applied ops") {
  NoteDocument doc;
  doc.set_journaling(true);
  doc.add_free_stroke(stroke(1, {{0.1, 0.1, 0}}));
  const auto& c = doc.place_capture(CaptureKind::Slide, "sl-0000", 1.0, 0);
  doc.append_annotation(c.id, stroke(2, {{0.5, 0.5, 1}}));
  doc.set_viewport(0.2);
  doc.set_viewport(0.2);
  const std::vector<StrokeId> ids{StrokeId{1}, StrokeId{99}};
  CHECK(doc.remove_strokes(ids) == std::vector<StrokeId>{StrokeId{1}});
  CHECK(doc.revision() == 5);
  CHECK(doc.take_journal().size() == 5);
  CHECK(doc.take_journal().empty());
}

TEST_CASE("replaying the op journal rebuilds the document") {
  NoteDocument doc;
  doc.set_journaling(true);
  doc.add_free_stroke(stroke(1, {{0.1, 0.1, 0}, {0.2, 0.3, 5}}));
  const auto cid = doc.place_capture(CaptureKind::Transcript, "tb-0003", 5.0, 10).id;
  doc.append_annotation(cid, stroke(2, {{0.5, 0.5, 11}, {0.6, 0.5, 12}}, Tool::Highlighter));
  doc.scroll_to_adjacent_capture(ScrollDirection::Next);
  const std::vector<Point> path{{0.15, 0.2}};
  doc.erase_stroke_at(path, 0.02);

  NoteDocument copy;
  for (const auto& op : doc.take_journal()) copy.apply(doc_op_from_json(to_json(op)));
  CHECK(copy == doc);
  CHECK(copy.to_json().dump() == doc.to_json().dump());
}

TEST_CASE("structured record round-trips byte for byte") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0, 1);
  for (int iter = 0; iter < 50; ++iter) {
    NoteDocument doc;
    std::uint64_t sid = 1;
    for (int i = 0; i < 12; ++i) {
      const int k = static_cast<int>(u(rng) * 3);
      if (k == 0) {
        std::vector<InkPoint> pts;
        for (int j = 0; j < 1 + static_cast<int>(u(rng) * 5); ++j) pts.push_back({u(rng), u(rng) * 3, j * 7});
        doc.add_free_stroke(stroke(sid++, pts, u(rng) < 0.5 ? Tool::Pen : Tool::Highlighter));
      } else if (k == 1) {
        doc.place_capture(u(rng) < 0.5 ? CaptureKind::Slide : CaptureKind::Transcript, "sl-0001",
                          0.5 + u(rng) * 4, i * 1000);
      } else if (auto* last = doc.elements().empty() ? nullptr : std::get_if<Capture>(&doc.elements().back())) {
        doc.append_annotation(last->id, stroke(sid++, {{u(rng), u(rng), 1}, {u(rng), u(rng), 2}}));
      }
    }
    doc.set_viewport(u(rng));
    const auto text = doc.to_json().dump();
    const auto back = NoteDocument::from_json(nlohmann::json::parse(text));
    CHECK(back == doc);
    CHECK(back.to_json().dump() == text);
    CHECK(back.next_stroke_id() == doc.next_stroke_id());
  }
}

TEST_CASE("malformed structured records are rejected") {
  CHECK_THROWS_AS(NoteDocument::from_json(nlohmann::json::object()), Error);
  auto j = NoteDocument{}.to_json();
  j["format"] = "other";
  CHECK_THROWS_AS(NoteDocument::from_json(j), Error);
}

TEST_CASE("layout invariants over random documents") {
  const auto r = testing::layout_invariants(200, 11);
  INFO(r.summary());
  CHECK(r.ok());
}

TEST_CASE("erase matches a brute-force distance oracle") {
  const auto r = testing::erase_oracle(300, 1234);
  INFO(r.summary());
  CHECK(r.ok());
}

TEST_CASE("tool state") {
  ToolState t;
  CHECK(t.double_tap_target() == Tool::Highlighter);
  t.select(Tool::Highlighter);
  CHECK(t.double_tap_target() == Tool::Pen);
  t.select(Tool::Eraser);
  CHECK(t.last_drawing == Tool::Highlighter);
  CHECK(t.double_tap_target() == Tool::Highlighter);
  CHECK(tool_from_string("eraser") == Tool::Eraser);
  CHECK_FALSE(tool_from_string("crayon").has_value());
}
