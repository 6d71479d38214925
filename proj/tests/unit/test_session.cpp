#include <doctest.h>

#include <fstream>
#include <random>

#include <nlohmann/json.hpp>

#include "common/error.hpp"
#include "properties.hpp"
#include "session/digest.hpp"
#include "session/replay.hpp"
#include "session/session.hpp"
#include "support.hpp"

using namespace marginalia;
using namespace marginalia::session;
using namespace marginalia::input;
using notes::Tool;
using testing::gaze;
using testing::pen;

namespace {

std::shared_ptr<const ingest::LectureBundle> six_slides() {
  return testing::make_bundle({0, 60000, 120000, 180000, 240000, 300000}, {{0, 5000}, {5000, 10000}, {10000, 15000}},
                              400000);
}

std::vector<notes::InkPoint> dab(Millis t) { return {{0.5, 0.5, t}, {0.6, 0.6, t + 10}}; }

template <typename T>
std::size_t count(const Effects& effects) {
  return std::count_if(effects.begin(), effects.end(), [](const FeedbackEffect& e) { return std::holds_alternative<T>(e); });
}

std::size_t capture_count(const Session& s) {
  std::size_t n = 0;
  for (const auto& e : s.document().elements()) n += std::holds_alternative<notes::Capture>(e);
  return n;
}

const notes::Capture& capture_at(const Session& s, std::size_t index) {
  std::size_t n = 0;
  for (const auto& e : s.document().elements()) {
    if (const auto* c = std::get_if<notes::Capture>(&e); c && n++ == index) return *c;
  }
  throw std::out_of_range("capture index");
}

}  // namespace

TEST_CASE("a fresh session shows the first slide") {
  Session s(six_slides());
  CHECK(s.clock_ms() == 0);
  CHECK(s.panel(PanelKind::Slides).displayed_snapshot == "sl-0000");
  CHECK(s.panel(PanelKind::Slides).sync == SyncMode::Live);
  CHECK_FALSE(s.panel(PanelKind::Transcripts).displayed_snapshot.has_value());
  CHECK(s.event_log().empty());
}

TEST_CASE("live panels follow releases") {
  Session s(six_slides());
  s.advance_clock(121000);
  CHECK(s.panel(PanelKind::Slides).displayed_snapshot == "sl-0002");
  CHECK(s.panel(PanelKind::Slides).live_snapshot == "sl-0002");
  CHECK(s.panel(PanelKind::Transcripts).displayed_snapshot == "tb-0003");
  CHECK(s.released_slides() == 3);
}

TEST_CASE("the clock never runs backwards") {
  Session s(six_slides());
  s.apply(testing::tick(5000));
  try {
    s.apply(testing::tick(4000));
    FAIL("expected ClockRegression");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ClockRegression);
  }
  CHECK(s.event_log().size() == 1);
  CHECK_THROWS_AS(s.advance_clock(10), Error);
}

TEST_CASE("annotation in progress") {
  Session s(six_slides());
  CHECK_FALSE(s.annotation_in_progress(PanelKind::Slides));
  s.apply(gaze(1000, Surface::slides(), 0.5, 0.5));
  s.apply(pen(1010, PenPhase::Hover, 0.5, 0.5));
  s.apply(pen(1020, PenPhase::Contact, 0.5, 0.5));
  CHECK(s.annotation_in_progress(PanelKind::Slides));
  CHECK_FALSE(s.annotation_in_progress(PanelKind::Transcripts));
  s.apply(pen(1030, PenPhase::Contact, 0.55, 0.5));
  s.apply(pen(1040, PenPhase::Hover, 0.55, 0.5));
  s.advance_clock(1540);  // 500 ms after the last edit, grace 2000
  CHECK(s.annotation_in_progress(PanelKind::Slides));
  s.advance_clock(3039);
  CHECK(s.annotation_in_progress(PanelKind::Slides));
  s.advance_clock(3040);
  CHECK_FALSE(s.annotation_in_progress(PanelKind::Slides));
}

TEST_CASE("annotating through a slide change pauses the panel") {
  Session s(six_slides());
  s.apply(testing::tick(59000));
  s.annotate_snapshot(PanelKind::Slides, Tool::Pen, dab(59000));
  s.advance_clock(61000);
  const auto& p = s.panel(PanelKind::Slides);
  CHECK(p.live_snapshot == "sl-0001");
  CHECK(p.displayed_snapshot == "sl-0000");
  CHECK(p.sync == SyncMode::OutOfSync);
  CHECK(s.panel(PanelKind::Transcripts).sync == SyncMode::Live);
}

TEST_CASE("first annotation creates a capture, later ones append") {
  Session s(six_slides());
  s.advance_clock(250000);
  s.navigate(PanelKind::Slides, "sl-0004");
  auto fx = s.annotate_snapshot(PanelKind::Slides, Tool::Pen, dab(250000));
  CHECK(count<effect::GreenCheck>(fx) == 1);
  CHECK(capture_count(s) == 1);
  for (int i = 0; i < 3; ++i) {
    fx = s.annotate_snapshot(PanelKind::Slides, Tool::Highlighter, dab(250100 + i));
    CHECK(count<effect::GreenCheck>(fx) == 0);
  }
  CHECK(capture_count(s) == 1);
  CHECK(capture_at(s, 0).snapshot_id == "sl-0004");
  CHECK(capture_at(s, 0).annotations.size() == 4);
  CHECK(s.panel(PanelKind::Slides).overlay.at("sl-0004").size() == 4);

  s.annotate_snapshot(PanelKind::Transcripts, Tool::Pen, dab(250200));
  CHECK(capture_count(s) == 2);
  CHECK(capture_at(s, 1).kind == notes::CaptureKind::Transcript);
  CHECK(capture_at(s, 1).placement.height == doctest::Approx(0.7 / 5.0));
}

TEST_CASE("eraser strokes are never annotations") {
  Session s(six_slides());
  try {
    s.annotate_snapshot(PanelKind::Slides, Tool::Eraser, dab(0));
    FAIL("expected rejection");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RejectEraserStroke);
  }
  CHECK(capture_count(s) == 0);
}

TEST_CASE("squeeze captures") {
  Session s(six_slides());
  s.advance_clock(20000);
  auto fx = s.manual_capture(PanelKind::Transcripts);
  CHECK(count<effect::GreenFlash>(fx) == 1);
  CHECK(capture_count(s) == 1);
  CHECK(capture_at(s, 0).annotations.empty());

  s.annotate_snapshot(PanelKind::Slides, Tool::Pen, dab(20000));
  s.annotate_snapshot(PanelKind::Slides, Tool::Pen, dab(20100));
  fx = s.manual_capture(PanelKind::Slides);
  CHECK(count<effect::GreenFlash>(fx) == 1);
  CHECK(s.panel(PanelKind::Slides).overlay.empty());
  CHECK(s.panel(PanelKind::Slides).open_capture.empty());
  CHECK(capture_count(s) == 3);
  CHECK(capture_at(s, 1).annotations.size() == 2);
  CHECK(capture_at(s, 2).annotations.empty());

  s.manual_capture(PanelKind::Slides);
  CHECK(capture_count(s) == 4);
  CHECK(capture_at(s, 3).placement.y > capture_at(s, 2).placement.bottom());

  // After the reset the next stroke opens a new capture.
  fx = s.annotate_snapshot(PanelKind::Slides, Tool::Pen, dab(20200));
  CHECK(count<effect::GreenCheck>(fx) == 1);
  CHECK(capture_count(s) == 5);
}

TEST_CASE("buttons") {
  Session s(six_slides());
  s.advance_clock(310000);
  s.navigate(PanelKind::Slides, "sl-0001");
  CHECK(s.panel(PanelKind::Slides).sync == SyncMode::OutOfSync);
  auto fx = s.press_button({ButtonKind::SlidesLive, 0});
  CHECK(count<effect::ButtonFlash>(fx) == 1);
  CHECK(s.panel(PanelKind::Slides).displayed_snapshot == "sl-0005");
  CHECK(s.panel(PanelKind::Slides).sync == SyncMode::Live);

  s.press_button({ButtonKind::SlideThumb, 2});
  CHECK(s.panel(PanelKind::Slides).displayed_snapshot == "sl-0002");
  s.press_button({ButtonKind::SlideThumb, 5});
  CHECK(s.panel(PanelKind::Slides).sync == SyncMode::Live);
  CHECK_THROWS_AS(s.press_button({ButtonKind::SlideThumb, 6}), Error);

  s.navigate(PanelKind::Transcripts, "tb-0001");
  fx = s.press_button({ButtonKind::TranscriptsScrollUp, 0});
  CHECK(count<effect::ButtonFlash>(fx) == 1);
  CHECK(s.panel(PanelKind::Transcripts).displayed_snapshot == "tb-0001");
  s.press_button({ButtonKind::TranscriptsScrollDown, 0});
  CHECK(s.panel(PanelKind::Transcripts).displayed_snapshot == "tb-0002");
  s.press_button({ButtonKind::TranscriptsScrollDown, 0});
  CHECK(s.panel(PanelKind::Transcripts).sync == SyncMode::Live);

  s.press_button({ButtonKind::ToolEraser, 0});
  CHECK(s.tools().active == Tool::Eraser);
  CHECK(s.tools().last_drawing == Tool::Pen);
}

TEST_CASE("navigation rules") {
  Session s(six_slides());
  s.advance_clock(130000);
  try {
    s.navigate(PanelKind::Slides, "sl-0004");
    FAIL("expected UnreleasedSnapshot");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnreleasedSnapshot);
  }
  s.annotate_snapshot(PanelKind::Slides, Tool::Pen, dab(130000));
  s.navigate(PanelKind::Slides, "sl-0000");
  CHECK(s.panel(PanelKind::Slides).sync == SyncMode::OutOfSync);
  s.navigate(PanelKind::Slides, "sl-0002");
  CHECK(s.panel(PanelKind::Slides).sync == SyncMode::Live);
  CHECK(s.panel(PanelKind::Slides).overlay.at("sl-0002").size() == 1);
  const auto transcripts = s.panel(PanelKind::Transcripts);
  s.go_live(PanelKind::Slides);
  CHECK(s.panel(PanelKind::Transcripts) == transcripts);
}

TEST_CASE("navigator lists the last six slides") {
  auto bundle = testing::make_bundle({0, 1, 2, 3, 4, 5, 6, 7}, {}, 100);
  Session s(bundle);
  s.advance_clock(100);
  const auto thumbs = s.navigator();
  REQUIRE(thumbs.size() == 6);
  CHECK(thumbs.front().snapshot_id == "sl-0002");
  CHECK(thumbs.back().displayed);
}

TEST_CASE("notes ink maps through the viewport and the eraser removes whole strokes") {
  Session s(six_slides());
  s.apply(testing::attention(100, Attention::Direct));
  s.apply(pen(200, PenPhase::Contact, 0.2, 0.3));
  s.apply(pen(210, PenPhase::Contact, 0.4, 0.3));
  auto r = s.apply(pen(220, PenPhase::Hover, 0.4, 0.3));
  REQUIRE(s.document().elements().size() == 1);
  const auto& stroke = std::get<notes::Stroke>(s.document().elements()[0]);
  CHECK(stroke.points[0].y == doctest::Approx(0.4));
  CHECK(r.changes.doc_ops.size() == 1);

  s.apply(testing::tablet_button(300, {ButtonKind::ToolEraser, 0}));
  s.apply(pen(400, PenPhase::Contact, 0.3, 0.3));
  CHECK(s.document().elements().empty());
  s.apply(pen(410, PenPhase::Away, 0, 0));
  CHECK(s.document().elements().empty());
}

TEST_CASE("effects do not feed back into state") {
  std::mt19937_64 rng(3);
  const auto bundle = six_slides();
  const auto script = testing::random_script(rng, 400000, 3000);
  Session a(bundle), b(bundle);
  for (const auto& e : script) {
    a.apply(e);
    b.apply(e);
    b.take_effects();
  }
  CHECK(a.digest() == b.digest());
}

TEST_CASE("digests are deterministic and sensitive") {
  const auto bundle = six_slides();
  Session a(bundle), b(bundle);
  CHECK(a.digest() == b.digest());
  CHECK(a.digest().size() == 64);
  a.annotate_snapshot(PanelKind::Slides, Tool::Pen, dab(0));
  CHECK(a.digest() != b.digest());

  std::mt19937_64 rng(17);
  const auto script = testing::random_script(rng, 400000, 2000);
  Session c(bundle), d(bundle);
  for (const auto& e : script) c.apply(e);
  const auto report = replay(d, c.event_log(), false);
  CHECK(report.events_processed == script.size());
  CHECK(report.final_digest == c.digest());
}

TEST_CASE("the demo session matches its golden digests") {
  const auto bundle = std::make_shared<const ingest::LectureBundle>(ingest::load_bundle(testing::demo_bundle_dir()));
  Session fresh(bundle);
  CHECK(fresh.digest() == testing::kDemoFreshDigest);

  std::ifstream in(testing::demo_trace_path());
  const auto events = read_trace(in);
  Session s(bundle);
  const auto report = replay(s, events, false);
  CHECK(report.final_digest == testing::kDemoTraceDigest);

  Session empty(bundle);
  CHECK(replay(empty, {}, true).final_digest == testing::kDemoEndDigest);
}

TEST_CASE("capture accounting over random scripts") {
  const auto r = testing::capture_accounting(60, 300, 21);
  INFO(r.summary());
  CHECK(r.ok());
}

TEST_CASE("panels never touch each other") {
  const auto r = testing::panel_independence(60, 300, 22);
  INFO(r.summary());
  CHECK(r.ok());
}

TEST_CASE("digest hashing uses SHA-256") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}
