#include "support.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

#include "ingest/transcript.hpp"

namespace marginalia::testing {

namespace fs = std::filesystem;
using namespace input;
using session::InputEvent;

fs::path source_dir() { return MARGINALIA_SOURCE_DIR; }
fs::path demo_bundle_dir() { return source_dir() / "data" / "demo_lecture"; }
fs::path demo_trace_path() { return source_dir() / "data" / "demo_trace.ndjson"; }
fs::path fixture(const std::string& name) { return source_dir() / "tests" / "fixtures" / name; }

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  path_ = fs::temp_directory_path() /
          ("marginalia-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  fs::remove_all(path_);
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::shared_ptr<const ingest::LectureBundle> make_bundle(const std::vector<Millis>& slide_times,
                                                          const std::vector<std::pair<Millis, Millis>>& blocks,
                                                          Millis duration_ms) {
  auto b = std::make_shared<ingest::LectureBundle>();
  b->title = "test lecture";
  b->duration_ms = duration_ms;
  for (std::size_t i = 0; i < slide_times.size(); ++i) {
    b->slide_events.push_back({slide_times[i], "slides/" + std::to_string(i) + ".png", static_cast<int>(i), 0});
  }
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    b->transcript_blocks.push_back(
        {ingest::block_id_for(i + 1), blocks[i].first, blocks[i].second, "block " + std::to_string(i + 1) + "."});
  }
  return b;
}

InputEvent gaze(Millis t, Surface surface, double x, double y) {
  return {t, session::event::Gaze{SurfaceHit{surface, {x, y}}}, session::Origin::Headset};
}
InputEvent gaze_none(Millis t) { return {t, session::event::Gaze{}, session::Origin::Headset}; }
InputEvent pen(Millis t, PenPhase phase, double x, double y) {
  return {t, session::event::Pen{phase, Point{x, y}}, session::Origin::Tablet};
}
InputEvent pen_away(Millis t) { return {t, session::event::Pen{PenPhase::Away, std::nullopt}, session::Origin::Tablet}; }
InputEvent gesture(Millis t, Gesture g) { return {t, session::event::Gesture{g}, session::Origin::Tablet}; }
InputEvent attention(Millis t, Attention a) {
  return {t, session::event::AttentionChange{a}, session::Origin::Headset};
}
InputEvent tablet_button(Millis t, ButtonId b) { return {t, session::event::TabletButton{b}, session::Origin::Tablet}; }
InputEvent tick(Millis t) { return {t, session::event::Tick{}, session::Origin::Server}; }

namespace {

double unit(std::mt19937_64& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }
int pick(std::mt19937_64& rng, int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

Surface random_surface(std::mt19937_64& rng) {
  static const ButtonId kButtons[] = {
      {ButtonKind::SlidesLive, 0},      {ButtonKind::TranscriptsLive, 0}, {ButtonKind::TranscriptsScrollUp, 0},
      {ButtonKind::TranscriptsScrollDown, 0}, {ButtonKind::NotesScrollUp, 0}, {ButtonKind::NotesScrollDown, 0},
      {ButtonKind::ToolPen, 0},         {ButtonKind::ToolHighlighter, 0}, {ButtonKind::ToolEraser, 0},
  };
  switch (pick(rng, 10)) {
    case 0: case 1: case 2: case 3: return Surface::slides();
    case 4: case 5: case 6: return Surface::transcripts();
    case 7: case 8: return Surface::notes();
    default: return Surface::of(kButtons[pick(rng, 9)]);
  }
}

}  // namespace

InputEvent random_input(std::mt19937_64& rng, Millis t) {
  const int k = pick(rng, 100);
  if (k < 25) {
    if (pick(rng, 10) == 0) return gaze_none(t);
    return gaze(t, random_surface(rng), unit(rng), unit(rng));
  }
  if (k < 85) {
    const int phase = pick(rng, 10);
    if (phase == 0) return pen_away(t);
    return pen(t, phase < 5 ? PenPhase::Hover : PenPhase::Contact, unit(rng), unit(rng));
  }
  if (k < 93) return gesture(t, pick(rng, 2) ? Gesture::DoubleTap : Gesture::Squeeze);
  return attention(t, pick(rng, 3) ? Attention::Indirect : Attention::Direct);
}

std::vector<InputEvent> random_script(std::mt19937_64& rng, Millis duration_ms, std::size_t length) {
  std::vector<InputEvent> out;
  out.reserve(length);
  Millis t = 0;
  Point pos{0.5, 0.5};
  auto advance = [&](Millis max_step) {
    t = std::min(duration_ms, t + std::uniform_int_distribution<Millis>(0, max_step)(rng));
  };
  while (out.size() < length) {
    const int k = pick(rng, 100);
    if (k < 15) {
      advance(400);
      out.push_back(gaze(t, random_surface(rng), unit(rng), unit(rng)));
    } else if (k < 55) {
      // A short pen gesture: hover, maybe contact with a few moves, lift.
      advance(3000);
      pos = {unit(rng), unit(rng)};
      out.push_back(pen(t, PenPhase::Hover, pos.x, pos.y));
      const int moves = pick(rng, 6);
      const bool contact = pick(rng, 3) != 0;
      for (int i = 0; i < moves && out.size() < length; ++i) {
        advance(40);
        pos = {std::clamp(pos.x + (unit(rng) - 0.5) * 0.2, 0.0, 1.0), std::clamp(pos.y + (unit(rng) - 0.5) * 0.2, 0.0, 1.0)};
        out.push_back(pen(t, contact && i > 0 ? PenPhase::Contact : PenPhase::Hover, pos.x, pos.y));
      }
      advance(40);
      if (pick(rng, 4) == 0) {
        out.push_back(gesture(t, Gesture::Squeeze));
      } else {
        out.push_back(pick(rng, 2) ? pen_away(t) : pen(t, PenPhase::Hover, pos.x, pos.y));
      }
    } else if (k < 65) {
      advance(1000);
      out.push_back(gesture(t, pick(rng, 3) ? Gesture::Squeeze : Gesture::DoubleTap));
    } else if (k < 72) {
      advance(2000);
      out.push_back(attention(t, pick(rng, 2) ? Attention::Indirect : Attention::Direct));
    } else if (k < 80) {
      static const ButtonKind kTabletButtons[] = {ButtonKind::NotesScrollUp, ButtonKind::NotesScrollDown,
                                                  ButtonKind::ToolPen, ButtonKind::ToolHighlighter,
                                                  ButtonKind::ToolEraser};
      advance(2000);
      out.push_back(tablet_button(t, {kTabletButtons[pick(rng, 5)], 0}));
    } else {
      advance(20000);
      out.push_back(tick(t));
    }
  }
  out.resize(length);
  return out;
}

std::vector<InputEvent> lecture_rate_trace(Millis duration_ms, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<InputEvent> out;
  out.reserve(static_cast<std::size_t>(duration_ms / 1000 * 150 + 16));
  // Gaze every 1000/30 ms, pen every 1000/120 ms, merged by time.
  std::int64_t gaze_n = 0, pen_n = 0;
  Point pen_pos{0.5, 0.5};
  Surface fix = Surface::slides();
  Point fix_pos{0.5, 0.5};
  int pen_phase_left = 0;
  PenPhase phase = PenPhase::Away;
  for (;;) {
    const Millis tg = gaze_n * 1000 / 30;
    const Millis tp = pen_n * 1000 / 120;
    if (std::min(tg, tp) >= duration_ms) break;
    if (tg <= tp) {
      if (gaze_n % 45 == 0) {  // new fixation every ~1.5 s
        fix = random_surface(rng);
        fix_pos = {unit(rng), unit(rng)};
      }
      out.push_back(gaze(tg, fix, std::clamp(fix_pos.x + (unit(rng) - 0.5) * 0.02, 0.0, 1.0),
                         std::clamp(fix_pos.y + (unit(rng) - 0.5) * 0.02, 0.0, 1.0)));
      ++gaze_n;
    } else {
      if (pen_phase_left-- <= 0) {
        const int k = pick(rng, 10);
        phase = k < 2 ? PenPhase::Away : (k < 5 ? PenPhase::Hover : PenPhase::Contact);
        pen_phase_left = 30 + pick(rng, 120);
      }
      if (phase == PenPhase::Away) {
        out.push_back(pen_away(tp));
      } else {
        pen_pos = {std::clamp(pen_pos.x + (unit(rng) - 0.5) * 0.01, 0.0, 1.0),
                   std::clamp(pen_pos.y + (unit(rng) - 0.5) * 0.01, 0.0, 1.0)};
        out.push_back(pen(tp, phase, pen_pos.x, pen_pos.y));
      }
      ++pen_n;
    }
  }
  return out;
}

}  // namespace marginalia::testing
