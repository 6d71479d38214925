#pragma once

#include <filesystem>
#include <memory>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "goldens.hpp"
#include "ingest/bundle.hpp"
#include "input/types.hpp"
#include "session/events.hpp"

namespace marginalia::testing {

std::filesystem::path source_dir();
std::filesystem::path demo_bundle_dir();
std::filesystem::path demo_trace_path();
std::filesystem::path fixture(const std::string& name);

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

void write_file(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

/// In-memory bundle: one slide event per entry of `slide_times`, one block
/// per (start, end) pair, ids assigned in order.
std::shared_ptr<const ingest::LectureBundle> make_bundle(const std::vector<Millis>& slide_times,
                                                          const std::vector<std::pair<Millis, Millis>>& blocks,
                                                          Millis duration_ms);

session::InputEvent gaze(Millis t, input::Surface surface, double x, double y);
session::InputEvent gaze_none(Millis t);
session::InputEvent pen(Millis t, input::PenPhase phase, double x, double y);
session::InputEvent pen_away(Millis t);
session::InputEvent gesture(Millis t, input::Gesture g);
session::InputEvent attention(Millis t, input::Attention a);
session::InputEvent tablet_button(Millis t, input::ButtonId b);
session::InputEvent tick(Millis t);

/// Plausible but random user behaviour: gaze fixations, hover/contact pen
/// paths, gestures, attention switches, tablet taps and clock ticks, with
/// non-decreasing timestamps inside the lecture.
std::vector<session::InputEvent> random_script(std::mt19937_64& rng, Millis duration_ms, std::size_t length);

/// Random FSM-level sample: gaze, pen, gesture or attention input.
session::InputEvent random_input(std::mt19937_64& rng, Millis t);

/// The demo-rate load: 30 Hz gaze plus 120 Hz pen for `duration_ms`.
std::vector<session::InputEvent> lecture_rate_trace(Millis duration_ms, std::uint64_t seed);

}  // namespace marginalia::testing
