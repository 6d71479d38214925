#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ingest/transcript.hpp"

namespace marginalia::ingest {

struct SlideEvent {
  Millis t_ms = 0;
  std::string image_ref;  // relative to the bundle root
  int slide_index = 0;
  int build_index = 0;

  friend bool operator==(const SlideEvent&, const SlideEvent&) = default;
};

/// Snapshot id of the slide event at `ordinal` in release order ("sl-0000").
std::string slide_snapshot_id(std::size_t ordinal);
/// Inverse of slide_snapshot_id; nullopt for anything else.
std::optional<std::size_t> slide_ordinal(std::string_view snapshot_id);

struct LectureBundle {
  std::string title;
  Millis duration_ms = 0;
  std::vector<SlideEvent> slide_events;
  std::vector<TranscriptBlock> transcript_blocks;
  std::size_t max_block_chars = kDefaultMaxBlockChars;
  double slide_aspect_ratio = 4.0 / 3.0;  // width / height of slide images
  /// Directory image refs resolve against. Empty for in-memory bundles.
  std::filesystem::path root;

  const TranscriptBlock* find_block(std::string_view block_id) const;
  std::optional<std::size_t> block_ordinal(std::string_view block_id) const;
};

/// One violated bundle invariant. `code` is stable and machine-readable;
/// `args` carries the offending ids or paths.
struct Finding {
  std::string code;
  std::vector<std::string> args;
  std::string reason;

  /// `Code("arg1","arg2")`, or bare `Code` without args.
  std::string to_string() const;
  friend bool operator==(const Finding& a, const Finding& b) {
    return a.code == b.code && a.args == b.args;
  }
};

/// Reads `manifest.json`, `slides/`, and `transcript.srt` from `dir`.
/// Throws Error(BundleInvalid) carrying the first finding's reason.
LectureBundle load_bundle(const std::filesystem::path& dir);

/// Checks every bundle invariant; empty iff the bundle is valid.
std::vector<Finding> validate_bundle(const LectureBundle& bundle);

/// Loads as far as possible and reports every problem instead of throwing.
std::vector<Finding> validate_bundle_dir(const std::filesystem::path& dir);

}  // namespace marginalia::ingest
