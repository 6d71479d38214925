#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace marginalia::ingest {

using Millis = std::int64_t;

inline constexpr std::size_t kDefaultMaxBlockChars = 280;
inline constexpr std::size_t kMinMaxBlockChars = 40;

struct TranscriptCue {
  Millis start_ms = 0;
  Millis end_ms = 0;
  std::string text;

  friend bool operator==(const TranscriptCue&, const TranscriptCue&) = default;
};

struct TranscriptBlock {
  std::string block_id;
  Millis start_ms = 0;
  Millis end_ms = 0;
  std::string text;

  friend bool operator==(const TranscriptBlock&, const TranscriptBlock&) = default;
};

/// Parses the SRT subset: numeric index line, `HH:MM:SS,mmm --> HH:MM:SS,mmm`,
/// one or more text lines, blank-line separator. Index values are not
/// interpreted; cues keep file order, which must be non-decreasing in start
/// time. Cue text has whitespace runs collapsed and is trimmed.
///
/// Throws Error(MalformedCue) naming the 1-based line, or
/// Error(NonMonotonicCue) naming the 0-based entry position.
std::vector<TranscriptCue> parse_transcript_cues(std::istream& in);
std::vector<TranscriptCue> parse_transcript_cues(std::string_view text);

/// Inverse of parse_transcript_cues for already-normalized cues.
std::string write_srt(std::span<const TranscriptCue> cues);

/// Formats milliseconds as `HH:MM:SS,mmm`.
std::string format_timecode(Millis ms);

/// Greedy sentence-aware blocking. Words accumulate into a block until a
/// word ending in `.`, `?` or `!` leaves the block at least half of
/// `max_block_chars` long, or until the next word would push it past
/// `max_block_chars`. Word timestamps are interpolated across each cue by
/// character offset so consecutive blocks never overlap in time. A single
/// word longer than `max_block_chars` is the one case split mid-word.
std::vector<TranscriptBlock> segment_blocks(std::span<const TranscriptCue> cues,
                                            std::size_t max_block_chars = kDefaultMaxBlockChars);

std::string block_id_for(std::size_t ordinal);

/// Collapses whitespace runs to single spaces and trims both ends.
std::string normalize_whitespace(std::string_view text);

/// Number of UTF-8 code points in `text`.
std::size_t utf8_length(std::string_view text);

}  // namespace marginalia::ingest
