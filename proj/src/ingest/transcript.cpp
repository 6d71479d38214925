#include "ingest/transcript.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <istream>
#include <sstream>

#include "common/error.hpp"

namespace marginalia::ingest {
namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

bool is_index_line(std::string_view s) {
  s = trim(s);
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

bool parse_fixed_digits(std::string_view s, std::size_t n, int& out) {
  if (s.size() != n) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

// HH:MM:SS,mmm
bool parse_timecode(std::string_view s, Millis& out) {
  if (s.size() != 12 || s[2] != ':' || s[5] != ':' || s[8] != ',') return false;
  int h = 0, m = 0, sec = 0, ms = 0;
  if (!parse_fixed_digits(s.substr(0, 2), 2, h) || !parse_fixed_digits(s.substr(3, 2), 2, m) ||
      !parse_fixed_digits(s.substr(6, 2), 2, sec) || !parse_fixed_digits(s.substr(9, 3), 3, ms)) {
    return false;
  }
  if (m > 59 || sec > 59) return false;
  out = ((static_cast<Millis>(h) * 60 + m) * 60 + sec) * 1000 + ms;
  return true;
}

bool parse_timing_line(std::string_view line, Millis& start, Millis& end) {
  line = trim(line);
  const auto arrow = line.find("-->");
  if (arrow == std::string_view::npos) return false;
  return parse_timecode(trim(line.substr(0, arrow)), start) &&
         parse_timecode(trim(line.substr(arrow + 3)), end);
}

[[noreturn]] void malformed(std::size_t line_no, const char* what) {
  fail(ErrorCode::MalformedCue,
       "malformed cue at line " + std::to_string(line_no) + ": " + what);
}

bool ends_sentence(std::string_view word) {
  while (!word.empty()) {
    const char c = word.back();
    if (c == '"' || c == '\'' || c == ')' || c == ']') {
      word.remove_suffix(1);
      continue;
    }
    return c == '.' || c == '?' || c == '!';
  }
  return false;
}

struct Word {
  std::string text;
  Millis start_ms;
  Millis end_ms;
};

// Byte offset of the code point boundary at or before `limit` code points.
std::size_t utf8_prefix_bytes(std::string_view s, std::size_t code_points) {
  std::size_t seen = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if ((static_cast<unsigned char>(s[i]) & 0xC0) != 0x80) {
      if (seen == code_points) return i;
      ++seen;
    }
  }
  return s.size();
}

std::vector<Word> split_words(std::span<const TranscriptCue> cues) {
  std::vector<Word> words;
  for (const auto& cue : cues) {
    const std::string_view text = cue.text;
    const auto len = static_cast<Millis>(text.size());
    const Millis span = cue.end_ms - cue.start_ms;
    std::size_t i = 0;
    while (i < text.size()) {
      while (i < text.size() && is_space(text[i])) ++i;
      if (i >= text.size()) break;
      std::size_t j = i;
      while (j < text.size() && !is_space(text[j])) ++j;
      const Millis t0 = cue.start_ms + span * static_cast<Millis>(i) / len;
      const Millis t1 = cue.start_ms + span * static_cast<Millis>(j) / len;
      words.push_back({std::string(text.substr(i, j - i)), t0, t1});
      i = j;
    }
  }
  return words;
}

}  // namespace

std::string normalize_whitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

std::size_t utf8_length(std::string_view text) {
  std::size_t n = 0;
  for (char c : text) {
    if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++n;
  }
  return n;
}

std::vector<TranscriptCue> parse_transcript_cues(std::istream& in) {
  std::vector<TranscriptCue> cues;
  std::string line;
  std::size_t line_no = 0;

  enum class Expect { Index, Timing, FirstText, Text } expect = Expect::Index;
  TranscriptCue current;
  std::string text;
  std::size_t timing_line = 0;

  auto finish_cue = [&] {
    current.text = normalize_whitespace(text);
    if (current.text.empty()) malformed(timing_line + 1, "missing text");
    if (!cues.empty() && current.start_ms < cues.back().start_ms) {
      fail(ErrorCode::NonMonotonicCue,
           "cue " + std::to_string(cues.size()) + " starts before its predecessor");
    }
    cues.push_back(std::move(current));
    current = {};
    text.clear();
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const bool blank = trim(line).empty();

    switch (expect) {
      case Expect::Index:
        if (blank) break;
        if (!is_index_line(line)) malformed(line_no, "expected numeric index");
        expect = Expect::Timing;
        break;
      case Expect::Timing:
        if (!parse_timing_line(line, current.start_ms, current.end_ms)) {
          malformed(line_no, "unparseable timecode");
        }
        if (current.start_ms >= current.end_ms) malformed(line_no, "cue ends before it starts");
        timing_line = line_no;
        expect = Expect::FirstText;
        break;
      case Expect::FirstText:
        if (blank) malformed(line_no, "missing text");
        text = line;
        expect = Expect::Text;
        break;
      case Expect::Text:
        if (blank) {
          finish_cue();
          expect = Expect::Index;
        } else {
          text.push_back(' ');
          text += line;
        }
        break;
    }
  }

  switch (expect) {
    case Expect::Index: break;
    case Expect::Timing: malformed(line_no + 1, "unexpected end of input, expected timecode");
    case Expect::FirstText: malformed(line_no + 1, "missing text");
    case Expect::Text: finish_cue(); break;
  }
  return cues;
}

std::vector<TranscriptCue> parse_transcript_cues(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_transcript_cues(in);
}

std::string format_timecode(Millis ms) {
  const Millis h = ms / 3'600'000;
  const Millis m = (ms / 60'000) % 60;
  const Millis s = (ms / 1000) % 60;
  const Millis milli = ms % 1000;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%02lld:%02lld:%02lld,%03lld", static_cast<long long>(h),
                static_cast<long long>(m), static_cast<long long>(s),
                static_cast<long long>(milli));
  return buf;
}

std::string write_srt(std::span<const TranscriptCue> cues) {
  std::string out;
  for (std::size_t i = 0; i < cues.size(); ++i) {
    out += std::to_string(i + 1);
    out += '\n';
    out += format_timecode(cues[i].start_ms);
    out += " --> ";
    out += format_timecode(cues[i].end_ms);
    out += '\n';
    out += cues[i].text;
    out += "\n\n";
  }
  return out;
}

std::string block_id_for(std::size_t ordinal) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "tb-%04zu", ordinal);
  return buf;
}

std::vector<TranscriptBlock> segment_blocks(std::span<const TranscriptCue> cues,
                                            std::size_t max_block_chars) {
  if (max_block_chars < kMinMaxBlockChars) {
    fail(ErrorCode::InvalidArgument, "max_block_chars must be at least 40");
  }
  std::vector<TranscriptBlock> blocks;
  TranscriptBlock current;
  std::size_t current_len = 0;

  auto close = [&] {
    if (current_len == 0) return;
    current.block_id = block_id_for(blocks.size() + 1);
    blocks.push_back(std::move(current));
    current = {};
    current_len = 0;
  };
  auto append = [&](std::string_view piece, std::size_t piece_len, Millis t0, Millis t1) {
    if (current_len == 0) {
      current.start_ms = t0;
    } else {
      current.text.push_back(' ');
      ++current_len;
    }
    current.text += piece;
    current_len += piece_len;
    current.end_ms = t1;
  };

  for (const Word& word : split_words(cues)) {
    std::string_view rest = word.text;
    std::size_t rest_len = utf8_length(rest);
    Millis rest_start = word.start_ms;
    const auto word_bytes = static_cast<Millis>(word.text.size());
    const Millis word_span = word.end_ms - word.start_ms;

    // Oversized word: hard split into max-length chunks.
    while (rest_len > max_block_chars) {
      close();
      const std::size_t cut = utf8_prefix_bytes(rest, max_block_chars);
      const auto consumed = static_cast<Millis>(word.text.size() - rest.size() + cut);
      const Millis chunk_end = word.start_ms + word_span * consumed / word_bytes;
      append(rest.substr(0, cut), max_block_chars, rest_start, chunk_end);
      close();
      rest.remove_prefix(cut);
      rest_len -= max_block_chars;
      rest_start = chunk_end;
    }
    if (rest.empty()) continue;

    const std::size_t grown = current_len == 0 ? rest_len : current_len + 1 + rest_len;
    if (grown > max_block_chars) close();
    append(rest, rest_len, rest_start, word.end_ms);
    if (ends_sentence(rest) && current_len * 2 >= max_block_chars) close();
  }
  close();
  return blocks;
}

}  // namespace marginalia::ingest
