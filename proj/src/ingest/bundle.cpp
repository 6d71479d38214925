#include "ingest/bundle.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "common/error.hpp"

namespace marginalia::ingest {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

Finding missing_asset(const std::string& ref) {
  return {"MissingAsset", {ref}, "missing asset: " + ref};
}

void check_slides(const LectureBundle& b, std::vector<Finding>& out) {
  bool has_initial = false;
  for (std::size_t i = 0; i < b.slide_events.size(); ++i) {
    const auto& ev = b.slide_events[i];
    const auto id = slide_snapshot_id(i);
    has_initial = has_initial || ev.t_ms == 0;
    if (i > 0) {
      const auto& prev = b.slide_events[i - 1];
      if (ev.t_ms < prev.t_ms) {
        out.push_back({"NonMonotonicSlides", {id}, "non-monotonic slide events"});
      }
      if (std::pair(ev.slide_index, ev.build_index) <
          std::pair(prev.slide_index, prev.build_index)) {
        out.push_back({"NonMonotonicBuilds", {id}, "slide/build order regresses at " + id});
      }
    }
    if (ev.t_ms < 0) out.push_back({"NegativeTimestamp", {id}, "negative timestamp: " + id});
    if (ev.t_ms > b.duration_ms) {
      out.push_back({"EventBeyondDuration", {id}, "timestamp beyond duration: " + id});
    }
    if (ev.slide_index < 0 || ev.build_index < 0) {
      out.push_back({"NegativeIndex", {id}, "negative slide or build index: " + id});
    }
    if (!b.root.empty() && !fs::is_regular_file(b.root / ev.image_ref)) {
      out.push_back(missing_asset(ev.image_ref));
    }
  }
  if (!has_initial) out.push_back({"NoInitialSlide", {}, "no slide event at t=0"});
}

void check_blocks(const LectureBundle& b, std::vector<Finding>& out) {
  for (std::size_t i = 0; i < b.transcript_blocks.size(); ++i) {
    const auto& blk = b.transcript_blocks[i];
    if (blk.start_ms > blk.end_ms) {
      out.push_back({"InvertedBlock", {blk.block_id}, "block ends before it starts: " + blk.block_id});
    }
    if (blk.end_ms > b.duration_ms) {
      out.push_back({"EventBeyondDuration", {blk.block_id},
                     "timestamp beyond duration: " + blk.block_id});
    }
    if (utf8_length(blk.text) > b.max_block_chars) {
      out.push_back({"BlockTooLong", {blk.block_id}, "block exceeds max_block_chars: " + blk.block_id});
    }
    if (i > 0) {
      const auto& prev = b.transcript_blocks[i - 1];
      if (blk.start_ms < prev.end_ms) {
        out.push_back({"OverlappingBlocks", {prev.block_id, blk.block_id},
                       "overlapping transcript blocks " + prev.block_id + ", " + blk.block_id});
      }
      if (blk.block_id <= prev.block_id) {
        out.push_back({"DuplicateBlockId", {blk.block_id}, "block ids not ascending at " + blk.block_id});
      }
    }
  }
}

struct Partial {
  LectureBundle bundle;
  std::vector<Finding> findings;
};

template <typename T>
bool read_field(const json& obj, const char* key, T& out, std::vector<Finding>& findings,
                const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    findings.push_back({"MalformedManifest", {where + "." + key}, "manifest missing field " + where + "." + key});
    return false;
  }
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    findings.push_back({"MalformedManifest", {where + "." + key}, "manifest field has wrong type: " + where + "." + key});
    return false;
  }
  return true;
}

Partial read_bundle(const fs::path& dir) {
  Partial p;
  p.bundle.root = dir;
  auto& findings = p.findings;

  const fs::path manifest_path = dir / "manifest.json";
  const fs::path transcript_path = dir / "transcript.srt";

  if (!fs::is_regular_file(manifest_path)) {
    findings.push_back(missing_asset("manifest.json"));
  } else {
    std::ifstream in(manifest_path);
    json manifest;
    try {
      manifest = json::parse(in);
    } catch (const json::parse_error& e) {
      findings.push_back({"MalformedManifest", {"manifest.json"}, std::string("manifest.json: ") + e.what()});
    }
    if (manifest.is_object()) {
      read_field(manifest, "title", p.bundle.title, findings, "manifest");
      read_field(manifest, "duration_ms", p.bundle.duration_ms, findings, "manifest");
      if (auto it = manifest.find("max_block_chars"); it != manifest.end() && it->is_number_unsigned()) {
        p.bundle.max_block_chars = std::max(it->get<std::size_t>(), kMinMaxBlockChars);
      }
      if (auto it = manifest.find("slide_aspect_ratio"); it != manifest.end()) {
        if (it->is_number() && it->get<double>() > 0) {
          p.bundle.slide_aspect_ratio = it->get<double>();
        } else {
          findings.push_back({"MalformedManifest", {"manifest.slide_aspect_ratio"},
                              "manifest.slide_aspect_ratio must be a positive number"});
        }
      }
      json slides = json::array();
      read_field(manifest, "slides", slides, findings, "manifest");
      if (!slides.is_array()) {
        findings.push_back({"MalformedManifest", {"manifest.slides"}, "manifest.slides must be an array"});
      } else {
        for (std::size_t i = 0; i < slides.size(); ++i) {
          const std::string where = "slides[" + std::to_string(i) + "]";
          if (!slides[i].is_object()) {
            findings.push_back({"MalformedManifest", {where}, where + " must be an object"});
            continue;
          }
          SlideEvent ev;
          bool ok = read_field(slides[i], "t_ms", ev.t_ms, findings, where);
          ok = read_field(slides[i], "image", ev.image_ref, findings, where) && ok;
          ok = read_field(slides[i], "slide_index", ev.slide_index, findings, where) && ok;
          ok = read_field(slides[i], "build_index", ev.build_index, findings, where) && ok;
          if (ok) p.bundle.slide_events.push_back(std::move(ev));
        }
      }
    } else if (!manifest.is_discarded() && !manifest.is_null()) {
      findings.push_back({"MalformedManifest", {"manifest.json"}, "manifest.json must hold an object"});
    }
  }

  if (!fs::is_regular_file(transcript_path)) {
    findings.push_back(missing_asset("transcript.srt"));
  } else {
    std::ifstream in(transcript_path);
    try {
      const auto cues = parse_transcript_cues(in);
      p.bundle.transcript_blocks = segment_blocks(cues, p.bundle.max_block_chars);
    } catch (const Error& e) {
      findings.push_back({"MalformedTranscript", {e.what()}, std::string("transcript.srt: ") + e.what()});
    }
  }

  auto invariant_findings = validate_bundle(p.bundle);
  findings.insert(findings.end(), invariant_findings.begin(), invariant_findings.end());
  return p;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

std::string slide_snapshot_id(std::size_t ordinal) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "sl-%04zu", ordinal);
  return buf;
}

std::optional<std::size_t> slide_ordinal(std::string_view snapshot_id) {
  if (snapshot_id.size() < 4 || snapshot_id.substr(0, 3) != "sl-") return std::nullopt;
  std::size_t n = 0;
  const auto digits = snapshot_id.substr(3);
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
  if (ec != std::errc{} || ptr != digits.data() + digits.size()) return std::nullopt;
  if (slide_snapshot_id(n) != snapshot_id) return std::nullopt;
  return n;
}

const TranscriptBlock* LectureBundle::find_block(std::string_view block_id) const {
  auto ord = block_ordinal(block_id);
  return ord ? &transcript_blocks[*ord] : nullptr;
}

std::optional<std::size_t> LectureBundle::block_ordinal(std::string_view block_id) const {
  // Block ids are "tb-NNNN" with 1-based ordinals, but don't rely on it.
  for (std::size_t i = 0; i < transcript_blocks.size(); ++i) {
    if (transcript_blocks[i].block_id == block_id) return i;
  }
  return std::nullopt;
}

std::string Finding::to_string() const {
  if (args.empty()) return code;
  std::string out = code + "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ",";
    out += quote(args[i]);
  }
  return out + ")";
}

std::vector<Finding> validate_bundle(const LectureBundle& bundle) {
  std::vector<Finding> out;
  check_slides(bundle, out);
  check_blocks(bundle, out);
  return out;
}

std::vector<Finding> validate_bundle_dir(const std::filesystem::path& dir) {
  if (!fs::is_directory(dir)) {
    return {{"MissingAsset", {dir.string()}, "bundle directory not found: " + dir.string()}};
  }
  return read_bundle(dir).findings;
}

LectureBundle load_bundle(const std::filesystem::path& dir) {
  if (!fs::is_directory(dir)) {
    fail(ErrorCode::BundleInvalid, "bundle directory not found: " + dir.string());
  }
  auto p = read_bundle(dir);
  if (!p.findings.empty()) fail(ErrorCode::BundleInvalid, p.findings.front().reason);
  return std::move(p.bundle);
}

}  // namespace marginalia::ingest
