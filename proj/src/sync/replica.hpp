#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "notes/document.hpp"
#include "sync/protocol.hpp"

namespace marginalia::sync {

/// Client-side mirror of the engine state, rebuilt from a FullState and kept
/// current by deltas. Reference implementation of the client rules: a
/// delta_seq gap makes it drop deltas and ask for a FullState.
class Replica {
 public:
  /// Processes one server message. Returns the message to send back, if any
  /// (a resync request after a gap).
  std::optional<std::string> receive(std::string_view text);
  void apply(const Envelope& envelope);

  bool synced() const { return synced_; }
  std::uint64_t engine_seq() const { return engine_seq_; }
  std::uint64_t delta_seq() const { return delta_seq_; }
  std::uint64_t resyncs_requested() const { return resyncs_; }

  nlohmann::json canonical_state() const;
  std::string digest() const;
  const notes::NoteDocument& document() const { return document_; }
  const nlohmann::json& interaction() const { return interaction_; }
  const nlohmann::json& navigator() const { return navigator_; }
  const nlohmann::json& lecture() const { return lecture_; }
  const nlohmann::json& layout() const { return layout_; }

 private:
  std::optional<std::string> request_resync();

  bool synced_ = false;
  bool awaiting_full_state_ = false;
  std::uint64_t engine_seq_ = 0;
  std::uint64_t delta_seq_ = 0;
  std::uint64_t out_seq_ = 0;
  std::uint64_t resyncs_ = 0;
  Millis clock_ms_ = 0;
  notes::NoteDocument document_;
  nlohmann::json slides_;
  nlohmann::json transcripts_;
  nlohmann::json tools_;
  nlohmann::json interaction_;
  nlohmann::json navigator_;
  nlohmann::json lecture_;
  nlohmann::json layout_;
};

}  // namespace marginalia::sync
