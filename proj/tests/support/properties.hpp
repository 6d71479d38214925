#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace marginalia::testing {

struct PropertyReport {
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::vector<std::string> messages;  // first few failures
  std::map<std::string, std::size_t> counters;  // what the cases exercised

  bool ok() const { return cases > 0 && failures == 0; }
  void fail(std::string message);
  void count(const std::string& what, std::size_t n = 1) { counters[what] += n; }
  /// Fails the report if none of the cases exercised `what`.
  void require_coverage(const std::string& what);
  std::string summary() const;
};

/// Every (start state, input kind) pair of the small model against the
/// expected mode path and intent kinds.
PropertyReport fsm_transition_table();

/// Random sample streams; checks mode reachability, state invariants,
/// stroke bracketing and press atomicity after every step.
PropertyReport fsm_fuzz(std::size_t streams, std::size_t length, std::uint64_t seed);

/// Hover/PenDown segments replayed with and without injected gaze samples;
/// cursor coordinates must be bitwise equal.
PropertyReport gaze_decoupling(std::size_t segments, std::uint64_t seed);

/// Captures per snapshot = first annotations after a reset + squeezes.
PropertyReport capture_accounting(std::size_t scripts, std::size_t length, std::uint64_t seed);

/// Slide-only steps leave the transcripts panel untouched and vice versa.
PropertyReport panel_independence(std::size_t scripts, std::size_t length, std::uint64_t seed);

/// Scripted pause scenarios checked against the committed state sequence.
PropertyReport pause_golden(const std::filesystem::path& fixture);

/// Non-overlap, creation-order stacking, frontier monotonicity, whole
/// stroke erasing and revision counting over random op sequences.
PropertyReport layout_invariants(std::size_t documents, std::uint64_t seed);

/// Erase results against a brute-force distance oracle.
PropertyReport erase_oracle(std::size_t cases, std::uint64_t seed);

/// SRT round trip plus segmentation invariants over random transcripts.
PropertyReport ingest_fuzz(std::size_t cases, std::uint64_t seed);

}  // namespace marginalia::testing
