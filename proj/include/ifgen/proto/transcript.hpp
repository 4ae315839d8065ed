#pragma once

#include <cstdint>
#include <mutex>
#include <string>
#include <vector>

namespace ifgen::proto {

/// Sequence steps of one interface-generation exchange:
///  1 requirements handed to the matching agent
///  2 discovery, trust and capability matching
///  3 CFR and interface client built
///  4 CFR posted
///  5 binding generated from the internal API document
///  6 binding tested (repeats with 5 on repair)
///  7 provisioning outcome delivered
///  8 client connects to the control port
///  9 control traffic
struct TranscriptEntry {
  std::uint64_t seq = 0;  // process-wide order
  int step = 0;
  std::string actor;
  std::string event;
  std::string detail;
};

class Transcript {
 public:
  Transcript() = default;
  Transcript(const Transcript& other);
  Transcript& operator=(const Transcript& other);

  void record(int step, std::string actor, std::string event, std::string detail = {});
  std::vector<TranscriptEntry> entries() const;
  /// "[step 4] ric-1 cfr_post: 10 entries" per line.
  std::string render() const;

 private:
  mutable std::mutex mu_;
  std::vector<TranscriptEntry> entries_;
};

/// Entries of several transcripts in recording order.
std::vector<TranscriptEntry> merge(const std::vector<std::vector<TranscriptEntry>>& parts);

/// Checks a session's entries against the expected order: steps never go
/// back except 6 -> 5 on repair, and a successful session visits 1 to 9.
/// Returns an empty string when it conforms, else what went wrong.
std::string check_flow(const std::vector<TranscriptEntry>& entries, bool expect_success = true);

std::string render(const std::vector<TranscriptEntry>& entries);

}  // namespace ifgen::proto
