#include "ifgen/proto/transcript.hpp"

#include <algorithm>
#include <atomic>
#include <set>

namespace ifgen::proto {

namespace {
std::atomic<std::uint64_t> g_seq{0};
}

Transcript::Transcript(const Transcript& other) : entries_(other.entries()) {}

Transcript& Transcript::operator=(const Transcript& other) {
  if (this != &other) {
    auto copy = other.entries();
    std::lock_guard lock(mu_);
    entries_ = std::move(copy);
  }
  return *this;
}

void Transcript::record(int step, std::string actor, std::string event, std::string detail) {
  std::lock_guard lock(mu_);
  entries_.push_back({++g_seq, step, std::move(actor), std::move(event), std::move(detail)});
}

std::vector<TranscriptEntry> Transcript::entries() const {
  std::lock_guard lock(mu_);
  return entries_;
}

std::string Transcript::render() const { return proto::render(entries()); }

std::string render(const std::vector<TranscriptEntry>& entries) {
  std::string out;
  for (const auto& e : entries) {
    out += "[step " + std::to_string(e.step) + "] " + e.actor + " " + e.event;
    if (!e.detail.empty()) out += ": " + e.detail;
    out += "\n";
  }
  return out;
}

std::vector<TranscriptEntry> merge(const std::vector<std::vector<TranscriptEntry>>& parts) {
  std::vector<TranscriptEntry> all;
  for (const auto& p : parts) all.insert(all.end(), p.begin(), p.end());
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.seq < b.seq; });
  return all;
}

std::string check_flow(const std::vector<TranscriptEntry>& entries, bool expect_success) {
  if (entries.empty()) return "empty transcript";
  std::set<int> seen;
  int prev = 0;
  for (const auto& e : entries) {
    if (e.step < 1 || e.step > 9) return "step " + std::to_string(e.step) + " out of range at " + e.event;
    bool repair = prev == 6 && e.step == 5;
    if (e.step < prev && !repair) {
      return "step " + std::to_string(e.step) + " (" + e.event + ") after step " + std::to_string(prev);
    }
    if (e.step > prev + 1 && !seen.count(e.step - 1) && prev != 0) {
      return "step " + std::to_string(e.step) + " (" + e.event + ") skips step " + std::to_string(e.step - 1);
    }
    seen.insert(e.step);
    prev = e.step;
  }
  if (entries.front().step != 1) return "flow does not start at step 1";
  int last = expect_success ? 9 : 7;
  for (int s = 1; s <= last; ++s) {
    if (!seen.count(s)) return "step " + std::to_string(s) + " missing";
  }
  if (!expect_success && (seen.count(8) || seen.count(9))) return "control traffic after a failed provisioning";
  return {};
}

}  // namespace ifgen::proto
