#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ifgen/bench/harness.hpp"

namespace ifgen::bench {

struct SeriesSummary {
  std::string task;
  std::string series;
  int records = 0;
  int successes = 0;
  std::int64_t attempts = 0;
  std::chrono::milliseconds wall_time{0};
  gen::TokenUsage usage;
  gen::Money cost;

  double success_rate() const { return records == 0 ? 0.0 : static_cast<double>(successes) / records; }
  bool operator==(const SeriesSummary&) const = default;
};

/// One summary per (task, series), ordered by first appearance.
std::vector<SeriesSummary> summarize(const std::vector<MetricsRecord>& records);

/// Header row then one row per record:
/// task,series,subject,attempts,wall_time_ms,prompt_tokens,completion_tokens,cost,success,note
std::string records_csv(const std::vector<MetricsRecord>& records);
/// Inverse of records_csv. Throws Error(syntax) on malformed rows.
std::vector<MetricsRecord> parse_records_csv(std::string_view text);

/// Scatter of attempts against total time, marker area proportional to
/// cost, one colour per series.
std::string render_chart(const std::vector<MetricsRecord>& records, const std::string& title);

/// Totals per series followed by `notes`, one per line.
std::string render_summary(const std::vector<MetricsRecord>& records, const std::vector<std::string>& notes = {});

/// Writes records.csv, chart.svg and summary.txt into `dir`, creating it.
/// Throws Error(io).
void emit_results(const std::vector<MetricsRecord>& records, const std::filesystem::path& dir, const std::string& title,
                  const std::vector<std::string>& notes = {});

}  // namespace ifgen::bench
