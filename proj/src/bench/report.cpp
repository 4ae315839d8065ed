#include "ifgen/bench/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "ifgen/doc/codec.hpp"
#include "ifgen/error.hpp"

namespace ifgen::bench {

namespace {

constexpr const char* kHeader =
    "task,series,subject,attempts,wall_time_ms,prompt_tokens,completion_tokens,cost,success,note";

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// Splits one CSV record starting at `pos`; advances past its line end.
std::vector<std::string> csv_row(std::string_view text, std::size_t& pos) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  while (pos < text.size()) {
    char c = text[pos++];
    if (quoted) {
      if (c == '"') {
        if (pos < text.size() && text[pos] == '"') {
          cur += '"';
          ++pos;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"' && cur.empty()) {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else if (c == '\n') {
      break;
    } else if (c != '\r') {
      cur += c;
    }
  }
  if (quoted) throw Error(ErrorCode::syntax, "unterminated quoted field");
  fields.push_back(std::move(cur));
  return fields;
}

std::int64_t to_int(const std::string& s, const char* what) {
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw Error(ErrorCode::syntax, std::string("bad ") + what + ": '" + s + "'");
  return v;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Rounds up to 1, 2 or 5 times a power of ten.
double nice_ceiling(double v) {
  if (v <= 0) return 1;
  double p = std::pow(10.0, std::floor(std::log10(v)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (m * p >= v) return m * p;
  }
  return 10 * p;
}

}  // namespace

std::vector<SeriesSummary> summarize(const std::vector<MetricsRecord>& records) {
  std::vector<SeriesSummary> out;
  for (const auto& r : records) {
    auto task = std::string(to_string(r.task));
    auto it = std::find_if(out.begin(), out.end(), [&](const SeriesSummary& s) { return s.task == task && s.series == r.series; });
    if (it == out.end()) {
      out.push_back({task, r.series});
      it = out.end() - 1;
    }
    ++it->records;
    it->successes += r.success ? 1 : 0;
    it->attempts += r.attempts;
    it->wall_time += r.wall_time;
    it->usage += r.usage;
    it->cost += r.cost;
  }
  return out;
}

std::string records_csv(const std::vector<MetricsRecord>& records) {
  std::string out = std::string(kHeader) + "\n";
  for (const auto& r : records) {
    out += std::string(to_string(r.task)) + "," + csv_field(r.series) + "," + csv_field(r.subject) + "," +
           std::to_string(r.attempts) + "," + std::to_string(r.wall_time.count()) + "," +
           std::to_string(r.usage.prompt_tokens) + "," + std::to_string(r.usage.completion_tokens) + "," +
           r.cost.to_string() + "," + (r.success ? "true" : "false") + "," + csv_field(r.note) + "\n";
  }
  return out;
}

std::vector<MetricsRecord> parse_records_csv(std::string_view text) {
  std::size_t pos = 0;
  auto header = csv_row(text, pos);
  std::string joined;
  for (std::size_t i = 0; i < header.size(); ++i) joined += (i ? "," : "") + header[i];
  if (joined != kHeader) throw Error(ErrorCode::syntax, "unexpected CSV header");
  std::vector<MetricsRecord> out;
  while (pos < text.size()) {
    auto f = csv_row(text, pos);
    if (f.size() == 1 && f[0].empty()) continue;
    if (f.size() != 10) throw Error(ErrorCode::syntax, "row " + std::to_string(out.size() + 1) + " has " + std::to_string(f.size()) + " fields");
    MetricsRecord r;
    auto task = parse_task(f[0]);
    if (!task) throw Error(ErrorCode::syntax, "unknown task '" + f[0] + "'");
    r.task = *task;
    r.series = f[1];
    r.subject = f[2];
    r.attempts = static_cast<int>(to_int(f[3], "attempts"));
    r.wall_time = std::chrono::milliseconds(to_int(f[4], "wall_time_ms"));
    r.usage.prompt_tokens = to_int(f[5], "prompt_tokens");
    r.usage.completion_tokens = to_int(f[6], "completion_tokens");
    r.cost = gen::Money::parse(f[7]);
    if (f[8] != "true" && f[8] != "false") throw Error(ErrorCode::syntax, "bad success flag '" + f[8] + "'");
    r.success = f[8] == "true";
    r.note = f[9];
    out.push_back(std::move(r));
  }
  return out;
}

std::string render_chart(const std::vector<MetricsRecord>& records, const std::string& title) {
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};
  constexpr double W = 640, H = 420, left = 60, right = 150, top = 40, bottom = 50;
  const double pw = W - left - right, ph = H - top - bottom;

  std::vector<std::string> series;
  double max_t = 0, max_a = 0;
  std::int64_t max_cost = 0;
  for (const auto& r : records) {
    if (std::find(series.begin(), series.end(), r.series) == series.end()) series.push_back(r.series);
    max_t = std::max(max_t, static_cast<double>(r.wall_time.count()));
    max_a = std::max(max_a, static_cast<double>(r.attempts));
    max_cost = std::max(max_cost, r.cost.picos());
  }
  max_t = nice_ceiling(max_t);
  max_a = std::max(1.0, std::ceil(max_a));

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << left << "\" y=\"22\" font-size=\"14\">" << escape_xml(title) << "</text>\n";
  s << "<g stroke=\"#444\">\n";
  s << "<line x1=\"" << left << "\" y1=\"" << top + ph << "\" x2=\"" << left + pw << "\" y2=\"" << top + ph << "\"/>\n";
  s << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + ph << "\"/>\n";
  s << "</g>\n";
  for (int i = 0; i <= 5; ++i) {
    double x = left + pw * i / 5;
    s << "<text x=\"" << fmt(x) << "\" y=\"" << top + ph + 16 << "\" text-anchor=\"middle\">" << fmt(max_t * i / 5) << "</text>\n";
  }
  int a_step = std::max(1, static_cast<int>(std::ceil(max_a / 5)));
  for (int a = 0; a <= max_a; a += a_step) {
    double y = top + ph - ph * a / max_a;
    s << "<text x=\"" << left - 8 << "\" y=\"" << fmt(y + 4) << "\" text-anchor=\"end\">" << a << "</text>\n";
  }
  s << "<text x=\"" << left + pw / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">total time (ms)</text>\n";
  s << "<text transform=\"translate(16 " << top + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">attempts</text>\n";

  for (std::size_t si = 0; si < series.size(); ++si) {
    const char* colour = palette[si % std::size(palette)];
    s << "<g fill=\"" << colour << "\" fill-opacity=\"0.5\" stroke=\"" << colour << "\">\n";
    for (const auto& r : records) {
      if (r.series != series[si]) continue;
      double x = left + pw * static_cast<double>(r.wall_time.count()) / max_t;
      double y = top + ph - ph * r.attempts / max_a;
      double frac = max_cost > 0 ? static_cast<double>(r.cost.picos()) / static_cast<double>(max_cost) : 0.0;
      double radius = 2.0 + 10.0 * std::sqrt(frac);
      s << "<circle cx=\"" << fmt(x) << "\" cy=\"" << fmt(y) << "\" r=\"" << fmt(radius) << "\"><title>"
        << escape_xml(r.subject) << "</title></circle>\n";
    }
    s << "</g>\n";
    double ly = top + 10 + 18.0 * static_cast<double>(si);
    s << "<circle cx=\"" << W - right + 20 << "\" cy=\"" << fmt(ly) << "\" r=\"5\" fill=\"" << colour << "\"/>\n";
    s << "<text x=\"" << W - right + 30 << "\" y=\"" << fmt(ly + 4) << "\">" << escape_xml(series[si]) << "</text>\n";
  }
  s << "<text x=\"" << W - right + 12 << "\" y=\"" << fmt(top + 18.0 * static_cast<double>(series.size()) + 14)
    << "\" fill=\"#666\">marker area ~ cost</text>\n";
  s << "</svg>\n";
  return s.str();
}

std::string render_summary(const std::vector<MetricsRecord>& records, const std::vector<std::string>& notes) {
  std::string out;
  for (const auto& s : summarize(records)) {
    char rate[32];
    std::snprintf(rate, sizeof rate, "%.4f", s.success_rate());
    out += "task: " + s.task + "\n";
    out += "series: " + s.series + "\n";
    out += "records: " + std::to_string(s.records) + "\n";
    out += "successes: " + std::to_string(s.successes) + "\n";
    out += "success_rate: " + std::string(rate) + "\n";
    out += "attempts: " + std::to_string(s.attempts) + "\n";
    out += "wall_time_ms: " + std::to_string(s.wall_time.count()) + "\n";
    out += "prompt_tokens: " + std::to_string(s.usage.prompt_tokens) + "\n";
    out += "completion_tokens: " + std::to_string(s.usage.completion_tokens) + "\n";
    out += "cost: " + s.cost.to_string() + "\n\n";
  }
  for (const auto& n : notes) out += n + "\n";
  return out;
}

void emit_results(const std::vector<MetricsRecord>& records, const std::filesystem::path& dir, const std::string& title,
                  const std::vector<std::string>& notes) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::io, "cannot create " + dir.string() + ": " + ec.message());
  doc::write_file((dir / "records.csv").string(), records_csv(records));
  doc::write_file((dir / "chart.svg").string(), render_chart(records, title));
  doc::write_file((dir / "summary.txt").string(), render_summary(records, notes));
}

}  // namespace ifgen::bench
