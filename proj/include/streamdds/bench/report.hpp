// Copyright 2026 The streamdds Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef STREAMDDS__BENCH__REPORT_HPP_
#define STREAMDDS__BENCH__REPORT_HPP_

#include <charconv>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "streamdds/bench/stats.hpp"

namespace streamdds::bench
{

/// One configuration (a message size, a subscriber count, a chain mode).
struct BenchRow
{
  std::string label;
  std::optional<Measurement> baseline;
  std::optional<Measurement> streaming;
  /// Same runs measured from before serialization to after deserialization.
  std::optional<Measurement> baseline_with_codec;
  std::optional<Measurement> streaming_with_codec;
  std::uint64_t published = 0;
  std::uint64_t received = 0;

  /// baseline t_avg / streaming t_avg, when both were measured.
  std::optional<double> speedup() const
  {
    if (!baseline || !streaming || streaming->t_avg <= 0.0) {
      return std::nullopt;
    }
    return baseline->t_avg / streaming->t_avg;
  }
};

struct BenchReport
{
  std::string scenario;
  /// Heading of the label column.
  std::string label_heading = "size";
  std::vector<BenchRow> rows;
};

enum class ReportFormat { Csv, Json, Markdown };

inline ReportFormat parse_report_format(std::string_view s)
{
  if (s == "csv") {
    return ReportFormat::Csv;
  }
  if (s == "json") {
    return ReportFormat::Json;
  }
  if (s == "markdown" || s == "md") {
    return ReportFormat::Markdown;
  }
  throw std::invalid_argument("unknown report format '" + std::string(s) + "'");
}

/// "3k" = 3 * 1024, "2m" = 2 * 1024 * 1024, plain digits are bytes.
inline std::size_t parse_size(std::string_view token)
{
  if (token.empty()) {
    throw std::invalid_argument("empty size");
  }
  std::size_t mult = 1;
  char last = token.back();
  if (last == 'k' || last == 'K') {
    mult = 1024;
    token.remove_suffix(1);
  } else if (last == 'm' || last == 'M') {
    mult = 1024 * 1024;
    token.remove_suffix(1);
  }
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (token.empty() || ec != std::errc() || ptr != token.data() + token.size() || value == 0) {
    throw std::invalid_argument("invalid size '" + std::string(token) + "'");
  }
  return value * mult;
}

inline std::vector<std::size_t> parse_size_list(std::string_view list)
{
  std::vector<std::size_t> out;
  std::size_t pos = 0;
  while (pos <= list.size()) {
    std::size_t comma = list.find(',', pos);
    if (comma == std::string_view::npos) {
      comma = list.size();
    }
    out.push_back(parse_size(list.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  return out;
}

inline std::string format_size(std::size_t bytes)
{
  if (bytes >= 1024 * 1024 && bytes % (1024 * 1024) == 0) {
    return std::to_string(bytes / (1024 * 1024)) + "m";
  }
  if (bytes >= 1024 && bytes % 1024 == 0) {
    return std::to_string(bytes / 1024) + "k";
  }
  return std::to_string(bytes);
}

namespace detail
{

inline std::string fixed(double v, int digits)
{
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

inline double to_ms(double ns) {return ns / 1e6;}

inline std::string md_cell(const std::optional<Measurement> & m)
{
  if (!m) {
    return "-";
  }
  return fixed(to_ms(m->t_avg), 4) + " (" + fixed(to_ms(m->sigma), 4) + ")";
}

inline nlohmann::ordered_json measurement_json(const std::optional<Measurement> & m)
{
  if (!m) {
    return nullptr;
  }
  return {{"t_avg_ms", to_ms(m->t_avg)}, {"sigma_ms", to_ms(m->sigma)}, {"n", m->n}};
}

inline void csv_pair(std::ostream & os, const std::optional<Measurement> & m)
{
  if (m) {
    os << ',' << fixed(to_ms(m->t_avg), 6) << ',' << fixed(to_ms(m->sigma), 6);
  } else {
    os << ",,";
  }
}

}  // namespace detail

/// Renders a report. Times are milliseconds. The markdown table has the
/// columns: label, baseline t_avg (σ), streaming t_avg (σ), speedup.
inline std::string emit_report(const BenchReport & report, ReportFormat format)
{
  std::ostringstream os;
  switch (format) {
    case ReportFormat::Markdown:
      os << "| " << report.label_heading << " | baseline t_avg (σ) [ms] | streaming t_avg (σ) [ms] | "
        "speedup |\n";
      os << "|---|---|---|---|\n";
      for (const auto & r : report.rows) {
        auto s = r.speedup();
        os << "| " << r.label << " | " << detail::md_cell(r.baseline) << " | " <<
          detail::md_cell(r.streaming) << " | " << (s ? detail::fixed(*s, 2) : "-") << " |\n";
      }
      break;
    case ReportFormat::Csv:
      os << report.label_heading << ",baseline_avg_ms,baseline_sigma_ms,streaming_avg_ms,"
        "streaming_sigma_ms,speedup,baseline_codec_avg_ms,baseline_codec_sigma_ms,"
        "streaming_codec_avg_ms,streaming_codec_sigma_ms,published,received\n";
      for (const auto & r : report.rows) {
        os << r.label;
        detail::csv_pair(os, r.baseline);
        detail::csv_pair(os, r.streaming);
        auto s = r.speedup();
        os << ',' << (s ? detail::fixed(*s, 4) : "");
        detail::csv_pair(os, r.baseline_with_codec);
        detail::csv_pair(os, r.streaming_with_codec);
        os << ',' << r.published << ',' << r.received << '\n';
      }
      break;
    case ReportFormat::Json: {
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (const auto & r : report.rows) {
          auto s = r.speedup();
          rows.push_back(
          {
            {"label", r.label},
            {"baseline", detail::measurement_json(r.baseline)},
            {"streaming", detail::measurement_json(r.streaming)},
            {"speedup", s ? nlohmann::ordered_json(*s) : nlohmann::ordered_json(nullptr)},
            {"baseline_with_codec", detail::measurement_json(r.baseline_with_codec)},
            {"streaming_with_codec", detail::measurement_json(r.streaming_with_codec)},
            {"published", r.published},
            {"received", r.received},
          });
        }
        nlohmann::ordered_json j{
          {"scenario", report.scenario}, {"label_heading", report.label_heading},
          {"unit", "ms"}, {"rows", std::move(rows)}};
        os << j.dump(2) << '\n';
        break;
      }
  }
  return os.str();
}

inline std::string emit_report(const BenchReport & report, std::string_view format)
{
  return emit_report(report, parse_report_format(format));
}

}  // namespace streamdds::bench

#endif  // STREAMDDS__BENCH__REPORT_HPP_
