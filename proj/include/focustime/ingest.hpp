#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "focustime/core.hpp"

namespace ft {

enum class LogFormat { jsonl, csv };

LogFormat parse_log_format(std::string_view name);  // "jsonl" | "csv"

struct IngestConfig {
  LogFormat format = LogFormat::jsonl;
  Millis inactivity_gap_ms = 10 * kMillisPerMinute;
  bool strict = false;  // reject on first malformed row instead of skipping
};

struct RowDiagnostic {
  std::size_t row = 0;  // 1-based, header excluded for CSV
  std::string reason;
};

struct ParseResult {
  std::vector<Event> events;  // input order
  std::vector<RowDiagnostic> diagnostics;
};

// Parses JSONL ({"actor","tool","action","ts_ms"}) or CSV (same header names).
// In strict mode the first malformed row throws ValidationError carrying the
// row number and reason; otherwise bad rows are skipped and reported.
ParseResult parse_events(std::istream& in, const IngestConfig& config);

// Partitions each actor's events into sessions: per actor, sort by start
// (ties keep input order), break whenever the start-to-start gap exceeds
// `gap_ms`, then derive durations. Output is ordered by (actor, start).
std::vector<Session> sessionize(std::vector<Event> events, Millis gap_ms);

// Session persistence: one JSON object per line,
// {actor, start_ms, end_ms, events: [{label, start_ms, dur_ms}]}.
void write_sessions_jsonl(std::ostream& out, const std::vector<Session>& sessions);
std::vector<Session> read_sessions_jsonl(std::istream& in);

}  // namespace ft
