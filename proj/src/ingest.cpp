#include "focustime/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <map>

#include "json.hpp"

#include "focustime/csv.hpp"
#include "focustime/errors.hpp"

namespace ft {

namespace {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

// Validates one candidate record; returns the reason it is unusable, or
// empty. Canonicalization is re-run later, so it must succeed here.
std::string check_fields(const std::string& actor, const std::string& tool,
                         const std::string& action, Millis ts_ms) {
  if (actor.empty()) return "empty actor";
  try {
    make_label(tool, action);
  } catch (const ValidationError& e) {
    return e.what();
  }
  if (ts_ms < 0) return "negative timestamp";
  return {};
}

bool parse_int(const std::string& s, std::int64_t& out) {
  const std::string t = trim(s);
  if (t.empty()) return false;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

void reject(ParseResult& result, bool strict, std::size_t row, std::string reason) {
  if (strict) {
    throw ValidationError("row " + std::to_string(row) + ": " + reason);
  }
  result.diagnostics.push_back({row, std::move(reason)});
}

ParseResult parse_events_jsonl(std::istream& in, const IngestConfig& config) {
  ParseResult result;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    json obj = json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) {
      reject(result, config.strict, row, "not a JSON object");
      continue;
    }
    std::string missing;
    for (const char* key : {"actor", "tool", "action", "ts_ms"}) {
      if (!obj.contains(key)) missing = key;
    }
    if (!missing.empty()) {
      reject(result, config.strict, row, "missing field '" + missing + "'");
      continue;
    }
    if (!obj["actor"].is_string() || !obj["tool"].is_string() || !obj["action"].is_string()) {
      reject(result, config.strict, row, "actor/tool/action must be strings");
      continue;
    }
    if (!obj["ts_ms"].is_number_integer()) {
      reject(result, config.strict, row, "ts_ms must be an integer");
      continue;
    }
    Event e;
    e.actor = trim(obj["actor"].get<std::string>());
    e.tool = obj["tool"].get<std::string>();
    e.action = obj["action"].get<std::string>();
    e.start_ms = obj["ts_ms"].get<std::int64_t>();
    if (std::string reason = check_fields(e.actor, e.tool, e.action, e.start_ms);
        !reason.empty()) {
      reject(result, config.strict, row, std::move(reason));
      continue;
    }
    result.events.push_back(std::move(e));
  }
  if (in.bad()) throw IoError("failed reading event stream");
  return result;
}

ParseResult parse_events_csv(std::istream& in, const IngestConfig& config) {
  ParseResult result;
  CsvReader reader(in);
  auto header = reader.next();
  if (!header) throw ValidationError("empty CSV input: missing header");

  std::map<std::string, std::size_t> columns;
  for (std::size_t i = 0; i < header->size(); ++i) columns[trim((*header)[i])] = i;
  for (const char* key : {"actor", "tool", "action", "ts_ms"}) {
    if (!columns.count(key)) {
      throw ValidationError(std::string("CSV header missing column '") + key + "'");
    }
  }

  std::size_t row = 0;
  while (auto fields = reader.next()) {
    ++row;
    if (fields->size() == 1 && trim((*fields)[0]).empty()) continue;
    auto get = [&](const char* key) -> const std::string* {
      const std::size_t idx = columns.at(key);
      return idx < fields->size() ? &(*fields)[idx] : nullptr;
    };
    const std::string* actor = get("actor");
    const std::string* tool = get("tool");
    const std::string* action = get("action");
    const std::string* ts = get("ts_ms");
    if (!actor || !tool || !action || !ts) {
      reject(result, config.strict, row, "too few columns");
      continue;
    }
    std::int64_t ts_ms = 0;
    if (!parse_int(*ts, ts_ms)) {
      reject(result, config.strict, row, "ts_ms is not an integer");
      continue;
    }
    Event e{trim(*actor), *tool, *action, ts_ms, std::nullopt};
    if (std::string reason = check_fields(e.actor, e.tool, e.action, e.start_ms);
        !reason.empty()) {
      reject(result, config.strict, row, std::move(reason));
      continue;
    }
    result.events.push_back(std::move(e));
  }
  if (in.bad()) throw IoError("failed reading event stream");
  return result;
}

}  // namespace

LogFormat parse_log_format(std::string_view name) {
  if (name == "jsonl") return LogFormat::jsonl;
  if (name == "csv") return LogFormat::csv;
  throw ConfigError("unknown log format '" + std::string(name) + "' (expected jsonl or csv)");
}

ParseResult parse_events(std::istream& in, const IngestConfig& config) {
  return config.format == LogFormat::jsonl ? parse_events_jsonl(in, config)
                                           : parse_events_csv(in, config);
}

std::vector<Session> sessionize(std::vector<Event> events, Millis gap_ms) {
  if (gap_ms <= 0) throw ConfigError("inactivity gap must be positive");

  // Group in actor order; stable sort keeps input order for equal timestamps.
  std::map<std::string, std::vector<Event>> by_actor;
  for (auto& e : events) by_actor[e.actor].push_back(std::move(e));

  std::vector<Session> sessions;
  for (auto& [actor, stream] : by_actor) {
    std::stable_sort(stream.begin(), stream.end(),
                     [](const Event& a, const Event& b) { return a.start_ms < b.start_ms; });
    std::size_t begin = 0;
    for (std::size_t i = 1; i <= stream.size(); ++i) {
      const bool breaks =
          i == stream.size() || stream[i].start_ms - stream[i - 1].start_ms > gap_ms;
      if (!breaks) continue;
      Session s;
      s.actor = actor;
      s.events.assign(stream.begin() + static_cast<std::ptrdiff_t>(begin),
                      stream.begin() + static_cast<std::ptrdiff_t>(i));
      derive_durations(s);
      sessions.push_back(std::move(s));
      begin = i;
    }
  }
  return sessions;
}

void write_sessions_jsonl(std::ostream& out, const std::vector<Session>& sessions) {
  for (const Session& s : sessions) {
    ojson obj;
    obj["actor"] = s.actor;
    obj["start_ms"] = s.start_ms;
    obj["end_ms"] = s.end_ms;
    ojson events = ojson::array();
    for (const Event& e : s.events) {
      events.push_back(
          {{"label", event_label(e).text}, {"start_ms", e.start_ms}, {"dur_ms", *e.duration_ms}});
    }
    obj["events"] = std::move(events);
    out << obj.dump() << '\n';
  }
  if (!out) throw IoError("failed writing sessions");
}

std::vector<Session> read_sessions_jsonl(std::istream& in) {
  std::vector<Session> sessions;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    json obj = json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.is_object() || !obj.contains("actor") ||
        !obj.contains("events") || !obj["events"].is_array() || obj["events"].empty()) {
      throw FormatError("sessions line " + std::to_string(row) + ": malformed session record");
    }
    Session s;
    s.actor = obj["actor"].get<std::string>();
    for (const auto& ev : obj["events"]) {
      if (!ev.contains("label") || !ev.contains("start_ms") || !ev.contains("dur_ms")) {
        throw FormatError("sessions line " + std::to_string(row) + ": malformed event record");
      }
      auto [tool, action] = split_label(ev["label"].get<std::string>());
      Event e;
      e.actor = s.actor;
      e.tool = std::move(tool);
      e.action = std::move(action);
      e.start_ms = ev["start_ms"].get<std::int64_t>();
      e.duration_ms = ev["dur_ms"].get<std::int64_t>();
      s.events.push_back(std::move(e));
    }
    s.start_ms = obj.value("start_ms", s.events.front().start_ms);
    s.end_ms = obj.value("end_ms", s.events.back().start_ms);
    sessions.push_back(std::move(s));
  }
  if (in.bad()) throw IoError("failed reading sessions");
  return sessions;
}

}  // namespace ft
