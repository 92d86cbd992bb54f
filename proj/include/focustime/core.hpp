#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "focustime/timeutil.hpp"

namespace ft {

// One tool action by one actor at one instant. The duration is derived from
// the gap to the next event in the same session, not parsed from input.
struct Event {
  std::string actor;
  std::string tool;
  std::string action;
  Millis start_ms = 0;
  std::optional<Millis> duration_ms;  // set by derive_durations
};

// Canonical "tool:action" token, lowercase, single colon. Vocabulary identity
// for the embedding, so canonicalization must be exact and idempotent.
struct EventLabel {
  std::string text;

  bool operator==(const EventLabel&) const = default;
  auto operator<=>(const EventLabel&) const = default;
};

// Throws ValidationError naming the offending field if tool/action is empty
// after trimming or contains the separator.
EventLabel event_label(const Event& e);
EventLabel make_label(std::string_view tool, std::string_view action);

// Splits a canonical label back into (tool, action).
std::pair<std::string, std::string> split_label(std::string_view label_text);

// Maximal run of one actor's events with no start-to-start gap exceeding the
// inactivity threshold. Events are time-ordered and carry derived durations;
// end == last start + last duration (the final duration is always 0).
struct Session {
  std::string actor;
  std::vector<Event> events;
  Millis start_ms = 0;
  Millis end_ms = 0;

  Millis length_ms() const { return end_ms - start_ms; }
};

// Fills durations from successive start gaps (final event gets 0) and sets
// start/end. Events must already be ordered by start.
void derive_durations(Session& s);

// Ground-truth diary row: one activity span with the self-reported judgment.
struct LabeledInterval {
  std::string actor;
  Millis start_ms = 0;
  Millis end_ms = 0;
  bool focused = false;
  std::string note;
};

}  // namespace ft
