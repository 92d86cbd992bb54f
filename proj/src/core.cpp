#include "focustime/core.hpp"

#include <algorithm>
#include <cctype>

#include "focustime/errors.hpp"

namespace ft {

namespace {

std::string canonicalize(std::string_view raw, const char* field) {
  std::size_t b = 0;
  std::size_t e = raw.size();
  while (b < e && std::isspace(static_cast<unsigned char>(raw[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(raw[e - 1]))) --e;
  if (b == e) {
    throw ValidationError(std::string("event ") + field + " is empty");
  }
  std::string out;
  out.reserve(e - b);
  for (std::size_t i = b; i < e; ++i) {
    const char c = raw[i];
    if (c == ':') {
      throw ValidationError(std::string("event ") + field + " contains ':'");
    }
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

}  // namespace

EventLabel make_label(std::string_view tool, std::string_view action) {
  std::string text = canonicalize(tool, "tool");
  text.push_back(':');
  text += canonicalize(action, "action");
  return EventLabel{std::move(text)};
}

EventLabel event_label(const Event& e) { return make_label(e.tool, e.action); }

std::pair<std::string, std::string> split_label(std::string_view label_text) {
  const auto pos = label_text.find(':');
  if (pos == std::string_view::npos || label_text.find(':', pos + 1) != std::string_view::npos) {
    throw ValidationError("malformed label '" + std::string(label_text) +
                          "': expected exactly one ':'");
  }
  return {std::string(label_text.substr(0, pos)), std::string(label_text.substr(pos + 1))};
}

void derive_durations(Session& s) {
  if (s.events.empty()) {
    throw ValidationError("session has no events");
  }
  for (std::size_t i = 0; i + 1 < s.events.size(); ++i) {
    if (s.events[i + 1].start_ms < s.events[i].start_ms) {
      throw ValidationError("session events are not time-ordered");
    }
    s.events[i].duration_ms = s.events[i + 1].start_ms - s.events[i].start_ms;
  }
  s.events.back().duration_ms = 0;
  s.start_ms = s.events.front().start_ms;
  s.end_ms = s.events.back().start_ms + *s.events.back().duration_ms;
}

}  // namespace ft
