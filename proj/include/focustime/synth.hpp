#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "focustime/core.hpp"
#include "focustime/validation.hpp"

namespace ft {

struct IntRange {
  std::int64_t lo = 0;
  std::int64_t hi = 0;

  bool operator==(const IntRange&) const = default;
};

// Deterministic synthetic corpus with planted focus/diffuse phases.
//
// A workday is a run of blocks separated by inactive breaks; a block is
// [diffuse,focus], a lone focus sprint, or a lone diffuse stretch (meetings,
// triage). Focus phases draw labels from one vocabulary cluster with
// occasional escapes; diffuse phases draw uniformly over all clusters.
struct SynthConfig {
  std::uint64_t seed = 1;
  std::uint32_t n_actors = 10;
  std::uint32_t days = 5;
  std::uint32_t vocab_clusters = 6;
  std::uint32_t labels_per_cluster = 8;
  IntRange focus_phase_minutes{20, 90};
  IntRange diffuse_phase_minutes{10, 40};
  IntRange focus_event_gap_seconds{5, 60};
  IntRange diffuse_event_gap_seconds{5, 120};
  double cluster_escape_prob = 0.05;

  // day structure
  IntRange blocks_per_day{3, 5};
  IntRange break_minutes{12, 40};
  double focus_only_block_prob = 0.2;
  double diffuse_only_block_prob = 0.2;
  std::int64_t day_start_utc_minutes = 9 * 60;  // 09:00
  std::int32_t start_year = 2021;
  std::uint32_t start_month = 1;
  std::uint32_t start_day = 4;

  void validate() const;  // throws ConfigError
};

struct PhaseRecord {
  std::string actor;
  Millis start_ms = 0;
  Millis end_ms = 0;
  bool focus = false;
  std::int32_t cluster = -1;  // -1 for diffuse phases
};

struct SynthOutput {
  std::vector<Event> events;           // actor order, chronological per actor
  std::vector<PhaseRecord> ground_truth;
  std::vector<Diary> diaries;          // one per actor-day, intervals = phases
};

// Byte-identical output for identical config.
SynthOutput generate(const SynthConfig& config);

// The exact ingest JSONL format: {"actor","tool","action","ts_ms"}.
void write_events_jsonl(std::ostream& out, const std::vector<Event>& events);

// {"actor","start_ms","end_ms","phase","cluster"}
void write_ground_truth_jsonl(std::ostream& out, const std::vector<PhaseRecord>& phases);

}  // namespace ft
