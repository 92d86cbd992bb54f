#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "focustime/core.hpp"
#include "focustime/embedding.hpp"

namespace ft {

struct FocusParams {
  Millis window_ms = 60 * kMillisPerMinute;  // W
  double buffer_ms = 10.0;                   // B
  double threshold = 0.2;
  Millis merge_gap_ms = 10 * kMillisPerMinute;

  void validate() const;  // throws ConfigError
};

// One sliding window, anchored at an event start, spanning [start, start+W).
// Membership is the contiguous event range [first_event, last_event].
struct FocusWindow {
  std::size_t anchor_index = 0;
  Millis start_ms = 0;
  Millis end_ms = 0;
  std::size_t first_event = 0;
  std::size_t last_event = 0;
  double value = 0.0;
};

// Event paired with the value of the earliest window containing it.
struct ScoredEvent {
  std::size_t event_index = 0;
  double focus_value = 0.0;
};

struct ScoredSession {
  std::vector<FocusWindow> windows;       // one per event, anchor order
  std::vector<ScoredEvent> scored_events;
};

// Contiguous sub-threshold span of one actor's time.
struct FocusSession {
  std::string actor;
  Millis start_ms = 0;
  Millis end_ms = 0;
  double mean_value = 0.0;
  std::uint64_t event_count = 0;
};

struct WindowEvent {
  EventLabel label;
  Millis duration_ms = 0;
};

// Weighted mean pairwise distance over unordered pairs e != f, weights
// (|e|+B)(|f|+B). `dist` supplies the pairwise distances; indices refer to
// positions in `events`. This is the reference route for arbitrary distance
// functions; the model-backed overload below is the production path.
double focus_value(std::span<const WindowEvent> events,
                   const std::function<double(std::size_t, std::size_t)>& dist, double buffer_ms);

double focus_value(std::span<const WindowEvent> events, const EmbeddingModel& model,
                   double buffer_ms);

// Precomputes unit vectors for a model so repeated scoring avoids per-call
// normalization. Immutable and shareable across scoring threads.
//
// Labels missing from the vocabulary score a fixed distance of 0.5 to every
// other label and 0 to themselves; callers intern them as negative ids local
// to the window/session being scored (windows never span sessions, so local
// ids are consistent wherever two OOV events can meet in a pair).
class WindowScorer {
 public:
  explicit WindowScorer(const EmbeddingModel& model);

  const EmbeddingModel& model() const { return *model_; }
  std::uint32_t dims() const { return model_->dims(); }

  // vocab index, or -1 when the label is out of vocabulary
  std::int64_t vocab_id(const std::string& label_text) const;
  // pairwise distance between resolved ids (negative = interned OOV)
  double pair_distance(std::int64_t a, std::int64_t b) const;
  const double* unit_vector(std::uint32_t index) const;
  double self_dot(std::uint32_t index) const;

 private:
  const EmbeddingModel* model_;
  std::vector<double> unit_vectors_;  // vocab * dims
  std::vector<double> self_dots_;
};

// One window per event, spanning forward W from the event's start and never
// crossing the session boundary; per-event values from the earliest
// containing window.
ScoredSession score_session(const Session& session, const WindowScorer& scorer,
                            const FocusParams& params);
ScoredSession score_session(const Session& session, const EmbeddingModel& model,
                            const FocusParams& params);

// Stitches maximal runs of sub-threshold windows (consecutive qualifying
// anchors within merge_gap) into focus sessions, clamped to the activity
// session's end.
std::vector<FocusSession> focus_sessions(const Session& session,
                                         const std::vector<FocusWindow>& windows,
                                         const FocusParams& params);

// Full pipeline over many sessions; output ordered by (actor, start).
std::vector<FocusSession> compute_focus_sessions(const std::vector<Session>& sessions,
                                                 const EmbeddingModel& model,
                                                 const FocusParams& params, int jobs = 1);

void write_focus_sessions_jsonl(std::ostream& out, const std::vector<FocusSession>& sessions);
std::vector<FocusSession> read_focus_sessions_jsonl(std::istream& in);

}  // namespace ft
