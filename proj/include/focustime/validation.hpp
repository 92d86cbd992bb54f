#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "focustime/core.hpp"
#include "focustime/embedding.hpp"
#include "focustime/metric.hpp"

namespace ft {

// One participant-day of ground truth: ordered, non-overlapping intervals.
struct Diary {
  std::string id;
  std::string actor;
  std::vector<LabeledInterval> intervals;
};

// CSV "diary_id,actor,start_ms,end_ms,focused" (focused in {0,1}).
// Rejects zero/negative-length and overlapping intervals at load.
std::vector<Diary> read_diaries_csv(std::istream& in);
void write_diaries_csv(std::ostream& out, const std::vector<Diary>& diaries);

struct TimeSpan {
  Millis start_ms = 0;
  Millis end_ms = 0;
};

// An interval is predicted focused iff the total time it shares with `spans`
// covers at least `overlap_fraction` of the interval (boundary inclusive).
std::vector<bool> predict_interval_labels(const std::vector<TimeSpan>& spans,
                                          const std::vector<LabeledInterval>& intervals,
                                          double overlap_fraction = 0.5);

// Prevalence- and bias-adjusted kappa: 2 * observed agreement - 1.
double pabak(const std::vector<bool>& predicted, const std::vector<bool>& actual);

// Confusion counts use the diary as truth: a = both focused, b = predicted
// only, c = actual only, d = neither.
struct DiaryAgreement {
  std::string diary_id;
  std::uint32_t a = 0, b = 0, c = 0, d = 0;
  double p_o = 0.0;
  double pabak = 0.0;
};

struct AgreementReport {
  std::vector<DiaryAgreement> per_diary;
  double median_pabak = 0.0;
  // diary intervals with no overlapping logged activity at all; they are
  // still scored (necessarily predicted false)
  std::uint64_t intervals_without_activity = 0;
};

using SpansByActor = std::map<std::string, std::vector<TimeSpan>>;

SpansByActor spans_of_focus_sessions(const std::vector<FocusSession>& focus);
SpansByActor spans_of_sessions(const std::vector<Session>& sessions);

AgreementReport evaluate_agreement(const SpansByActor& predicted_spans,
                                   const std::vector<Diary>& diaries,
                                   const SpansByActor& activity_spans,
                                   double overlap_fraction = 0.5);

// Sample median (midpoint of the two central order statistics for even n).
double median(std::vector<double> values);

// Nearest-rank percentile: the ceil(p/100 * n)-th smallest value.
double nearest_rank_percentile(std::vector<double> values, double pct);

struct GridSpec {
  std::vector<double> thresholds = {0.1, 0.2, 0.3, 0.4};
  std::vector<Millis> windows_ms;   // default 5..60 min step 5
  std::vector<double> buffers_ms;   // default 10..100 ms step 10

  GridSpec();
  std::size_t size() const { return thresholds.size() * windows_ms.size() * buffers_ms.size(); }
  void validate() const;
};

struct GridRow {
  double threshold = 0.0;
  Millis window_ms = 0;
  double buffer_ms = 0.0;
  double median_pabak = 0.0;
};

struct GridResult {
  std::vector<GridRow> rows;  // canonical order: threshold, window, buffer
  std::size_t best_index = 0;

  const GridRow& best() const { return rows[best_index]; }
};

// Recomputes focus sessions at every grid point and reports per-point median
// PABAK. Deterministic for any `jobs`; ties for best resolve to the smaller
// window, then smaller threshold, then smaller buffer.
GridResult grid_search(const std::vector<Session>& sessions, const EmbeddingModel& model,
                       const std::vector<Diary>& diaries, const GridSpec& spec,
                       Millis merge_gap_ms = 10 * kMillisPerMinute, int jobs = 1);

// CSV "threshold,window_min,buffer_ms,median_pabak"
void write_grid_csv(std::ostream& out, const GridResult& result);

// Baselines: focus = sessions above the percentile of length / event count.
AgreementReport naive_session_length_benchmark(const std::vector<Session>& sessions,
                                               const std::vector<Diary>& diaries,
                                               double percentile = 90.0);
AgreementReport naive_event_count_benchmark(const std::vector<Session>& sessions,
                                            const std::vector<Diary>& diaries,
                                            double percentile = 90.0);

}  // namespace ft
