#include "focustime/validation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>

#include "focustime/csv.hpp"
#include "focustime/errors.hpp"
#include "focustime/parallel.hpp"

namespace ft {

namespace {

std::string fmt_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

Millis overlap_with(const std::vector<TimeSpan>& spans, const LabeledInterval& iv) {
  Millis total = 0;
  for (const TimeSpan& s : spans) {
    const Millis lo = std::max(s.start_ms, iv.start_ms);
    const Millis hi = std::min(s.end_ms, iv.end_ms);
    if (hi > lo) total += hi - lo;
  }
  return total;
}

const std::vector<TimeSpan>& spans_for(const SpansByActor& spans, const std::string& actor) {
  static const std::vector<TimeSpan> empty;
  auto it = spans.find(actor);
  return it == spans.end() ? empty : it->second;
}

}  // namespace

std::vector<Diary> read_diaries_csv(std::istream& in) {
  CsvReader reader(in);
  auto header = reader.next();
  if (!header) throw ValidationError("empty diary CSV: missing header");
  std::map<std::string, std::size_t> columns;
  for (std::size_t i = 0; i < header->size(); ++i) columns[(*header)[i]] = i;
  for (const char* key : {"diary_id", "actor", "start_ms", "end_ms", "focused"}) {
    if (!columns.count(key)) {
      throw ValidationError(std::string("diary CSV missing column '") + key + "'");
    }
  }

  std::vector<Diary> diaries;
  std::map<std::string, std::size_t> diary_index;
  std::size_t row = 1;
  while (auto fields = reader.next()) {
    ++row;
    if (fields->size() == 1 && (*fields)[0].empty()) continue;
    auto field = [&](const char* key) -> const std::string& {
      const std::size_t idx = columns.at(key);
      if (idx >= fields->size()) {
        throw ValidationError("diary CSV row " + std::to_string(row) + ": too few columns");
      }
      return (*fields)[idx];
    };
    auto parse_ms = [&](const char* key) {
      const std::string& s = field(key);
      std::int64_t v = 0;
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw ValidationError("diary CSV row " + std::to_string(row) + ": bad " + key);
      }
      return v;
    };

    LabeledInterval iv;
    iv.actor = field("actor");
    iv.start_ms = parse_ms("start_ms");
    iv.end_ms = parse_ms("end_ms");
    const std::string& focused = field("focused");
    if (focused == "0") iv.focused = false;
    else if (focused == "1") iv.focused = true;
    else throw ValidationError("diary CSV row " + std::to_string(row) + ": focused must be 0/1");
    if (iv.start_ms >= iv.end_ms) {
      throw ValidationError("diary CSV row " + std::to_string(row) +
                            ": interval must have positive length");
    }

    const std::string& id = field("diary_id");
    if (id.empty() || iv.actor.empty()) {
      throw ValidationError("diary CSV row " + std::to_string(row) + ": empty diary_id/actor");
    }
    auto [it, inserted] = diary_index.emplace(id, diaries.size());
    if (inserted) diaries.push_back(Diary{id, iv.actor, {}});
    Diary& diary = diaries[it->second];
    if (diary.actor != iv.actor) {
      throw ValidationError("diary '" + id + "' mixes actors '" + diary.actor + "' and '" +
                            iv.actor + "'");
    }
    diary.intervals.push_back(std::move(iv));
  }

  for (Diary& diary : diaries) {
    std::sort(diary.intervals.begin(), diary.intervals.end(),
              [](const LabeledInterval& a, const LabeledInterval& b) {
                return a.start_ms < b.start_ms;
              });
    for (std::size_t i = 1; i < diary.intervals.size(); ++i) {
      if (diary.intervals[i].start_ms < diary.intervals[i - 1].end_ms) {
        throw ValidationError("diary '" + diary.id + "' has overlapping intervals");
      }
    }
  }
  return diaries;
}

void write_diaries_csv(std::ostream& out, const std::vector<Diary>& diaries) {
  out << "diary_id,actor,start_ms,end_ms,focused\n";
  for (const Diary& d : diaries) {
    for (const LabeledInterval& iv : d.intervals) {
      write_csv_row(out, {d.id, iv.actor, std::to_string(iv.start_ms),
                          std::to_string(iv.end_ms), iv.focused ? "1" : "0"});
    }
  }
}

std::vector<bool> predict_interval_labels(const std::vector<TimeSpan>& spans,
                                          const std::vector<LabeledInterval>& intervals,
                                          double overlap_fraction) {
  if (overlap_fraction <= 0.0 || overlap_fraction > 1.0) {
    throw ConfigError("overlap_fraction must be in (0, 1]");
  }
  std::vector<bool> out;
  out.reserve(intervals.size());
  for (const LabeledInterval& iv : intervals) {
    const Millis len = iv.end_ms - iv.start_ms;
    if (len <= 0) throw ValidationError("diary interval has zero or negative length");
    const Millis covered = overlap_with(spans, iv);
    out.push_back(static_cast<double>(covered) >=
                  overlap_fraction * static_cast<double>(len));
  }
  return out;
}

double pabak(const std::vector<bool>& predicted, const std::vector<bool>& actual) {
  if (predicted.empty() || predicted.size() != actual.size()) {
    throw ValidationError("pabak needs two equal-length, non-empty label vectors");
  }
  std::size_t agree = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (predicted[i] == actual[i]) ++agree;
  }
  const double p_o = static_cast<double>(agree) / static_cast<double>(predicted.size());
  return 2.0 * p_o - 1.0;
}

SpansByActor spans_of_focus_sessions(const std::vector<FocusSession>& focus) {
  SpansByActor out;
  for (const FocusSession& fs : focus) out[fs.actor].push_back({fs.start_ms, fs.end_ms});
  for (auto& [actor, spans] : out) {
    std::sort(spans.begin(), spans.end(),
              [](const TimeSpan& a, const TimeSpan& b) { return a.start_ms < b.start_ms; });
  }
  return out;
}

SpansByActor spans_of_sessions(const std::vector<Session>& sessions) {
  SpansByActor out;
  for (const Session& s : sessions) out[s.actor].push_back({s.start_ms, s.end_ms});
  for (auto& [actor, spans] : out) {
    std::sort(spans.begin(), spans.end(),
              [](const TimeSpan& a, const TimeSpan& b) { return a.start_ms < b.start_ms; });
  }
  return out;
}

AgreementReport evaluate_agreement(const SpansByActor& predicted_spans,
                                   const std::vector<Diary>& diaries,
                                   const SpansByActor& activity_spans,
                                   double overlap_fraction) {
  if (diaries.empty()) throw ValidationError("no diaries to evaluate");
  AgreementReport report;
  std::vector<double> pabaks;
  pabaks.reserve(diaries.size());
  for (const Diary& diary : diaries) {
    const auto& spans = spans_for(predicted_spans, diary.actor);
    const std::vector<bool> predicted =
        predict_interval_labels(spans, diary.intervals, overlap_fraction);
    DiaryAgreement da;
    da.diary_id = diary.id;
    for (std::size_t i = 0; i < diary.intervals.size(); ++i) {
      const bool actual = diary.intervals[i].focused;
      const bool pred = predicted[i];
      if (pred && actual) ++da.a;
      else if (pred && !actual) ++da.b;
      else if (!pred && actual) ++da.c;
      else ++da.d;
    }
    const std::size_t n = diary.intervals.size();
    da.p_o = n == 0 ? 0.0 : static_cast<double>(da.a + da.d) / static_cast<double>(n);
    da.pabak = 2.0 * da.p_o - 1.0;
    pabaks.push_back(da.pabak);
    report.per_diary.push_back(std::move(da));

    const auto& activity = spans_for(activity_spans, diary.actor);
    for (const LabeledInterval& iv : diary.intervals) {
      if (overlap_with(activity, iv) == 0) ++report.intervals_without_activity;
    }
  }
  report.median_pabak = median(std::move(pabaks));
  return report;
}

double median(std::vector<double> values) {
  if (values.empty()) throw ValidationError("median of an empty sample");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double nearest_rank_percentile(std::vector<double> values, double pct) {
  if (values.empty()) throw ValidationError("percentile of an empty sample");
  if (pct <= 0.0 || pct > 100.0) throw ConfigError("percentile must be in (0, 100]");
  std::sort(values.begin(), values.end());
  const auto rank = static_cast<std::size_t>(std::ceil(pct / 100.0 * values.size()));
  return values[std::min(values.size() - 1, std::max<std::size_t>(rank, 1) - 1)];
}

GridSpec::GridSpec() {
  for (int minutes = 5; minutes <= 60; minutes += 5) {
    windows_ms.push_back(minutes * kMillisPerMinute);
  }
  for (int ms = 10; ms <= 100; ms += 10) buffers_ms.push_back(static_cast<double>(ms));
}

void GridSpec::validate() const {
  if (thresholds.empty() || windows_ms.empty() || buffers_ms.empty()) {
    throw ConfigError("grid spec axes must be non-empty");
  }
  for (double t : thresholds) {
    if (t < 0.0 || t > 1.0) throw ConfigError("grid threshold out of [0, 1]");
  }
  for (Millis w : windows_ms) {
    if (w <= 0) throw ConfigError("grid window must be positive");
  }
  for (double b : buffers_ms) {
    if (b < 0.0) throw ConfigError("grid buffer must be >= 0");
  }
}

GridResult grid_search(const std::vector<Session>& sessions, const EmbeddingModel& model,
                       const std::vector<Diary>& diaries, const GridSpec& spec,
                       Millis merge_gap_ms, int jobs) {
  spec.validate();
  if (diaries.empty()) throw ValidationError("grid search needs at least one diary");

  std::set<std::string> diary_actors;
  for (const Diary& d : diaries) diary_actors.insert(d.actor);
  std::vector<const Session*> scored_sessions;
  for (const Session& s : sessions) {
    if (diary_actors.count(s.actor)) scored_sessions.push_back(&s);
  }
  for (const Diary& d : diaries) {
    bool found = false;
    for (const Session* s : scored_sessions) {
      if (s->actor == d.actor) {
        found = true;
        break;
      }
    }
    if (!found) {
      throw ValidationError("diary '" + d.id + "': actor '" + d.actor + "' has no sessions");
    }
  }

  const SpansByActor activity = spans_of_sessions(sessions);
  const WindowScorer scorer(model);

  // Window values depend only on (window, buffer); thresholds reuse them.
  const std::size_t n_pairs = spec.windows_ms.size() * spec.buffers_ms.size();
  std::vector<std::vector<double>> medians(n_pairs,
                                           std::vector<double>(spec.thresholds.size(), 0.0));
  parallel_for(jobs, n_pairs, [&](std::size_t pair_idx) {
    const Millis window_ms = spec.windows_ms[pair_idx / spec.buffers_ms.size()];
    const double buffer_ms = spec.buffers_ms[pair_idx % spec.buffers_ms.size()];
    FocusParams params;
    params.window_ms = window_ms;
    params.buffer_ms = buffer_ms;
    params.merge_gap_ms = merge_gap_ms;

    std::vector<ScoredSession> scored;
    scored.reserve(scored_sessions.size());
    try {
      for (const Session* s : scored_sessions) scored.push_back(score_session(*s, scorer, params));
    } catch (const std::exception& e) {
      throw ValidationError("grid point (window_ms=" + std::to_string(window_ms) +
                            ", buffer_ms=" + fmt_double(buffer_ms) + "): " + e.what());
    }

    for (std::size_t t = 0; t < spec.thresholds.size(); ++t) {
      params.threshold = spec.thresholds[t];
      std::vector<FocusSession> all;
      for (std::size_t i = 0; i < scored.size(); ++i) {
        auto fs = focus_sessions(*scored_sessions[i], scored[i].windows, params);
        all.insert(all.end(), fs.begin(), fs.end());
      }
      const AgreementReport report =
          evaluate_agreement(spans_of_focus_sessions(all), diaries, activity);
      medians[pair_idx][t] = report.median_pabak;
    }
  });

  GridResult result;
  result.rows.reserve(spec.size());
  for (std::size_t t = 0; t < spec.thresholds.size(); ++t) {
    for (std::size_t w = 0; w < spec.windows_ms.size(); ++w) {
      for (std::size_t b = 0; b < spec.buffers_ms.size(); ++b) {
        result.rows.push_back({spec.thresholds[t], spec.windows_ms[w], spec.buffers_ms[b],
                               medians[w * spec.buffers_ms.size() + b][t]});
      }
    }
  }

  auto better = [](const GridRow& x, const GridRow& y) {
    if (x.median_pabak != y.median_pabak) return x.median_pabak > y.median_pabak;
    if (x.window_ms != y.window_ms) return x.window_ms < y.window_ms;
    if (x.threshold != y.threshold) return x.threshold < y.threshold;
    return x.buffer_ms < y.buffer_ms;
  };
  for (std::size_t i = 1; i < result.rows.size(); ++i) {
    if (better(result.rows[i], result.rows[result.best_index])) result.best_index = i;
  }
  return result;
}

void write_grid_csv(std::ostream& out, const GridResult& result) {
  out << "threshold,window_min,buffer_ms,median_pabak\n";
  for (const GridRow& row : result.rows) {
    write_csv_row(out, {fmt_double(row.threshold),
                        std::to_string(row.window_ms / kMillisPerMinute),
                        fmt_double(row.buffer_ms), fmt_double(row.median_pabak)});
  }
}

namespace {

AgreementReport naive_benchmark(const std::vector<Session>& sessions,
                                const std::vector<Diary>& diaries, double percentile,
                                const std::function<double(const Session&)>& measure) {
  if (sessions.empty()) throw ValidationError("benchmark needs at least one session");
  std::vector<double> values;
  values.reserve(sessions.size());
  for (const Session& s : sessions) values.push_back(measure(s));
  const double cutoff = nearest_rank_percentile(values, percentile);

  std::vector<FocusSession> qualifying;
  for (std::size_t i = 0; i < sessions.size(); ++i) {
    if (values[i] > cutoff) {
      qualifying.push_back(
          {sessions[i].actor, sessions[i].start_ms, sessions[i].end_ms, 0.0, 0});
    }
  }
  return evaluate_agreement(spans_of_focus_sessions(qualifying), diaries,
                            spans_of_sessions(sessions));
}

}  // namespace

AgreementReport naive_session_length_benchmark(const std::vector<Session>& sessions,
                                               const std::vector<Diary>& diaries,
                                               double percentile) {
  return naive_benchmark(sessions, diaries, percentile, [](const Session& s) {
    return static_cast<double>(s.length_ms());
  });
}

AgreementReport naive_event_count_benchmark(const std::vector<Session>& sessions,
                                            const std::vector<Diary>& diaries,
                                            double percentile) {
  return naive_benchmark(sessions, diaries, percentile, [](const Session& s) {
    return static_cast<double>(s.events.size());
  });
}

}  // namespace ft
