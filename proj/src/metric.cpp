#include "focustime/metric.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <unordered_map>

#include "json.hpp"

#include "focustime/errors.hpp"
#include "focustime/kernels.hpp"
#include "focustime/parallel.hpp"

namespace ft {

namespace {

using ojson = nlohmann::ordered_json;

// Interns out-of-vocabulary labels as -1, -2, ... local to one scoring unit.
struct OovInterner {
  std::unordered_map<std::string, std::int64_t> ids;

  std::int64_t intern(const std::string& text) {
    auto [it, inserted] = ids.emplace(text, -static_cast<std::int64_t>(ids.size()) - 1);
    return it->second;
  }
};

// Reusable accumulators for the per-OOV-label weight sums of one window.
struct OovScratch {
  std::vector<double> sums;
  std::vector<std::size_t> touched;

  void ensure(std::size_t n_oov) {
    if (sums.size() < n_oov) sums.resize(n_oov, 0.0);
  }
};

[[noreturn]] void throw_degenerate() {
  throw ValidationError(
      "degenerate window: all pairwise weights are zero (B = 0 and durations 0)");
}

// Eq. 1 over one window via the factorized route:
//   ordered pair weight  P = (sum w)^2 - sum w^2
//   ordered cosine sum   C = ||sum w*u||^2 - sum w^2 * (u.u)
//   F = (P - C) / (2P)
// OOV labels act as per-label orthonormal axes, contributing their squared
// weight sums to ||S||^2. Algebraically identical to the pairwise loop with
// dist = (1 - cos)/2 and the 0.5/0 OOV rule.
double eval_window(const double* mat, const std::int64_t* ids, const double* weights,
                   std::size_t m, std::size_t dims, const WindowScorer& scorer,
                   OovScratch& scratch) {
  if (m == 1) return 0.0;

  double sumw = 0.0;
  double sumw2 = 0.0;
  double selfsum = 0.0;
  bool homogeneous = true;
  for (std::size_t k = 0; k < m; ++k) {
    const double w = weights[k];
    sumw += w;
    sumw2 += w * w;
    selfsum += w * w * (ids[k] >= 0 ? scorer.self_dot(static_cast<std::uint32_t>(ids[k])) : 1.0);
    if (ids[k] != ids[0]) homogeneous = false;
  }
  const double pair_weight = sumw * sumw - sumw2;
  if (pair_weight <= 0.0) throw_degenerate();
  if (homogeneous) return 0.0;

  std::vector<double> s(dims, 0.0);
  kernels::weighted_accum_f64(mat, weights, m, dims, s.data());
  double norm2 = kernels::dot_f64(s.data(), s.data(), dims);

  for (std::size_t k = 0; k < m; ++k) {
    if (ids[k] >= 0) continue;
    const auto slot = static_cast<std::size_t>(-ids[k] - 1);
    scratch.ensure(slot + 1);
    if (scratch.sums[slot] == 0.0) scratch.touched.push_back(slot);
    scratch.sums[slot] += weights[k];
  }
  for (std::size_t slot : scratch.touched) {
    norm2 += scratch.sums[slot] * scratch.sums[slot];
    scratch.sums[slot] = 0.0;
  }
  scratch.touched.clear();

  const double cos_sum = norm2 - selfsum;
  return std::clamp((pair_weight - cos_sum) / (2.0 * pair_weight), 0.0, 1.0);
}

struct ResolvedEvents {
  std::vector<std::int64_t> ids;
  std::vector<double> mat;  // n * dims unit vectors, zero rows for OOV
};

ResolvedEvents resolve_events(const WindowScorer& scorer,
                              const std::vector<std::string>& labels) {
  const std::size_t dims = scorer.dims();
  ResolvedEvents out;
  out.ids.reserve(labels.size());
  out.mat.assign(labels.size() * dims, 0.0);
  OovInterner oov;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    std::int64_t id = scorer.vocab_id(labels[i]);
    if (id < 0) id = oov.intern(labels[i]);
    out.ids.push_back(id);
    if (id >= 0) {
      const double* u = scorer.unit_vector(static_cast<std::uint32_t>(id));
      std::copy(u, u + dims, out.mat.begin() + static_cast<std::ptrdiff_t>(i * dims));
    }
  }
  return out;
}

}  // namespace

void FocusParams::validate() const {
  if (window_ms <= 0) throw ConfigError("window must be positive");
  if (buffer_ms < 0.0) throw ConfigError("buffer must be >= 0");
  if (threshold < 0.0 || threshold > 1.0) throw ConfigError("threshold must be in [0, 1]");
  if (merge_gap_ms < 0) throw ConfigError("merge_gap must be >= 0");
}

WindowScorer::WindowScorer(const EmbeddingModel& model) : model_(&model) {
  const std::uint32_t dims = model.dims();
  unit_vectors_.resize(model.vocab_size() * dims);
  self_dots_.resize(model.vocab_size());
  for (std::uint32_t i = 0; i < model.vocab_size(); ++i) {
    const std::span<const float> v = model.vector(i);
    const double norm = std::sqrt(kernels::dot_f32(v.data(), v.data(), dims));
    if (norm == 0.0) {
      throw ValidationError("zero vector in embedding model: '" + model.vocab()[i] + "'");
    }
    double* u = unit_vectors_.data() + static_cast<std::size_t>(i) * dims;
    for (std::uint32_t d = 0; d < dims; ++d) u[d] = static_cast<double>(v[d]) / norm;
    self_dots_[i] = kernels::dot_f64(u, u, dims);
  }
}

std::int64_t WindowScorer::vocab_id(const std::string& label_text) const {
  return model_->find(label_text);
}

const double* WindowScorer::unit_vector(std::uint32_t index) const {
  return unit_vectors_.data() + static_cast<std::size_t>(index) * model_->dims();
}

double WindowScorer::self_dot(std::uint32_t index) const { return self_dots_[index]; }

double WindowScorer::pair_distance(std::int64_t a, std::int64_t b) const {
  if (a == b) return 0.0;
  if (a < 0 || b < 0) return 0.5;
  const double cosine =
      kernels::dot_f64(unit_vector(static_cast<std::uint32_t>(a)),
                       unit_vector(static_cast<std::uint32_t>(b)), model_->dims());
  return std::clamp(0.5 * (1.0 - cosine), 0.0, 1.0);
}

double focus_value(std::span<const WindowEvent> events,
                   const std::function<double(std::size_t, std::size_t)>& dist,
                   double buffer_ms) {
  if (events.empty()) throw ValidationError("focus_value: window has no events");
  if (buffer_ms < 0.0) throw ConfigError("buffer must be >= 0");
  if (events.size() == 1) return 0.0;

  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const double wi = static_cast<double>(events[i].duration_ms) + buffer_ms;
    for (std::size_t j = i + 1; j < events.size(); ++j) {
      const double wj = static_cast<double>(events[j].duration_ms) + buffer_ms;
      num += wi * wj * dist(i, j);
      den += wi * wj;
    }
  }
  if (den <= 0.0) throw_degenerate();
  return std::clamp(num / den, 0.0, 1.0);
}

double focus_value(std::span<const WindowEvent> events, const EmbeddingModel& model,
                   double buffer_ms) {
  if (events.empty()) throw ValidationError("focus_value: window has no events");
  if (buffer_ms < 0.0) throw ConfigError("buffer must be >= 0");
  if (events.size() == 1) return 0.0;

  WindowScorer scorer(model);
  std::vector<std::string> labels;
  labels.reserve(events.size());
  for (const WindowEvent& e : events) labels.push_back(e.label.text);
  ResolvedEvents resolved = resolve_events(scorer, labels);

  std::vector<double> weights;
  weights.reserve(events.size());
  for (const WindowEvent& e : events) {
    weights.push_back(static_cast<double>(e.duration_ms) + buffer_ms);
  }

  if (events.size() == 2) {
    if (weights[0] * weights[1] <= 0.0) throw_degenerate();
    // a lone pair is exactly its distance; route through the canonical
    // distance so the two agree to the bit
    if (resolved.ids[0] >= 0 && resolved.ids[1] >= 0) {
      return model.distance(static_cast<std::uint32_t>(resolved.ids[0]),
                            static_cast<std::uint32_t>(resolved.ids[1]));
    }
    return scorer.pair_distance(resolved.ids[0], resolved.ids[1]);
  }

  OovScratch scratch;
  return eval_window(resolved.mat.data(), resolved.ids.data(), weights.data(), events.size(),
                     scorer.dims(), scorer, scratch);
}

ScoredSession score_session(const Session& session, const WindowScorer& scorer,
                            const FocusParams& params) {
  params.validate();
  const std::size_t n = session.events.size();
  if (n == 0) throw ValidationError("cannot score an empty session");

  std::vector<std::string> labels;
  labels.reserve(n);
  std::vector<Millis> starts;
  starts.reserve(n);
  std::vector<double> weights;
  weights.reserve(n);
  for (const Event& e : session.events) {
    if (!e.duration_ms) throw ValidationError("score_session requires derived durations");
    labels.push_back(event_label(e).text);
    starts.push_back(e.start_ms);
    weights.push_back(static_cast<double>(*e.duration_ms) + params.buffer_ms);
  }
  ResolvedEvents resolved = resolve_events(scorer, labels);

  ScoredSession out;
  out.windows.reserve(n);
  OovScratch scratch;
  std::size_t hi = 0;
  for (std::size_t anchor = 0; anchor < n; ++anchor) {
    const Millis w_start = starts[anchor];
    const Millis w_end = w_start + params.window_ms;
    if (hi < anchor + 1) hi = anchor + 1;
    while (hi < n && starts[hi] < w_end) ++hi;
    const std::size_t m = hi - anchor;
    const double value =
        eval_window(resolved.mat.data() + anchor * scorer.dims(), resolved.ids.data() + anchor,
                    weights.data() + anchor, m, scorer.dims(), scorer, scratch);
    out.windows.push_back({anchor, w_start, w_end, anchor, hi - 1, value});
  }

  out.scored_events.reserve(n);
  std::size_t earliest = 0;
  for (std::size_t j = 0; j < n; ++j) {
    while (starts[earliest] + params.window_ms <= starts[j]) ++earliest;
    out.scored_events.push_back({j, out.windows[earliest].value});
  }
  return out;
}

ScoredSession score_session(const Session& session, const EmbeddingModel& model,
                            const FocusParams& params) {
  WindowScorer scorer(model);
  return score_session(session, scorer, params);
}

std::vector<FocusSession> focus_sessions(const Session& session,
                                         const std::vector<FocusWindow>& windows,
                                         const FocusParams& params) {
  std::vector<FocusSession> out;
  std::vector<Millis> starts;
  starts.reserve(session.events.size());
  for (const Event& e : session.events) starts.push_back(e.start_ms);

  std::size_t run_begin = 0;
  std::size_t run_len = 0;
  double run_sum = 0.0;
  Millis last_qualifying_start = 0;

  auto flush = [&](std::size_t run_end) {
    if (run_len == 0) return;
    FocusSession fs;
    fs.actor = session.actor;
    fs.start_ms = windows[run_begin].start_ms;
    fs.end_ms = std::min(windows[run_end].end_ms, session.end_ms);
    fs.mean_value = run_sum / static_cast<double>(run_len);
    if (fs.start_ms < fs.end_ms) {
      const auto lo = std::lower_bound(starts.begin(), starts.end(), fs.start_ms);
      const auto hi = std::upper_bound(starts.begin(), starts.end(), fs.end_ms);
      fs.event_count = static_cast<std::uint64_t>(hi - lo);
      out.push_back(std::move(fs));
    }
    run_len = 0;
    run_sum = 0.0;
  };

  std::size_t prev_qualifying = 0;
  for (std::size_t i = 0; i < windows.size(); ++i) {
    if (windows[i].value > params.threshold) continue;
    if (run_len > 0 && windows[i].start_ms - last_qualifying_start > params.merge_gap_ms) {
      flush(prev_qualifying);
    }
    if (run_len == 0) run_begin = i;
    ++run_len;
    run_sum += windows[i].value;
    last_qualifying_start = windows[i].start_ms;
    prev_qualifying = i;
  }
  flush(prev_qualifying);
  return out;
}

std::vector<FocusSession> compute_focus_sessions(const std::vector<Session>& sessions,
                                                 const EmbeddingModel& model,
                                                 const FocusParams& params, int jobs) {
  params.validate();
  WindowScorer scorer(model);
  std::vector<std::vector<FocusSession>> per_session(sessions.size());
  parallel_for(jobs, sessions.size(), [&](std::size_t i) {
    ScoredSession scored = score_session(sessions[i], scorer, params);
    per_session[i] = focus_sessions(sessions[i], scored.windows, params);
  });

  std::vector<FocusSession> out;
  for (auto& chunk : per_session) {
    out.insert(out.end(), std::make_move_iterator(chunk.begin()),
               std::make_move_iterator(chunk.end()));
  }
  std::stable_sort(out.begin(), out.end(), [](const FocusSession& a, const FocusSession& b) {
    if (a.actor != b.actor) return a.actor < b.actor;
    return a.start_ms < b.start_ms;
  });
  return out;
}

void write_focus_sessions_jsonl(std::ostream& out, const std::vector<FocusSession>& sessions) {
  for (const FocusSession& fs : sessions) {
    ojson obj;
    obj["actor"] = fs.actor;
    obj["start_ms"] = fs.start_ms;
    obj["end_ms"] = fs.end_ms;
    obj["mean_value"] = fs.mean_value;
    obj["event_count"] = fs.event_count;
    out << obj.dump() << '\n';
  }
  if (!out) throw IoError("failed writing focus sessions");
}

std::vector<FocusSession> read_focus_sessions_jsonl(std::istream& in) {
  std::vector<FocusSession> out;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json obj = nlohmann::json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) {
      throw FormatError("focus sessions line " + std::to_string(row) + ": malformed record");
    }
    try {
      FocusSession fs;
      fs.actor = obj.at("actor").get<std::string>();
      fs.start_ms = obj.at("start_ms").get<Millis>();
      fs.end_ms = obj.at("end_ms").get<Millis>();
      fs.mean_value = obj.at("mean_value").get<double>();
      fs.event_count = obj.at("event_count").get<std::uint64_t>();
      out.push_back(std::move(fs));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError("focus sessions line " + std::to_string(row) + ": " + e.what());
    }
  }
  if (in.bad()) throw IoError("failed reading focus sessions");
  return out;
}

}  // namespace ft
