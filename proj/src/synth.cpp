#include "focustime/synth.hpp"

#include <array>
#include <ostream>

#include "json.hpp"

#include "focustime/errors.hpp"
#include "focustime/rng.hpp"

namespace ft {

namespace {

using ojson = nlohmann::ordered_json;

constexpr std::array<const char*, 10> kTools = {"ide",  "search", "docs", "build",   "review",
                                                "chat", "mail",   "term", "monitor", "tickets"};
constexpr std::array<const char*, 12> kActions = {"edit", "view", "open",   "run",  "query",
                                                  "nav",  "close", "exec",  "scroll", "send",
                                                  "read", "update"};

void check_range(const IntRange& r, const char* name, std::int64_t min_lo) {
  if (r.lo < min_lo || r.hi < r.lo) {
    throw ConfigError(std::string("synth: invalid range for ") + name);
  }
}

std::string tool_name(std::uint32_t cluster) {
  std::string name = kTools[cluster % kTools.size()];
  if (cluster >= kTools.size()) name += std::to_string(cluster / kTools.size());
  return name;
}

std::string action_name(std::uint32_t label) {
  std::string name = kActions[label % kActions.size()];
  if (label >= kActions.size()) name += std::to_string(label / kActions.size());
  return name;
}

struct ActorContext {
  std::string id;
  Rng rng;
  std::vector<Event>* events;
  std::vector<PhaseRecord>* phases;
};

enum class PhaseKind { focus, diffuse };

}  // namespace

void SynthConfig::validate() const {
  if (n_actors < 1) throw ConfigError("synth: n_actors must be >= 1");
  if (days < 1) throw ConfigError("synth: days must be >= 1");
  if (vocab_clusters < 2) throw ConfigError("synth: vocab_clusters must be >= 2");
  if (labels_per_cluster < 1) throw ConfigError("synth: labels_per_cluster must be >= 1");
  check_range(focus_phase_minutes, "focus_phase_minutes", 1);
  check_range(diffuse_phase_minutes, "diffuse_phase_minutes", 1);
  check_range(focus_event_gap_seconds, "focus_event_gap_seconds", 1);
  check_range(diffuse_event_gap_seconds, "diffuse_event_gap_seconds", 1);
  check_range(blocks_per_day, "blocks_per_day", 1);
  check_range(break_minutes, "break_minutes", 1);
  if (cluster_escape_prob < 0.0 || cluster_escape_prob > 1.0) {
    throw ConfigError("synth: cluster_escape_prob must be in [0, 1]");
  }
  if (focus_only_block_prob < 0.0 || diffuse_only_block_prob < 0.0 ||
      focus_only_block_prob + diffuse_only_block_prob > 1.0) {
    throw ConfigError("synth: block probabilities must be non-negative and sum to <= 1");
  }
  if (day_start_utc_minutes < 0 || day_start_utc_minutes >= 24 * 60) {
    throw ConfigError("synth: day_start_utc_minutes must be in [0, 1440)");
  }
  if (start_month < 1 || start_month > 12 || start_day < 1 || start_day > 31) {
    throw ConfigError("synth: invalid start date");
  }
}

namespace {

// Emits one phase's events and ground truth; returns the phase end.
Millis emit_phase(const SynthConfig& cfg, ActorContext& ctx, PhaseKind kind, Millis start) {
  const IntRange& len_minutes =
      kind == PhaseKind::focus ? cfg.focus_phase_minutes : cfg.diffuse_phase_minutes;
  const IntRange& gap_seconds =
      kind == PhaseKind::focus ? cfg.focus_event_gap_seconds : cfg.diffuse_event_gap_seconds;
  const Millis length =
      ctx.rng.range(len_minutes.lo * 60, len_minutes.hi * 60) * kMillisPerSecond;
  const Millis end = start + length;

  std::int32_t cluster = -1;
  if (kind == PhaseKind::focus) {
    cluster = static_cast<std::int32_t>(ctx.rng.bounded(cfg.vocab_clusters));
  }

  Millis t = start;
  while (t < end) {
    std::uint32_t event_cluster;
    if (kind == PhaseKind::focus) {
      event_cluster = static_cast<std::uint32_t>(cluster);
      if (cfg.vocab_clusters > 1 && ctx.rng.chance(cfg.cluster_escape_prob)) {
        // jump to a different cluster (a stray unrelated action)
        const std::uint64_t other = ctx.rng.bounded(cfg.vocab_clusters - 1);
        event_cluster = static_cast<std::uint32_t>(other >= event_cluster ? other + 1 : other);
      }
    } else {
      event_cluster = static_cast<std::uint32_t>(ctx.rng.bounded(cfg.vocab_clusters));
    }
    const auto label = static_cast<std::uint32_t>(ctx.rng.bounded(cfg.labels_per_cluster));
    ctx.events->push_back(
        Event{ctx.id, tool_name(event_cluster), action_name(label), t, std::nullopt});
    t += ctx.rng.range(gap_seconds.lo * kMillisPerSecond, gap_seconds.hi * kMillisPerSecond);
  }

  ctx.phases->push_back(PhaseRecord{ctx.id, start, end, kind == PhaseKind::focus, cluster});
  return end;
}

}  // namespace

SynthOutput generate(const SynthConfig& cfg) {
  cfg.validate();
  SynthOutput out;

  const std::int64_t base_day =
      days_from_civil(CivilDate{cfg.start_year, cfg.start_month, cfg.start_day});

  for (std::uint32_t actor_idx = 0; actor_idx < cfg.n_actors; ++actor_idx) {
    std::string actor = "a";
    if (actor_idx < 10) actor += "0";
    actor += std::to_string(actor_idx);

    ActorContext ctx{actor, Rng(mix64(cfg.seed ^ mix64(0x5eed0000ULL + actor_idx))),
                     &out.events, &out.ground_truth};

    for (std::uint32_t day = 0; day < cfg.days; ++day) {
      const std::size_t first_phase = out.ground_truth.size();
      Millis t = (base_day + day) * kMillisPerDay + cfg.day_start_utc_minutes * kMillisPerMinute;

      const std::int64_t blocks = ctx.rng.range(cfg.blocks_per_day.lo, cfg.blocks_per_day.hi);
      for (std::int64_t block = 0; block < blocks; ++block) {
        const double roll = ctx.rng.unit();
        if (roll < cfg.focus_only_block_prob) {
          t = emit_phase(cfg, ctx, PhaseKind::focus, t);
        } else if (roll < cfg.focus_only_block_prob + cfg.diffuse_only_block_prob) {
          t = emit_phase(cfg, ctx, PhaseKind::diffuse, t);
        } else {
          t = emit_phase(cfg, ctx, PhaseKind::diffuse, t);
          t = emit_phase(cfg, ctx, PhaseKind::focus, t);
        }
        t += ctx.rng.range(cfg.break_minutes.lo * 60, cfg.break_minutes.hi * 60) *
             kMillisPerSecond;
      }

      Diary diary;
      diary.id = actor + "-d";
      if (day < 10) diary.id += "0";
      diary.id += std::to_string(day);
      diary.actor = actor;
      for (std::size_t p = first_phase; p < out.ground_truth.size(); ++p) {
        const PhaseRecord& phase = out.ground_truth[p];
        diary.intervals.push_back(
            LabeledInterval{actor, phase.start_ms, phase.end_ms, phase.focus, {}});
      }
      out.diaries.push_back(std::move(diary));
    }
  }
  return out;
}

void write_events_jsonl(std::ostream& out, const std::vector<Event>& events) {
  for (const Event& e : events) {
    ojson obj;
    obj["actor"] = e.actor;
    obj["tool"] = e.tool;
    obj["action"] = e.action;
    obj["ts_ms"] = e.start_ms;
    out << obj.dump() << '\n';
  }
  if (!out) throw IoError("failed writing events");
}

void write_ground_truth_jsonl(std::ostream& out, const std::vector<PhaseRecord>& phases) {
  for (const PhaseRecord& p : phases) {
    ojson obj;
    obj["actor"] = p.actor;
    obj["start_ms"] = p.start_ms;
    obj["end_ms"] = p.end_ms;
    obj["phase"] = p.focus ? "focus" : "diffuse";
    obj["cluster"] = p.cluster;
    out << obj.dump() << '\n';
  }
  if (!out) throw IoError("failed writing ground truth");
}

}  // namespace ft
