// focustime: event logs -> sessions -> embeddings -> focus sessions ->
// validation and quarterly rollups, as file-based pipeline stages.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "focustime/aggregate.hpp"
#include "focustime/core.hpp"
#include "focustime/csv.hpp"
#include "focustime/digest.hpp"
#include "focustime/embedding.hpp"
#include "focustime/errors.hpp"
#include "focustime/ingest.hpp"
#include "focustime/kernels.hpp"
#include "focustime/metric.hpp"
#include "focustime/synth.hpp"
#include "focustime/validation.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

// ---------------------------------------------------------------------------
// config file handling
// ---------------------------------------------------------------------------

void check_keys(const json& obj, const std::string& section,
                std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    bool known = false;
    for (const char* k : allowed) {
      if (key == k) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw ft::ConfigError("config: unknown key '" + key + "' in section '" + section + "'");
    }
  }
}

ft::IntRange range_from_json(const json& j, const std::string& name) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer()) {
    throw ft::ConfigError("config: '" + name + "' must be a two-element integer array [lo, hi]");
  }
  return ft::IntRange{j[0].get<std::int64_t>(), j[1].get<std::int64_t>()};
}

ojson range_to_json(const ft::IntRange& r) { return ojson::array({r.lo, r.hi}); }

struct RunConfig {
  ft::IngestConfig ingest;
  ft::TrainConfig train;
  ft::FocusParams focus;
  ft::GridSpec grid;
  ft::SynthConfig synth;
};

template <typename T>
void maybe(const json& obj, const char* key, T& out) {
  if (obj.contains(key)) out = obj.at(key).get<T>();
}

void maybe_range(const json& obj, const char* key, ft::IntRange& out) {
  if (obj.contains(key)) out = range_from_json(obj.at(key), key);
}

RunConfig load_run_config(const std::optional<std::string>& path) {
  RunConfig cfg;
  if (!path) return cfg;
  std::ifstream in(*path);
  if (!in) throw ft::IoError("cannot open config file '" + *path + "'");
  json root = json::parse(in, nullptr, false);
  if (root.is_discarded() || !root.is_object()) {
    throw ft::ConfigError("config file '" + *path + "' is not a JSON object");
  }
  check_keys(root, "<top>", {"ingest", "train", "focus", "grid", "synth"});

  if (root.contains("ingest")) {
    const json& j = root["ingest"];
    check_keys(j, "ingest", {"format", "gap_minutes", "strict"});
    if (j.contains("format")) {
      cfg.ingest.format = ft::parse_log_format(j["format"].get<std::string>());
    }
    if (j.contains("gap_minutes")) {
      cfg.ingest.inactivity_gap_ms = j["gap_minutes"].get<std::int64_t>() * ft::kMillisPerMinute;
    }
    maybe(j, "strict", cfg.ingest.strict);
  }
  if (root.contains("train")) {
    const json& j = root["train"];
    check_keys(j, "train",
               {"dims", "context_window", "min_count", "negative_samples", "epochs",
                "learning_rate", "min_learning_rate", "seed"});
    maybe(j, "dims", cfg.train.dims);
    maybe(j, "context_window", cfg.train.context_window);
    maybe(j, "min_count", cfg.train.min_count);
    maybe(j, "negative_samples", cfg.train.negative_samples);
    maybe(j, "epochs", cfg.train.epochs);
    maybe(j, "learning_rate", cfg.train.learning_rate);
    maybe(j, "min_learning_rate", cfg.train.min_learning_rate);
    maybe(j, "seed", cfg.train.seed);
  }
  if (root.contains("focus")) {
    const json& j = root["focus"];
    check_keys(j, "focus", {"window_minutes", "threshold", "buffer_ms", "merge_gap_minutes"});
    if (j.contains("window_minutes")) {
      cfg.focus.window_ms = j["window_minutes"].get<std::int64_t>() * ft::kMillisPerMinute;
    }
    maybe(j, "threshold", cfg.focus.threshold);
    maybe(j, "buffer_ms", cfg.focus.buffer_ms);
    if (j.contains("merge_gap_minutes")) {
      cfg.focus.merge_gap_ms = j["merge_gap_minutes"].get<std::int64_t>() * ft::kMillisPerMinute;
    }
  }
  if (root.contains("grid")) {
    const json& j = root["grid"];
    check_keys(j, "grid", {"thresholds", "windows_minutes", "buffers_ms"});
    if (j.contains("thresholds")) cfg.grid.thresholds = j["thresholds"].get<std::vector<double>>();
    if (j.contains("windows_minutes")) {
      cfg.grid.windows_ms.clear();
      for (std::int64_t m : j["windows_minutes"].get<std::vector<std::int64_t>>()) {
        cfg.grid.windows_ms.push_back(m * ft::kMillisPerMinute);
      }
    }
    if (j.contains("buffers_ms")) cfg.grid.buffers_ms = j["buffers_ms"].get<std::vector<double>>();
  }
  if (root.contains("synth")) {
    const json& j = root["synth"];
    check_keys(j, "synth",
               {"seed", "n_actors", "days", "vocab_clusters", "labels_per_cluster",
                "focus_phase_minutes", "diffuse_phase_minutes", "focus_event_gap_seconds",
                "diffuse_event_gap_seconds", "cluster_escape_prob", "blocks_per_day",
                "break_minutes", "focus_only_block_prob", "diffuse_only_block_prob",
                "day_start_utc_minutes", "start_year", "start_month", "start_day"});
    maybe(j, "seed", cfg.synth.seed);
    maybe(j, "n_actors", cfg.synth.n_actors);
    maybe(j, "days", cfg.synth.days);
    maybe(j, "vocab_clusters", cfg.synth.vocab_clusters);
    maybe(j, "labels_per_cluster", cfg.synth.labels_per_cluster);
    maybe_range(j, "focus_phase_minutes", cfg.synth.focus_phase_minutes);
    maybe_range(j, "diffuse_phase_minutes", cfg.synth.diffuse_phase_minutes);
    maybe_range(j, "focus_event_gap_seconds", cfg.synth.focus_event_gap_seconds);
    maybe_range(j, "diffuse_event_gap_seconds", cfg.synth.diffuse_event_gap_seconds);
    maybe(j, "cluster_escape_prob", cfg.synth.cluster_escape_prob);
    maybe_range(j, "blocks_per_day", cfg.synth.blocks_per_day);
    maybe_range(j, "break_minutes", cfg.synth.break_minutes);
    maybe(j, "focus_only_block_prob", cfg.synth.focus_only_block_prob);
    maybe(j, "diffuse_only_block_prob", cfg.synth.diffuse_only_block_prob);
    maybe(j, "day_start_utc_minutes", cfg.synth.day_start_utc_minutes);
    maybe(j, "start_year", cfg.synth.start_year);
    maybe(j, "start_month", cfg.synth.start_month);
    maybe(j, "start_day", cfg.synth.start_day);
  }
  return cfg;
}

ojson ingest_config_json(const ft::IngestConfig& c) {
  return {{"format", c.format == ft::LogFormat::jsonl ? "jsonl" : "csv"},
          {"gap_minutes", c.inactivity_gap_ms / ft::kMillisPerMinute},
          {"strict", c.strict}};
}

ojson train_config_json(const ft::TrainConfig& c) {
  return {{"dims", c.dims},
          {"context_window", c.context_window},
          {"min_count", c.min_count},
          {"negative_samples", c.negative_samples},
          {"epochs", c.epochs},
          {"learning_rate", c.learning_rate},
          {"min_learning_rate", c.min_learning_rate},
          {"seed", c.seed}};
}

ojson focus_params_json(const ft::FocusParams& p) {
  return {{"window_minutes", p.window_ms / ft::kMillisPerMinute},
          {"threshold", p.threshold},
          {"buffer_ms", p.buffer_ms},
          {"merge_gap_minutes", p.merge_gap_ms / ft::kMillisPerMinute}};
}

ojson grid_spec_json(const ft::GridSpec& g) {
  ojson windows = ojson::array();
  for (ft::Millis w : g.windows_ms) windows.push_back(w / ft::kMillisPerMinute);
  return {{"thresholds", g.thresholds},
          {"windows_minutes", windows},
          {"buffers_ms", g.buffers_ms}};
}

ojson synth_config_json(const ft::SynthConfig& c) {
  return {{"seed", c.seed},
          {"n_actors", c.n_actors},
          {"days", c.days},
          {"vocab_clusters", c.vocab_clusters},
          {"labels_per_cluster", c.labels_per_cluster},
          {"focus_phase_minutes", range_to_json(c.focus_phase_minutes)},
          {"diffuse_phase_minutes", range_to_json(c.diffuse_phase_minutes)},
          {"focus_event_gap_seconds", range_to_json(c.focus_event_gap_seconds)},
          {"diffuse_event_gap_seconds", range_to_json(c.diffuse_event_gap_seconds)},
          {"cluster_escape_prob", c.cluster_escape_prob},
          {"blocks_per_day", range_to_json(c.blocks_per_day)},
          {"break_minutes", range_to_json(c.break_minutes)},
          {"focus_only_block_prob", c.focus_only_block_prob},
          {"diffuse_only_block_prob", c.diffuse_only_block_prob},
          {"day_start_utc_minutes", c.day_start_utc_minutes},
          {"start_year", c.start_year},
          {"start_month", c.start_month},
          {"start_day", c.start_day}};
}

// ---------------------------------------------------------------------------
// I/O helpers
// ---------------------------------------------------------------------------

ojson input_entry(const std::string& path) {
  return {{"path", path}, {"fnv1a64", ft::file_digest(path)}};
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ft::IoError("cannot open input '" + path + "'");
  return in;
}

fs::path prepare_out_dir(const std::string& out) {
  fs::path dir(out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ft::IoError("cannot create output directory '" + out + "': " + ec.message());
  return dir;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ft::IoError("cannot open output '" + path.string() + "'");
  return out;
}

std::vector<ft::Session> load_sessions(const std::string& path) {
  std::ifstream in = open_input(path);
  return ft::read_sessions_jsonl(in);
}

std::vector<ft::Diary> load_diaries(const std::string& path) {
  std::ifstream in = open_input(path);
  return ft::read_diaries_csv(in);
}

void emit_summary(ojson summary) {
  summary["kernels"] = ft::kernels::backend_name(ft::kernels::active_backend());
  std::cout << summary.dump() << std::endl;
}

ojson agreement_json(const ft::AgreementReport& report) {
  return {{"n_diaries", report.per_diary.size()},
          {"median_pabak", report.median_pabak},
          {"intervals_without_activity", report.intervals_without_activity}};
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_agreement_csv(const fs::path& path, const ft::AgreementReport& report) {
  std::ofstream out = open_output(path);
  out << "diary_id,a,b,c,d,p_o,pabak\n";
  for (const ft::DiaryAgreement& d : report.per_diary) {
    ft::write_csv_row(out, {d.diary_id, std::to_string(d.a), std::to_string(d.b),
                            std::to_string(d.c), std::to_string(d.d), fmt17(d.p_o),
                            fmt17(d.pabak)});
  }
}

// ---------------------------------------------------------------------------
// subcommands
// ---------------------------------------------------------------------------

struct CommonOpts {
  std::string out_dir = "out";
  int jobs = 1;
};

int cmd_synth(const CommonOpts& common, const ft::SynthConfig& cfg) {
  const fs::path dir = prepare_out_dir(common.out_dir);
  ft::SynthOutput output = ft::generate(cfg);

  {
    std::ofstream out = open_output(dir / "events.jsonl");
    ft::write_events_jsonl(out, output.events);
  }
  {
    std::ofstream out = open_output(dir / "diaries.csv");
    ft::write_diaries_csv(out, output.diaries);
  }
  {
    std::ofstream out = open_output(dir / "ground_truth.jsonl");
    ft::write_ground_truth_jsonl(out, output.ground_truth);
  }

  emit_summary({{"command", "synth"},
                {"config", ojson{{"synth", synth_config_json(cfg)}}},
                {"outputs",
                 {{"events", (dir / "events.jsonl").string()},
                  {"diaries", (dir / "diaries.csv").string()},
                  {"ground_truth", (dir / "ground_truth.jsonl").string()}}},
                {"n_events", output.events.size()},
                {"n_phases", output.ground_truth.size()},
                {"n_diaries", output.diaries.size()}});
  return 0;
}

int cmd_ingest(const CommonOpts& common, const ft::IngestConfig& cfg, const std::string& input) {
  const fs::path dir = prepare_out_dir(common.out_dir);
  std::ifstream in = open_input(input);
  ft::ParseResult parsed = ft::parse_events(in, cfg);
  std::vector<ft::Session> sessions =
      ft::sessionize(std::move(parsed.events), cfg.inactivity_gap_ms);

  for (std::size_t i = 0; i < parsed.diagnostics.size() && i < 20; ++i) {
    std::cerr << "skipped row " << parsed.diagnostics[i].row << ": "
              << parsed.diagnostics[i].reason << "\n";
  }

  std::size_t n_events = 0;
  std::set<std::string> actors;
  for (const ft::Session& s : sessions) {
    n_events += s.events.size();
    actors.insert(s.actor);
  }
  {
    std::ofstream out = open_output(dir / "sessions.jsonl");
    ft::write_sessions_jsonl(out, sessions);
  }

  emit_summary({{"command", "ingest"},
                {"config", ojson{{"ingest", ingest_config_json(cfg)}}},
                {"inputs", {{"events", input_entry(input)}}},
                {"outputs", {{"sessions", (dir / "sessions.jsonl").string()}}},
                {"n_events", n_events},
                {"n_rejected", parsed.diagnostics.size()},
                {"n_sessions", sessions.size()},
                {"n_actors", actors.size()}});
  return 0;
}

int cmd_train(const CommonOpts& common, const ft::TrainConfig& cfg,
              const std::string& sessions_path) {
  const fs::path dir = prepare_out_dir(common.out_dir);
  std::vector<ft::Session> sessions = load_sessions(sessions_path);
  ft::Corpus corpus = ft::build_corpus(sessions, cfg.min_count);
  ft::EmbeddingModel model = ft::train(corpus, cfg);
  const fs::path model_path = dir / "model.ftem";
  model.save(model_path);

  emit_summary({{"command", "train"},
                {"config", ojson{{"train", train_config_json(cfg)}}},
                {"inputs", {{"sessions", input_entry(sessions_path)}}},
                {"outputs", {{"model", model_path.string()}}},
                {"vocab_size", model.vocab_size()},
                {"token_count", model.stats().token_count},
                {"sentence_count", model.stats().sentence_count}});
  return 0;
}

int cmd_nearest(const std::string& model_path, const std::string& label, std::size_t k) {
  ft::EmbeddingModel model = ft::EmbeddingModel::load(model_path);
  auto ranked = model.nearest(label, k);
  ojson neighbors = ojson::array();
  for (const auto& [text, dist] : ranked) {
    neighbors.push_back({{"label", text}, {"distance", dist}});
  }
  emit_summary({{"command", "nearest"},
                {"inputs", {{"model", input_entry(model_path)}}},
                {"label", label},
                {"neighbors", neighbors}});
  return 0;
}

int cmd_score(const CommonOpts& common, const ft::FocusParams& params,
              const std::string& sessions_path, const std::string& model_path,
              bool dump_windows) {
  const fs::path dir = prepare_out_dir(common.out_dir);
  std::vector<ft::Session> sessions = load_sessions(sessions_path);
  ft::EmbeddingModel model = ft::EmbeddingModel::load(model_path);

  std::vector<ft::FocusSession> focus =
      ft::compute_focus_sessions(sessions, model, params, common.jobs);
  {
    std::ofstream out = open_output(dir / "focus_sessions.jsonl");
    ft::write_focus_sessions_jsonl(out, focus);
  }
  if (dump_windows) {
    std::ofstream out = open_output(dir / "windows.csv");
    out << "actor,session_start_ms,anchor_index,window_start_ms,window_end_ms,event_count,"
           "value\n";
    ft::WindowScorer scorer(model);
    for (const ft::Session& s : sessions) {
      ft::ScoredSession scored = ft::score_session(s, scorer, params);
      for (const ft::FocusWindow& w : scored.windows) {
        ft::write_csv_row(out, {s.actor, std::to_string(s.start_ms),
                                std::to_string(w.anchor_index), std::to_string(w.start_ms),
                                std::to_string(w.end_ms),
                                std::to_string(w.last_event - w.first_event + 1),
                                fmt17(w.value)});
      }
    }
  }

  double focus_ms = 0.0;
  for (const ft::FocusSession& f : focus) focus_ms += static_cast<double>(f.end_ms - f.start_ms);
  ojson outputs = {{"focus_sessions", (dir / "focus_sessions.jsonl").string()}};
  if (dump_windows) outputs["windows"] = (dir / "windows.csv").string();
  emit_summary({{"command", "score"},
                {"config", ojson{{"focus", focus_params_json(params)}}},
                {"inputs",
                 {{"sessions", input_entry(sessions_path)}, {"model", input_entry(model_path)}}},
                {"outputs", outputs},
                {"n_focus_sessions", focus.size()},
                {"total_focus_hours", focus_ms / 3600000.0}});
  return 0;
}

int cmd_validate(const CommonOpts& common, const ft::FocusParams& params,
                 const std::string& sessions_path, const std::string& model_path,
                 const std::string& diaries_path, double overlap) {
  const fs::path dir = prepare_out_dir(common.out_dir);
  std::vector<ft::Session> sessions = load_sessions(sessions_path);
  ft::EmbeddingModel model = ft::EmbeddingModel::load(model_path);
  std::vector<ft::Diary> diaries = load_diaries(diaries_path);

  std::vector<ft::FocusSession> focus =
      ft::compute_focus_sessions(sessions, model, params, common.jobs);
  ft::AgreementReport report = ft::evaluate_agreement(
      ft::spans_of_focus_sessions(focus), diaries, ft::spans_of_sessions(sessions), overlap);
  write_agreement_csv(dir / "agreement.csv", report);

  ojson summary = {{"command", "validate"},
                   {"config",
                    ojson{{"focus", focus_params_json(params)}, {"overlap_fraction", overlap}}},
                   {"inputs",
                    {{"sessions", input_entry(sessions_path)},
                     {"model", input_entry(model_path)},
                     {"diaries", input_entry(diaries_path)}}},
                   {"outputs", {{"agreement", (dir / "agreement.csv").string()}}}};
  summary.update(agreement_json(report));
  emit_summary(summary);
  return 0;
}

int cmd_grid(const CommonOpts& common, const ft::GridSpec& spec, ft::Millis merge_gap_ms,
             const std::string& sessions_path, const std::string& model_path,
             const std::string& diaries_path) {
  const fs::path dir = prepare_out_dir(common.out_dir);
  std::vector<ft::Session> sessions = load_sessions(sessions_path);
  ft::EmbeddingModel model = ft::EmbeddingModel::load(model_path);
  std::vector<ft::Diary> diaries = load_diaries(diaries_path);

  ft::GridResult result =
      ft::grid_search(sessions, model, diaries, spec, merge_gap_ms, common.jobs);
  {
    std::ofstream out = open_output(dir / "grid.csv");
    ft::write_grid_csv(out, result);
  }

  const ft::GridRow& best = result.best();
  ojson best_json = {{"threshold", best.threshold},
                     {"window_minutes", best.window_ms / ft::kMillisPerMinute},
                     {"buffer_ms", best.buffer_ms},
                     {"median_pabak", best.median_pabak}};
  {
    std::ofstream out = open_output(dir / "grid_summary.json");
    out << ojson{{"best", best_json},
                 {"n_diaries", diaries.size()},
                 {"n_grid_points", result.rows.size()}}
               .dump(2)
        << '\n';
  }

  emit_summary({{"command", "grid"},
                {"config",
                 ojson{{"grid", grid_spec_json(spec)},
                       {"merge_gap_minutes", merge_gap_ms / ft::kMillisPerMinute}}},
                {"inputs",
                 {{"sessions", input_entry(sessions_path)},
                  {"model", input_entry(model_path)},
                  {"diaries", input_entry(diaries_path)}}},
                {"outputs",
                 {{"grid", (dir / "grid.csv").string()},
                  {"grid_summary", (dir / "grid_summary.json").string()}}},
                {"n_grid_points", result.rows.size()},
                {"n_diaries", diaries.size()},
                {"best", best_json}});
  return 0;
}

int cmd_benchmarks(const CommonOpts& common, const std::string& sessions_path,
                   const std::string& diaries_path, double percentile) {
  const fs::path dir = prepare_out_dir(common.out_dir);
  std::vector<ft::Session> sessions = load_sessions(sessions_path);
  std::vector<ft::Diary> diaries = load_diaries(diaries_path);

  ft::AgreementReport length = ft::naive_session_length_benchmark(sessions, diaries, percentile);
  ft::AgreementReport count = ft::naive_event_count_benchmark(sessions, diaries, percentile);
  write_agreement_csv(dir / "benchmark_session_length.csv", length);
  write_agreement_csv(dir / "benchmark_event_count.csv", count);

  emit_summary({{"command", "benchmarks"},
                {"config", ojson{{"percentile", percentile}}},
                {"inputs",
                 {{"sessions", input_entry(sessions_path)},
                  {"diaries", input_entry(diaries_path)}}},
                {"outputs",
                 {{"session_length", (dir / "benchmark_session_length.csv").string()},
                  {"event_count", (dir / "benchmark_event_count.csv").string()}}},
                {"session_length", agreement_json(length)},
                {"event_count", agreement_json(count)}});
  return 0;
}

int cmd_aggregate(const CommonOpts& common, const std::string& sessions_path,
                  const std::string& focus_path) {
  const fs::path dir = prepare_out_dir(common.out_dir);
  std::vector<ft::Session> sessions = load_sessions(sessions_path);
  std::ifstream focus_in = open_input(focus_path);
  std::vector<ft::FocusSession> focus = ft::read_focus_sessions_jsonl(focus_in);

  std::vector<ft::QuarterAggregate> rows = ft::quarter_metrics(focus, sessions);
  {
    std::ofstream out = open_output(dir / "quarters.csv");
    ft::write_quarter_csv(out, rows);
  }
  std::size_t degenerate = 0;
  for (const auto& r : rows) degenerate += r.zero_active_time ? 1 : 0;

  emit_summary({{"command", "aggregate"},
                {"inputs",
                 {{"sessions", input_entry(sessions_path)},
                  {"focus_sessions", input_entry(focus_path)}}},
                {"outputs", {{"quarters", (dir / "quarters.csv").string()}}},
                {"n_rows", rows.size()},
                {"n_zero_active_time", degenerate}});
  return 0;
}

int cmd_fit(const std::string& csv_path, const std::string& x_col, const std::string& y_col) {
  std::ifstream in = open_input(csv_path);
  ft::CsvReader reader(in);
  auto header = reader.next();
  if (!header) throw ft::ValidationError("fit: empty CSV");
  std::ptrdiff_t xi = -1, yi = -1;
  for (std::size_t i = 0; i < header->size(); ++i) {
    if ((*header)[i] == x_col) xi = static_cast<std::ptrdiff_t>(i);
    if ((*header)[i] == y_col) yi = static_cast<std::ptrdiff_t>(i);
  }
  if (xi < 0) throw ft::ValidationError("fit: column '" + x_col + "' not found");
  if (yi < 0) throw ft::ValidationError("fit: column '" + y_col + "' not found");

  std::vector<double> xs, ys;
  while (auto row = reader.next()) {
    if (row->size() == 1 && (*row)[0].empty()) continue;
    if (static_cast<std::size_t>(std::max(xi, yi)) >= row->size()) {
      throw ft::ValidationError("fit: row with too few columns");
    }
    try {
      xs.push_back(std::stod((*row)[static_cast<std::size_t>(xi)]));
      ys.push_back(std::stod((*row)[static_cast<std::size_t>(yi)]));
    } catch (const std::exception&) {
      throw ft::ValidationError("fit: non-numeric value in column");
    }
  }
  ft::FitResult fit = ft::linear_fit(xs, ys);
  emit_summary({{"command", "fit"},
                {"config", ojson{{"x", x_col}, {"y", y_col}}},
                {"inputs", {{"csv", input_entry(csv_path)}}},
                {"slope", fit.slope},
                {"intercept", fit.intercept},
                {"t_stat", fit.t_stat},
                {"p_value", fit.p_value},
                {"n", fit.n}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"focus-time pipeline over tool-usage event logs"};
  app.require_subcommand(1);

  CommonOpts common;
  std::optional<std::string> config_path;
  app.add_option("--config", config_path,
                 "JSON config file (sections: ingest, train, focus, grid, synth)");

  // synth
  auto* synth = app.add_subcommand("synth", "generate a deterministic synthetic corpus");
  std::optional<std::uint64_t> synth_seed;
  std::optional<std::uint32_t> synth_actors, synth_days;
  synth->add_option("--seed", synth_seed, "generator seed");
  synth->add_option("--actors", synth_actors, "number of actors");
  synth->add_option("--days", synth_days, "number of workdays per actor");
  synth->add_option("--out", common.out_dir, "output directory");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "parse raw events and split them into sessions");
  std::string ingest_input;
  std::optional<std::string> ingest_format;
  std::optional<std::int64_t> ingest_gap_minutes;
  bool ingest_strict = false;
  ingest->add_option("--input", ingest_input, "raw event log")->required();
  ingest->add_option("--format", ingest_format, "jsonl or csv");
  ingest->add_option("--gap-minutes", ingest_gap_minutes, "inactivity gap (minutes)");
  ingest->add_flag("--strict", ingest_strict, "abort on the first malformed row");
  ingest->add_option("--out", common.out_dir, "output directory");

  // train
  auto* train = app.add_subcommand("train", "train event-label embeddings over sessions");
  std::string train_sessions;
  std::optional<std::uint32_t> t_dims, t_window, t_min_count, t_negative, t_epochs;
  std::optional<double> t_lr;
  std::optional<std::uint64_t> t_seed;
  train->add_option("--sessions", train_sessions, "sessions.jsonl")->required();
  train->add_option("--dims", t_dims, "embedding dimensions");
  train->add_option("--context-window", t_window, "context window");
  train->add_option("--min-count", t_min_count, "discard labels rarer than this");
  train->add_option("--negative-samples", t_negative, "negatives per positive");
  train->add_option("--epochs", t_epochs, "training epochs");
  train->add_option("--learning-rate", t_lr, "initial learning rate");
  train->add_option("--seed", t_seed, "training seed");
  train->add_option("--jobs", common.jobs, "worker cap (training itself is single-threaded)");
  train->add_option("--out", common.out_dir, "output directory");

  // nearest
  auto* nearest = app.add_subcommand("nearest", "embedding diagnostics: nearest labels");
  std::string nearest_model, nearest_label;
  std::size_t nearest_k = 10;
  nearest->add_option("--model", nearest_model, "model.ftem")->required();
  nearest->add_option("--label", nearest_label, "query label (tool:action)")->required();
  nearest->add_option("--k", nearest_k, "neighbors to report");

  // shared focus params
  std::optional<std::int64_t> f_window_minutes, f_merge_gap_minutes;
  std::optional<double> f_threshold, f_buffer_ms;
  auto add_focus_options = [&](CLI::App* cmd) {
    cmd->add_option("--window-minutes", f_window_minutes, "sliding window W (minutes)");
    cmd->add_option("--threshold", f_threshold, "focus threshold");
    cmd->add_option("--buffer-ms", f_buffer_ms, "weight buffer B (milliseconds)");
    cmd->add_option("--merge-gap-minutes", f_merge_gap_minutes, "window merge gap (minutes)");
  };

  // score
  auto* score = app.add_subcommand("score", "compute focus sessions");
  std::string score_sessions, score_model;
  bool dump_windows = false;
  score->add_option("--sessions", score_sessions, "sessions.jsonl")->required();
  score->add_option("--model", score_model, "model.ftem")->required();
  add_focus_options(score);
  score->add_flag("--dump-windows", dump_windows, "also write per-window values");
  score->add_option("--jobs", common.jobs, "parallel scoring workers");
  score->add_option("--out", common.out_dir, "output directory");

  // validate
  auto* validate = app.add_subcommand("validate", "agreement against diary ground truth");
  std::string val_sessions, val_model, val_diaries;
  double overlap_fraction = 0.5;
  validate->add_option("--sessions", val_sessions, "sessions.jsonl")->required();
  validate->add_option("--model", val_model, "model.ftem")->required();
  validate->add_option("--diaries", val_diaries, "diaries.csv")->required();
  add_focus_options(validate);
  validate->add_option("--overlap", overlap_fraction, "overlap fraction for a focused interval");
  validate->add_option("--jobs", common.jobs, "parallel scoring workers");
  validate->add_option("--out", common.out_dir, "output directory");

  // grid
  auto* grid = app.add_subcommand("grid", "hyperparameter grid search maximizing median PABAK");
  std::string grid_sessions, grid_model, grid_diaries;
  std::vector<double> flag_thresholds, flag_buffers;
  std::vector<std::int64_t> flag_windows_minutes;
  grid->add_option("--sessions", grid_sessions, "sessions.jsonl")->required();
  grid->add_option("--model", grid_model, "model.ftem")->required();
  grid->add_option("--diaries", grid_diaries, "diaries.csv")->required();
  auto* grid_thresholds_opt =
      grid->add_option("--thresholds", flag_thresholds, "threshold axis")->delimiter(',');
  auto* grid_windows_opt =
      grid->add_option("--windows-minutes", flag_windows_minutes, "window axis (minutes)")
          ->delimiter(',');
  auto* grid_buffers_opt =
      grid->add_option("--buffers-ms", flag_buffers, "buffer axis (ms)")->delimiter(',');
  grid->add_option("--merge-gap-minutes", f_merge_gap_minutes, "window merge gap (minutes)");
  grid->add_option("--jobs", common.jobs, "parallel grid workers");
  grid->add_option("--out", common.out_dir, "output directory");

  // benchmarks
  auto* benchmarks =
      app.add_subcommand("benchmarks", "naive session-length/event-count baselines");
  std::string bench_sessions, bench_diaries;
  double bench_percentile = 90.0;
  benchmarks->add_option("--sessions", bench_sessions, "sessions.jsonl")->required();
  benchmarks->add_option("--diaries", bench_diaries, "diaries.csv")->required();
  benchmarks->add_option("--percentile", bench_percentile, "qualifying percentile");
  benchmarks->add_option("--out", common.out_dir, "output directory");

  // aggregate
  auto* aggregate = app.add_subcommand("aggregate", "per-actor quarterly focus metrics");
  std::string agg_sessions, agg_focus;
  aggregate->add_option("--sessions", agg_sessions, "sessions.jsonl")->required();
  aggregate->add_option("--focus", agg_focus, "focus_sessions.jsonl")->required();
  aggregate->add_option("--out", common.out_dir, "output directory");

  // fit
  auto* fit = app.add_subcommand("fit", "single-predictor OLS over a CSV");
  std::string fit_csv, fit_x, fit_y;
  fit->add_option("--csv", fit_csv, "input CSV")->required();
  fit->add_option("--x", fit_x, "predictor column")->required();
  fit->add_option("--y", fit_y, "response column")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig cfg = load_run_config(config_path);

    if (*synth) {
      if (synth_seed) cfg.synth.seed = *synth_seed;
      if (synth_actors) cfg.synth.n_actors = *synth_actors;
      if (synth_days) cfg.synth.days = *synth_days;
      return cmd_synth(common, cfg.synth);
    }
    if (*ingest) {
      if (ingest_format) cfg.ingest.format = ft::parse_log_format(*ingest_format);
      if (ingest_gap_minutes) {
        cfg.ingest.inactivity_gap_ms = *ingest_gap_minutes * ft::kMillisPerMinute;
      }
      if (ingest_strict) cfg.ingest.strict = true;
      return cmd_ingest(common, cfg.ingest, ingest_input);
    }
    if (*train) {
      if (t_dims) cfg.train.dims = *t_dims;
      if (t_window) cfg.train.context_window = *t_window;
      if (t_min_count) cfg.train.min_count = *t_min_count;
      if (t_negative) cfg.train.negative_samples = *t_negative;
      if (t_epochs) cfg.train.epochs = *t_epochs;
      if (t_lr) cfg.train.learning_rate = *t_lr;
      if (t_seed) cfg.train.seed = *t_seed;
      cfg.train.validate();
      return cmd_train(common, cfg.train, train_sessions);
    }
    if (*nearest) return cmd_nearest(nearest_model, nearest_label, nearest_k);

    auto apply_focus_overrides = [&] {
      if (f_window_minutes) cfg.focus.window_ms = *f_window_minutes * ft::kMillisPerMinute;
      if (f_threshold) cfg.focus.threshold = *f_threshold;
      if (f_buffer_ms) cfg.focus.buffer_ms = *f_buffer_ms;
      if (f_merge_gap_minutes) {
        cfg.focus.merge_gap_ms = *f_merge_gap_minutes * ft::kMillisPerMinute;
      }
      cfg.focus.validate();
    };

    if (*score) {
      apply_focus_overrides();
      return cmd_score(common, cfg.focus, score_sessions, score_model, dump_windows);
    }
    if (*validate) {
      apply_focus_overrides();
      return cmd_validate(common, cfg.focus, val_sessions, val_model, val_diaries,
                          overlap_fraction);
    }
    if (*grid) {
      if (grid_thresholds_opt->count()) cfg.grid.thresholds = flag_thresholds;
      if (grid_windows_opt->count()) {
        cfg.grid.windows_ms.clear();
        for (std::int64_t m : flag_windows_minutes) {
          cfg.grid.windows_ms.push_back(m * ft::kMillisPerMinute);
        }
      }
      if (grid_buffers_opt->count()) cfg.grid.buffers_ms = flag_buffers;
      const ft::Millis merge_gap = f_merge_gap_minutes
                                       ? *f_merge_gap_minutes * ft::kMillisPerMinute
                                       : cfg.focus.merge_gap_ms;
      return cmd_grid(common, cfg.grid, merge_gap, grid_sessions, grid_model, grid_diaries);
    }
    if (*benchmarks) {
      return cmd_benchmarks(common, bench_sessions, bench_diaries, bench_percentile);
    }
    if (*aggregate) return cmd_aggregate(common, agg_sessions, agg_focus);
    if (*fit) return cmd_fit(fit_csv, fit_x, fit_y);
  } catch (const ft::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
