#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "focustime/core.hpp"

namespace ft {

struct TrainConfig {
  std::uint32_t dims = 20;
  std::uint32_t context_window = 5;
  std::uint32_t min_count = 200;
  std::uint32_t negative_samples = 5;
  std::uint32_t epochs = 5;
  double learning_rate = 0.025;      // decayed linearly to min_learning_rate
  double min_learning_rate = 1e-4;
  std::uint64_t seed = 1;

  void validate() const;  // throws ConfigError
  bool operator==(const TrainConfig&) const = default;
};

struct CorpusStats {
  std::uint64_t token_count = 0;     // after min_count filtering
  std::uint64_t sentence_count = 0;  // after dropping emptied sentences

  bool operator==(const CorpusStats&) const = default;
};

// Sessions flattened to sentences of vocabulary ids, rare labels removed.
struct Corpus {
  std::vector<std::string> vocab;          // sorted by (count desc, label asc)
  std::vector<std::uint64_t> counts;       // pre-filter corpus frequencies
  std::vector<std::vector<std::uint32_t>> sentences;
  CorpusStats stats;
};

// Treats each session as one sentence of event labels in time order; labels
// occurring fewer than min_count times are dropped from both the sentences
// and the vocabulary. Throws ConfigError if nothing survives the filter.
Corpus build_corpus(const std::vector<Session>& sessions, std::uint32_t min_count);

// Immutable after construction; safe to share across threads.
class EmbeddingModel {
 public:
  EmbeddingModel(std::vector<std::string> vocab, std::vector<float> vectors, TrainConfig config,
                 CorpusStats stats);

  std::size_t vocab_size() const { return vocab_.size(); }
  std::uint32_t dims() const { return config_.dims; }
  const std::vector<std::string>& vocab() const { return vocab_; }
  const TrainConfig& config() const { return config_; }
  const CorpusStats& stats() const { return stats_; }

  // -1 if absent
  std::int64_t find(std::string_view label) const;
  // throws LabelLookupError
  std::uint32_t index_of(std::string_view label) const;
  std::span<const float> vector(std::uint32_t index) const;

  // (1 - cosine) / 2, clamped to [0, 1]; exactly 0 for identical labels.
  double distance(std::uint32_t a, std::uint32_t b) const;
  double distance(std::string_view a, std::string_view b) const;

  // k labels ranked by ascending distance; ties broken by vocab order.
  // k is clamped to vocab_size()-1.
  std::vector<std::pair<std::string, double>> nearest(std::string_view label,
                                                      std::size_t k) const;

  // Binary model file, little-endian: magic "FTEM", version, dims, vocab,
  // label/vector entries, then a JSON trailer (config + corpus stats).
  void save(const std::filesystem::path& path) const;
  static EmbeddingModel load(const std::filesystem::path& path);

  bool operator==(const EmbeddingModel& other) const;

 private:
  std::vector<std::string> vocab_;
  std::vector<float> vectors_;  // vocab_size * dims, row-major
  TrainConfig config_;
  CorpusStats stats_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

// Skip-gram with negative sampling (noise = unigram^0.75). Single-threaded;
// bit-deterministic for a fixed seed on a given platform.
EmbeddingModel train(const Corpus& corpus, const TrainConfig& config);

}  // namespace ft
