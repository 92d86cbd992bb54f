#include <algorithm>
#include <map>

#include "focustime/embedding.hpp"
#include "focustime/errors.hpp"

namespace ft {

Corpus build_corpus(const std::vector<Session>& sessions, std::uint32_t min_count) {
  if (sessions.empty()) throw ValidationError("cannot build a corpus from zero sessions");
  if (min_count < 1) throw ConfigError("min_count must be >= 1");

  std::map<std::string, std::uint64_t> freq;
  std::vector<std::vector<std::string>> raw_sentences;
  raw_sentences.reserve(sessions.size());
  for (const Session& s : sessions) {
    std::vector<std::string> sentence;
    sentence.reserve(s.events.size());
    for (const Event& e : s.events) {
      std::string label = event_label(e).text;
      ++freq[label];
      sentence.push_back(std::move(label));
    }
    raw_sentences.push_back(std::move(sentence));
  }

  Corpus corpus;
  for (const auto& [label, count] : freq) {
    if (count >= min_count) {
      corpus.vocab.push_back(label);
      corpus.counts.push_back(count);
    }
  }
  if (corpus.vocab.empty()) {
    throw ConfigError("vocabulary is empty after the min_count=" + std::to_string(min_count) +
                      " filter; lower min_count");
  }

  // Frequent-first vocab order (ties alphabetical) keeps negative-sampling
  // lookups cache-friendly and the ordering deterministic.
  std::vector<std::size_t> order(corpus.vocab.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (corpus.counts[a] != corpus.counts[b]) return corpus.counts[a] > corpus.counts[b];
    return corpus.vocab[a] < corpus.vocab[b];
  });
  std::vector<std::string> vocab;
  std::vector<std::uint64_t> counts;
  vocab.reserve(order.size());
  counts.reserve(order.size());
  std::unordered_map<std::string, std::uint32_t> index;
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    vocab.push_back(corpus.vocab[order[rank]]);
    counts.push_back(corpus.counts[order[rank]]);
    index.emplace(vocab.back(), static_cast<std::uint32_t>(rank));
  }
  corpus.vocab = std::move(vocab);
  corpus.counts = std::move(counts);

  for (const auto& raw : raw_sentences) {
    std::vector<std::uint32_t> sentence;
    for (const std::string& label : raw) {
      auto it = index.find(label);
      if (it != index.end()) sentence.push_back(it->second);
    }
    if (sentence.empty()) continue;
    corpus.stats.token_count += sentence.size();
    corpus.sentences.push_back(std::move(sentence));
  }
  corpus.stats.sentence_count = corpus.sentences.size();
  return corpus;
}

}  // namespace ft
