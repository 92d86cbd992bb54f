#include <algorithm>
#include <cmath>
#include <vector>

#include "focustime/embedding.hpp"
#include "focustime/errors.hpp"
#include "focustime/kernels.hpp"
#include "focustime/rng.hpp"

namespace ft {

namespace {

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// Cumulative unigram^0.75 table; negatives drawn by binary search.
class NoiseTable {
 public:
  explicit NoiseTable(const std::vector<std::uint64_t>& counts) {
    cumulative_.reserve(counts.size());
    double total = 0.0;
    for (std::uint64_t c : counts) {
      total += std::pow(static_cast<double>(c), 0.75);
      cumulative_.push_back(total);
    }
  }

  std::uint32_t sample(Rng& rng) const {
    const double u = rng.unit() * cumulative_.back();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    if (it == cumulative_.end()) --it;
    return static_cast<std::uint32_t>(it - cumulative_.begin());
  }

 private:
  std::vector<double> cumulative_;
};

bool all_finite(const std::vector<float>& v) {
  for (float f : v) {
    if (!std::isfinite(f)) return false;
  }
  return true;
}

}  // namespace

EmbeddingModel train(const Corpus& corpus, const TrainConfig& config) {
  config.validate();
  if (corpus.vocab.empty() || corpus.sentences.empty()) {
    throw ValidationError("cannot train on an empty corpus");
  }

  const std::size_t vocab_size = corpus.vocab.size();
  const std::uint32_t dims = config.dims;
  Rng rng(config.seed);

  // input vectors: small uniform noise; output vectors: zeros
  std::vector<float> syn0(vocab_size * dims);
  for (float& f : syn0) {
    f = static_cast<float>((rng.unit() - 0.5) / dims);
  }
  std::vector<float> syn1(vocab_size * dims, 0.0f);

  NoiseTable noise(corpus.counts);
  const double total_positions =
      static_cast<double>(corpus.stats.token_count) * config.epochs;
  std::uint64_t processed = 0;
  double alpha = config.learning_rate;
  std::vector<float> grad(dims);

  for (std::uint32_t epoch = 0; epoch < config.epochs; ++epoch) {
    for (const auto& sentence : corpus.sentences) {
      alpha = std::max(config.min_learning_rate,
                       config.learning_rate -
                           (config.learning_rate - config.min_learning_rate) *
                               (static_cast<double>(processed) / total_positions));
      processed += sentence.size();

      for (std::size_t center = 0; center < sentence.size(); ++center) {
        const std::uint32_t target = sentence[center];
        // dynamic context width in [1, context_window], word2vec style
        const std::size_t width = 1 + static_cast<std::size_t>(rng.bounded(config.context_window));
        const std::size_t lo = center >= width ? center - width : 0;
        const std::size_t hi = std::min(sentence.size() - 1, center + width);
        for (std::size_t pos = lo; pos <= hi; ++pos) {
          if (pos == center) continue;
          float* input = syn0.data() + static_cast<std::size_t>(sentence[pos]) * dims;
          std::fill(grad.begin(), grad.end(), 0.0f);
          for (std::uint32_t k = 0; k <= config.negative_samples; ++k) {
            std::uint32_t out_word;
            double label;
            if (k == 0) {
              out_word = target;
              label = 1.0;
            } else {
              out_word = noise.sample(rng);
              if (out_word == target) continue;
              label = 0.0;
            }
            float* output = syn1.data() + static_cast<std::size_t>(out_word) * dims;
            const double score = kernels::dot_f32(input, output, dims);
            const float g = static_cast<float>((label - sigmoid(score)) * alpha);
            kernels::axpy_f32(g, output, grad.data(), dims);
            kernels::axpy_f32(g, input, output, dims);
          }
          kernels::axpy_f32(1.0f, grad.data(), input, dims);
        }
      }
    }
    if (!all_finite(syn0) || !all_finite(syn1)) {
      throw TrainingError("training diverged: non-finite vector component", epoch + 1);
    }
  }

  // a zero vector would make cosine distance undefined
  for (std::size_t i = 0; i < vocab_size; ++i) {
    bool all_zero = true;
    for (std::uint32_t d = 0; d < dims; ++d) {
      if (syn0[i * dims + d] != 0.0f) {
        all_zero = false;
        break;
      }
    }
    if (all_zero) {
      throw TrainingError("training produced a zero vector for '" + corpus.vocab[i] + "'",
                          config.epochs);
    }
  }

  return EmbeddingModel(corpus.vocab, std::move(syn0), config, corpus.stats);
}

}  // namespace ft
