#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "json.hpp"

#include "focustime/embedding.hpp"
#include "focustime/errors.hpp"
#include "focustime/kernels.hpp"

namespace ft {

namespace {

constexpr char kMagic[4] = {'F', 'T', 'E', 'M'};
constexpr std::uint32_t kFormatVersion = 1;

void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f32(std::string& out, float f) {
  std::uint32_t bits;
  std::memcpy(&bits, &f, 4);
  put_u32(out, bits);
}

class ByteCursor {
 public:
  ByteCursor(const std::string& data) : data_(data) {}

  std::uint16_t u16() { return static_cast<std::uint16_t>(byte() | (byte() << 8)); }

  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(byte()) << (8 * i);
    return v;
  }

  float f32() {
    const std::uint32_t bits = u32();
    float f;
    std::memcpy(&f, &bits, 4);
    return f;
  }

  std::string bytes(std::size_t n) {
    need(n);
    std::string s = data_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  std::string rest() { return data_.substr(pos_); }
  std::size_t remaining() const { return data_.size() - pos_; }

 private:
  std::uint32_t byte() {
    need(1);
    return static_cast<unsigned char>(data_[pos_++]);
  }

  void need(std::size_t n) {
    if (pos_ + n > data_.size()) throw FormatError("model file truncated");
  }

  const std::string& data_;
  std::size_t pos_ = 0;
};

nlohmann::ordered_json config_to_json(const TrainConfig& c) {
  return {{"dims", c.dims},
          {"context_window", c.context_window},
          {"min_count", c.min_count},
          {"negative_samples", c.negative_samples},
          {"epochs", c.epochs},
          {"learning_rate", c.learning_rate},
          {"min_learning_rate", c.min_learning_rate},
          {"seed", c.seed}};
}

TrainConfig config_from_json(const nlohmann::json& j) {
  TrainConfig c;
  c.dims = j.at("dims").get<std::uint32_t>();
  c.context_window = j.at("context_window").get<std::uint32_t>();
  c.min_count = j.at("min_count").get<std::uint32_t>();
  c.negative_samples = j.at("negative_samples").get<std::uint32_t>();
  c.epochs = j.at("epochs").get<std::uint32_t>();
  c.learning_rate = j.at("learning_rate").get<double>();
  c.min_learning_rate = j.at("min_learning_rate").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

}  // namespace

void TrainConfig::validate() const {
  if (dims < 2) throw ConfigError("dims must be >= 2");
  if (context_window < 1) throw ConfigError("context_window must be >= 1");
  if (min_count < 1) throw ConfigError("min_count must be >= 1");
  if (negative_samples < 1) throw ConfigError("negative_samples must be >= 1");
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be positive");
  if (!(min_learning_rate > 0.0) || min_learning_rate > learning_rate) {
    throw ConfigError("min_learning_rate must be in (0, learning_rate]");
  }
}

EmbeddingModel::EmbeddingModel(std::vector<std::string> vocab, std::vector<float> vectors,
                               TrainConfig config, CorpusStats stats)
    : vocab_(std::move(vocab)),
      vectors_(std::move(vectors)),
      config_(config),
      stats_(stats) {
  if (vocab_.empty()) throw ValidationError("embedding model needs a non-empty vocabulary");
  if (vectors_.size() != vocab_.size() * config_.dims) {
    throw ValidationError("vector storage does not match vocab_size * dims");
  }
  for (float f : vectors_) {
    if (!std::isfinite(f)) throw ValidationError("embedding model contains non-finite values");
  }
  index_.reserve(vocab_.size());
  for (std::uint32_t i = 0; i < vocab_.size(); ++i) {
    if (!index_.emplace(vocab_[i], i).second) {
      throw ValidationError("duplicate vocabulary entry '" + vocab_[i] + "'");
    }
  }
}

std::int64_t EmbeddingModel::find(std::string_view label) const {
  auto it = index_.find(std::string(label));
  return it == index_.end() ? -1 : static_cast<std::int64_t>(it->second);
}

std::uint32_t EmbeddingModel::index_of(std::string_view label) const {
  const std::int64_t idx = find(label);
  if (idx < 0) throw LabelLookupError(std::string(label));
  return static_cast<std::uint32_t>(idx);
}

std::span<const float> EmbeddingModel::vector(std::uint32_t index) const {
  return {vectors_.data() + static_cast<std::size_t>(index) * config_.dims, config_.dims};
}

double EmbeddingModel::distance(std::uint32_t a, std::uint32_t b) const {
  if (a == b) return 0.0;
  const float* va = vectors_.data() + static_cast<std::size_t>(a) * config_.dims;
  const float* vb = vectors_.data() + static_cast<std::size_t>(b) * config_.dims;
  const double dot = kernels::dot_f32(va, vb, config_.dims);
  const double na = std::sqrt(kernels::dot_f32(va, va, config_.dims));
  const double nb = std::sqrt(kernels::dot_f32(vb, vb, config_.dims));
  if (na == 0.0 || nb == 0.0) {
    throw ValidationError("zero vector in embedding model: '" + vocab_[na == 0.0 ? a : b] + "'");
  }
  const double cosine = dot / (na * nb);
  return std::clamp(0.5 * (1.0 - cosine), 0.0, 1.0);
}

double EmbeddingModel::distance(std::string_view a, std::string_view b) const {
  return distance(index_of(a), index_of(b));
}

std::vector<std::pair<std::string, double>> EmbeddingModel::nearest(std::string_view label,
                                                                    std::size_t k) const {
  if (k < 1) throw ValidationError("nearest: k must be >= 1");
  const std::uint32_t self = index_of(label);
  std::vector<std::pair<double, std::uint32_t>> ranked;
  ranked.reserve(vocab_.size() - 1);
  for (std::uint32_t i = 0; i < vocab_.size(); ++i) {
    if (i == self) continue;
    ranked.emplace_back(distance(self, i), i);
  }
  std::sort(ranked.begin(), ranked.end());
  k = std::min(k, ranked.size());
  std::vector<std::pair<std::string, double>> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.emplace_back(vocab_[ranked[i].second], ranked[i].first);
  return out;
}

void EmbeddingModel::save(const std::filesystem::path& path) const {
  std::string blob;
  blob.append(kMagic, 4);
  std::string body;
  put_u32(body, kFormatVersion);
  put_u32(body, config_.dims);
  put_u32(body, static_cast<std::uint32_t>(vocab_.size()));
  for (std::uint32_t i = 0; i < vocab_.size(); ++i) {
    const std::string& label = vocab_[i];
    if (label.size() > 0xffff) throw ValidationError("label too long to serialize");
    put_u16(body, static_cast<std::uint16_t>(label.size()));
    body += label;
    for (float f : vector(i)) put_f32(body, f);
  }
  blob += body;

  nlohmann::ordered_json trailer;
  trailer["config"] = config_to_json(config_);
  trailer["corpus_stats"] = {{"token_count", stats_.token_count},
                             {"sentence_count", stats_.sentence_count}};
  blob += trailer.dump();

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(blob.data(), static_cast<std::streamsize>(blob.size()));
  if (!out) throw IoError("failed writing model to '" + path.string() + "'");
}

EmbeddingModel EmbeddingModel::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("failed reading '" + path.string() + "'");

  ByteCursor cur(data);
  if (cur.bytes(4) != std::string(kMagic, 4)) {
    throw FormatError("not a model file (bad magic)");
  }
  const std::uint32_t version = cur.u32();
  if (version != kFormatVersion) {
    throw FormatError("unsupported model format version " + std::to_string(version));
  }
  const std::uint32_t dims = cur.u32();
  const std::uint32_t vocab_size = cur.u32();
  if (dims < 2 || vocab_size == 0) throw FormatError("model file has implausible header");

  std::vector<std::string> vocab;
  vocab.reserve(vocab_size);
  std::vector<float> vectors;
  vectors.reserve(static_cast<std::size_t>(vocab_size) * dims);
  for (std::uint32_t i = 0; i < vocab_size; ++i) {
    const std::uint16_t len = cur.u16();
    vocab.push_back(cur.bytes(len));
    for (std::uint32_t d = 0; d < dims; ++d) vectors.push_back(cur.f32());
  }
  if (cur.remaining() == 0) throw FormatError("model file missing JSON trailer");

  nlohmann::json trailer = nlohmann::json::parse(cur.rest(), nullptr, false);
  if (trailer.is_discarded() || !trailer.contains("config") ||
      !trailer.contains("corpus_stats")) {
    throw FormatError("model file has a malformed JSON trailer");
  }
  TrainConfig config;
  CorpusStats stats;
  try {
    config = config_from_json(trailer["config"]);
    stats.token_count = trailer["corpus_stats"].at("token_count").get<std::uint64_t>();
    stats.sentence_count = trailer["corpus_stats"].at("sentence_count").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("model trailer: ") + e.what());
  }
  if (config.dims != dims) throw FormatError("model trailer dims disagree with header");
  return EmbeddingModel(std::move(vocab), std::move(vectors), config, stats);
}

bool EmbeddingModel::operator==(const EmbeddingModel& other) const {
  if (vocab_ != other.vocab_ || config_ != other.config_ || !(stats_ == other.stats_)) {
    return false;
  }
  if (vectors_.size() != other.vectors_.size()) return false;
  // bitwise comparison; avoids -0.0/NaN surprises
  return std::memcmp(vectors_.data(), other.vectors_.data(), vectors_.size() * sizeof(float)) == 0;
}

}  // namespace ft
