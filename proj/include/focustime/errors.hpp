#pragma once

#include <stdexcept>
#include <string>

namespace ft {

// Bad input data or arguments (CLI exit code 1).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad configuration (unknown keys, impossible parameter combinations).
class ConfigError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Malformed artifact files (model files, truncated inputs).
class FormatError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// A label that is not in the embedding vocabulary.
class LabelLookupError : public ValidationError {
 public:
  explicit LabelLookupError(const std::string& label)
      : ValidationError("label not in vocabulary: '" + label + "'"), label_(label) {}
  const std::string& label() const { return label_; }

 private:
  std::string label_;
};

// Numeric failure during embedding training; carries the epoch it surfaced in.
class TrainingError : public std::runtime_error {
 public:
  TrainingError(const std::string& what, unsigned epoch)
      : std::runtime_error(what + " (epoch " + std::to_string(epoch) + ")"), epoch_(epoch) {}
  unsigned epoch() const { return epoch_; }

 private:
  unsigned epoch_;
};

// Filesystem / stream failures (CLI exit code 2).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ft
