#pragma once

#include <stdexcept>
#include <string>

namespace jamgcn {

// Invalid configuration or arguments (CLI exit code 2).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// File could not be read, written, or parsed (CLI exit code 3).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The disruption threshold is at or above the field amplitude, so no
// disruption disk exists.
class ThresholdUnreachable : public std::domain_error {
 public:
  ThresholdUnreachable() : std::domain_error("threshold unreachable") {}
};

// Training produced a non-finite loss (CLI exit code 4).
class TrainingDiverged : public std::runtime_error {
 public:
  explicit TrainingDiverged(int epoch)
      : std::runtime_error("non-finite loss at epoch " + std::to_string(epoch)),
        epoch_(epoch) {}
  int epoch() const noexcept { return epoch_; }

 private:
  int epoch_;
};

}  // namespace jamgcn
