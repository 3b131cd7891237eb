#pragma once

#include <stdexcept>
#include <string>

namespace mohpo {

/// A study or request is misconfigured (bad space, mapping, split, ...).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The optimization run itself cannot proceed (no admissible queries, ...).
class StudyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file (corpus, queries, interaction log, report).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mohpo
