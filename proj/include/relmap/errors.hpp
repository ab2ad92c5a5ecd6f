#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace relmap {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raw entity text that normalizes to nothing.
class InvalidEntityError : public Error {
 public:
  using Error::Error;
};

/// Caller-supplied data violates a precondition (too few entities, unknown names, ...).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Missing or corrupt configuration: store files, prompt templates, source definitions.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A relation source could not answer (network failure, offline mode, ...).
class SourceUnavailableError : public Error {
 public:
  using Error::Error;
};

/// The endpoint asked us to slow down.
class ThrottledError : public SourceUnavailableError {
 public:
  using SourceUnavailableError::SourceUnavailableError;
};

/// A response or file record could not be parsed.
class ParseError : public Error {
 public:
  using Error::Error;
};

class EmbeddingUnavailableError : public Error {
 public:
  using Error::Error;
};

/// Receives non-fatal diagnostics. An empty sink discards them.
using WarningSink = std::function<void(const std::string&)>;

inline void warn(const WarningSink& sink, const std::string& message) {
  if (sink) sink(message);
}

}  // namespace relmap
