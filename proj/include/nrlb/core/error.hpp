#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace nrlb {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  explicit Error(std::string message) : std::runtime_error(std::move(message)) {}
};

class InvalidRequestError : public Error {
public:
  using Error::Error;
};

class CredentialMissingError : public Error {
public:
  using Error::Error;
};

/// Raised after the retry budget is spent; carries the last HTTP status seen.
class ExhaustedRetriesError : public Error {
public:
  ExhaustedRetriesError(std::string message, int last_status)
      : Error(std::move(message)), last_status_(last_status) {}
  int last_status() const { return last_status_; }

private:
  int last_status_;
};

/// Wire payload was not JSON or violated the chat-completion schema.
class MalformedResponseError : public Error {
public:
  using Error::Error;
};

class NoJsonFoundError : public Error {
public:
  using Error::Error;
};

class JsonParseError : public Error {
public:
  using Error::Error;
};

/// Agent output violated its expected schema even after one reprompt.
class SchemaViolationError : public Error {
public:
  using Error::Error;
};

class EmptyDraftError : public Error {
public:
  using Error::Error;
};

class UnknownLabelError : public Error {
public:
  using Error::Error;
};

/// Replay backend has no recording for the requested call.
class CassetteMissError : public Error {
public:
  using Error::Error;
};

/// apply_edits was given a plan built from a different summary text.
class StalePlanError : public Error {
public:
  using Error::Error;
};

class UndefinedInputError : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

/// Collects non-fatal diagnostics; callers pass nullptr when they do not care.
using Warnings = std::vector<std::string>;

inline void warn(Warnings* sink, std::string message) {
  if (sink != nullptr) {
    sink->push_back(std::move(message));
  }
}

}  // namespace nrlb
