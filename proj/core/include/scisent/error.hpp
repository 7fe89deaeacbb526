#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace scisent {

// Base for every failure raised by the library. Subclasses map onto the exit
// code classes used by the CLI.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownLabel : public Error {
 public:
  explicit UnknownLabel(std::string text)
      : Error("unknown category label: \"" + text + "\""), text_(std::move(text)) {}
  const std::string& text() const noexcept { return text_; }

 private:
  std::string text_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class MalformedRecord : public Error {
 public:
  MalformedRecord(std::size_t line_number, std::string reason)
      : Error("line " + std::to_string(line_number) + ": " + reason),
        line_number_(line_number),
        reason_(std::move(reason)) {}
  std::size_t line_number() const noexcept { return line_number_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::size_t line_number_;
  std::string reason_;
};

// Bad arguments or configuration supplied by the caller.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class InvalidRatios : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class EmptyCategory : public Error {
 public:
  using Error::Error;
};

class TemplateError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class LengthMismatch : public Error {
 public:
  using Error::Error;
};

class MissingCategory : public Error {
 public:
  using Error::Error;
};

class SplitMismatch : public Error {
 public:
  using Error::Error;
};

class DegenerateMarginals : public Error {
 public:
  using Error::Error;
};

class DegenerateChance : public Error {
 public:
  using Error::Error;
};

class InvalidRatingMatrix : public Error {
 public:
  using Error::Error;
};

class DanglingSource : public Error {
 public:
  explicit DanglingSource(std::string id)
      : Error("synthetic record references missing source: " + id), id_(std::move(id)) {}
  const std::string& id() const noexcept { return id_; }

 private:
  std::string id_;
};

// Backend failures.
class BackendError : public Error {
 public:
  using Error::Error;
};

class NetworkError : public BackendError {
 public:
  using BackendError::BackendError;
};

class RateLimited : public BackendError {
 public:
  using BackendError::BackendError;
};

class ProtocolError : public BackendError {
 public:
  using BackendError::BackendError;
};

class AuthError : public BackendError {
 public:
  using BackendError::BackendError;
};

class HttpError : public BackendError {
 public:
  HttpError(int status, const std::string& body)
      : BackendError("HTTP " + std::to_string(status) + ": " + body), status_(status) {}
  int status() const noexcept { return status_; }

 private:
  int status_;
};

class MissingFixture : public BackendError {
 public:
  explicit MissingFixture(const std::string& key)
      : BackendError("no mock fixture for key: " + key) {}
};

}  // namespace scisent
