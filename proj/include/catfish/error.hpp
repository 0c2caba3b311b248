#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace catfish {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input data violates a schema or type invariant.
class ValidationError : public Error {
 public:
  ValidationError(const std::string& what, std::optional<std::size_t> line = std::nullopt,
                  std::string field = {})
      : Error(line ? "line " + std::to_string(*line) + ": " + what : what),
        line_(line),
        field_(std::move(field)) {}

  std::optional<std::size_t> line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  std::optional<std::size_t> line_;
  std::string field_;
};

// Bad parameters or missing assets.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// A statistic has no value for the given input (e.g. zero variance).
class UndefinedMetricError : public Error {
 public:
  using Error::Error;
};

}  // namespace catfish
