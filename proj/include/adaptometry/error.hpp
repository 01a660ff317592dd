#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace adaptometry {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. `line()` is 1-based, 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error(line ? "line " + std::to_string(line) + ": " + message : message),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// An indicator is constant across units, so Pearson's r is undefined.
class ZeroVarianceError : public Error {
 public:
  explicit ZeroVarianceError(int indicator_id)
      : Error("indicator " + std::to_string(indicator_id) + " has zero variance across units"),
        indicator_id_(indicator_id) {}

  int indicator_id() const noexcept { return indicator_id_; }

 private:
  int indicator_id_;
};

}  // namespace adaptometry
