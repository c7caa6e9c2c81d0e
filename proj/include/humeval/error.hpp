#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace humeval {

enum class ErrorKind {
  parse,
  schema,
  range,
  ordering,
  input,
  degenerate_calibration,
  incomplete_calibration,
  sequence_too_short,
  undefined_correlation,
  length_mismatch,
  missing_data,
  io,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the engine. `line()` is set for errors that can be
/// attributed to a single line of an NDJSON/CSV input (1-based).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        std::optional<std::size_t> line = std::nullopt);

  ErrorKind kind() const noexcept { return kind_; }
  std::optional<std::size_t> line() const noexcept { return line_; }

 private:
  ErrorKind kind_;
  std::optional<std::size_t> line_;
};

}  // namespace humeval
