#include "humeval/error.hpp"

namespace humeval {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::parse: return "parse";
    case ErrorKind::schema: return "schema";
    case ErrorKind::range: return "range";
    case ErrorKind::ordering: return "ordering";
    case ErrorKind::input: return "input";
    case ErrorKind::degenerate_calibration: return "degenerate-calibration";
    case ErrorKind::incomplete_calibration: return "incomplete-calibration";
    case ErrorKind::sequence_too_short: return "sequence-too-short";
    case ErrorKind::undefined_correlation: return "undefined-correlation";
    case ErrorKind::length_mismatch: return "length-mismatch";
    case ErrorKind::missing_data: return "missing-data";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

namespace {
std::string with_line(const std::string& message, std::optional<std::size_t> line) {
  if (!line) return message;
  return "line " + std::to_string(*line) + ": " + message;
}
}  // namespace

Error::Error(ErrorKind kind, const std::string& message, std::optional<std::size_t> line)
    : std::runtime_error(with_line(message, line)), kind_(kind), line_(line) {}

}  // namespace humeval
