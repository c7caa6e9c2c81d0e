#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "humeval/types.hpp"

namespace humeval {

/// One ScoreReport per line, sorted keys, shortest round-trip reals.
std::string serialize_report(const ScoreReport& report);
std::string serialize_reports(const std::vector<ScoreReport>& reports);

/// Parses reports NDJSON and checks the ScoreReport invariants
/// (unit-interval scores, fused scores bounded by their factors).
std::vector<ScoreReport> parse_reports(std::string_view text);

/// Throws ErrorKind::range when a report breaks its invariants.
void validate(const ScoreReport& report);

}  // namespace humeval
