#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "humeval/types.hpp"

namespace humeval {

/// Empirical bounds of a raw metric over a real-motion corpus. By default the
/// exact extrema; with `percentile` p the bounds are the p-th and (100-p)-th
/// percentiles (linear interpolation), for robustness experiments.
///
/// Throws ErrorKind::input for an empty or non-finite sample and
/// ErrorKind::degenerate_calibration when the bounds coincide.
CalibrationBounds fit_bounds(std::span<const double> raw_scores, Metric metric, std::string corpus_id,
                             std::optional<double> percentile = std::nullopt);

/// clamp((raw - min) / (max - min), 0, 1)
double normalize(double raw, const CalibrationBounds& bounds);

void validate(const CalibrationBounds& bounds);

struct CalibrationSet {
  CalibrationBounds anat;
  CalibrationBounds local;
  CalibrationBounds global;

  const CalibrationBounds& get(Metric metric) const;
  friend bool operator==(const CalibrationSet&, const CalibrationSet&) = default;
};

/// calibration.json: {"anat":{"corpus_id":S,"max":R,"min":R,"n":N},"global":{...},"local":{...}}
/// Reals use shortest round-trip formatting so save/load is value-exact.
std::string serialize_calibration(const CalibrationSet& set);
CalibrationSet parse_calibration(std::string_view text);

void save_bounds(const std::filesystem::path& path, const CalibrationSet& set);
CalibrationSet load_bounds(const std::filesystem::path& path);

}  // namespace humeval
