#pragma once

// calibrate -> score -> correlate / leaderboard / categories workflow, plus
// synthetic data generation. Each command reads and writes the standard files
// and reports progress on `log`.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "humeval/calibration.hpp"
#include "humeval/engine.hpp"
#include "humeval/geometry.hpp"

namespace humeval {

/// Fits bounds over every video under `corpus_dir` and writes calibration.json.
CalibrationSet cmd_calibrate(const std::filesystem::path& corpus_dir, const std::filesystem::path& out,
                             const EngineConfig& cfg, std::ostream& log);

/// Writes one report line per video found under `features_dir`; returns the count.
std::size_t cmd_score(const std::filesystem::path& features_dir, const std::filesystem::path& calibration,
                      const std::filesystem::path& out, const EngineConfig& cfg, std::ostream& log);

struct CorrelateRequest {
  std::filesystem::path reports;
  std::filesystem::path ratings;
  std::filesystem::path out;         ///< correlations.csv
  bool ablation = false;
  bool allow_missing = false;
  bool per_model = false;
  std::vector<std::string> scores;   ///< extra score columns, paired with both dimensions
};

void cmd_correlate(const CorrelateRequest& request, std::ostream& log);

/// Writes leaderboard.csv and prints the aligned table on `log`. Ratings, if
/// given, supply model ids for reports scored without a model directory.
void cmd_leaderboard(const std::filesystem::path& reports, const std::optional<std::filesystem::path>& ratings,
                     const std::filesystem::path& out, std::ostream& log);

/// Writes categories.csv and plotdata.json.
void cmd_categories(const std::filesystem::path& reports, const std::filesystem::path& ratings,
                    const std::filesystem::path& out_csv, const std::filesystem::path& plot_json,
                    bool allow_missing, std::ostream& log);

struct SynthRequest {
  std::string kind;  ///< smooth | jitter | flip | kps | vlm | corpus
  std::filesystem::path out;
  std::uint64_t seed = 7;
  std::string video_id = "synth";
  std::size_t frames = 120;
  double fps = 30.0;
  std::size_t joints = 22;
  double amplitude = 0.05;                 ///< jitter
  std::optional<std::size_t> flip_frame;   ///< default: frames / 2
  double flip_angle_deg = 180.0;
  Vec3 flip_axis{0.0, 0.0, 1.0};
  std::size_t persons = 1;
  double base_confidence = 0.9;
  std::optional<std::string> degrade_part;
  double degrade_confidence = 0.1;
  double prior = 0.8;
  std::size_t videos_per_model = 10;       ///< corpus
  std::size_t calibration_videos = 10;     ///< corpus
};

void cmd_synth(const SynthRequest& request, std::ostream& log);

}  // namespace humeval
