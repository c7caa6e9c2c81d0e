#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "humeval/anatomical.hpp"
#include "humeval/calibration.hpp"
#include "humeval/kinematics.hpp"
#include "humeval/types.hpp"

namespace humeval {

struct EngineConfig {
  AnatConfig anat;
  KinConfig kin;
  std::optional<double> percentile;  ///< calibration bounds from percentiles instead of extrema
  unsigned jobs = 0;                 ///< 0 = hardware concurrency

  void validate() const;
};

/// Applies one `key = value` setting. Keys: tau, sigma, truncate,
/// lambda_local, lambda_global, heading_epsilon, world_up, forward_axis,
/// percentile, jobs. Vectors are written `[x, y, z]`.
void apply_setting(EngineConfig& cfg, std::string_view key, std::string_view value);

/// Key/value config text (TOML subset: `key = value`, `#` comments,
/// `[section]` headers are accepted and ignored) applied over the defaults.
EngineConfig parse_engine_config(std::string_view text);
EngineConfig load_engine_config(const std::filesystem::path& path);

/// Raw, uncalibrated metrics of one video; nullopt where the modality is
/// missing or too short to score. Motion values average the scorable tracks.
struct RawScores {
  std::optional<double> anat;
  std::optional<double> local;
  std::optional<double> global;
};

RawScores raw_scores(const VideoFeatures& video, const EngineConfig& cfg);

/// Fits all three bounds on a real-motion corpus. Throws
/// ErrorKind::degenerate_calibration if any metric has fewer than two
/// distinct values.
CalibrationSet fit_calibration(std::span<const VideoFeatures> corpus, const EngineConfig& cfg,
                               const std::string& corpus_id);

/// Full coarse-to-fine report. A missing VLM record scores S_Prior = 1 with
/// "no-prior"; a missing keypoint stream or motion zeroes that branch.
ScoreReport score_video(const VideoFeatures& video, const CalibrationSet& calibration, const EngineConfig& cfg);

/// Runs fn(i) for i in [0, n) on up to `jobs` threads. The first exception
/// thrown by any task is rethrown after all workers finish.
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn);

std::vector<ScoreReport> score_videos(std::span<const VideoFeatures> videos, const CalibrationSet& calibration,
                                      const EngineConfig& cfg);

/// Feature files of one video found under a features directory. Files in a
/// subdirectory belong to the model named by the first path component.
struct FeatureFiles {
  std::string video_id;
  std::string model_id;
  std::optional<std::filesystem::path> keypoints;
  std::vector<std::filesystem::path> motion;
  std::optional<std::filesystem::path> prior;
};

/// Groups every *.kps.ndjson, *.mot.ndjson and *.vlm.json under `dir` by the
/// video_id in its header. Sorted by video_id.
std::vector<FeatureFiles> scan_features(const std::filesystem::path& dir);
VideoFeatures load_features(const FeatureFiles& files);

/// Writes <dir>/[<model_id>/]<video_id>.{kps.ndjson,<person>.mot.ndjson,vlm.json}.
void write_features(const std::filesystem::path& dir, const VideoFeatures& video);

}  // namespace humeval
