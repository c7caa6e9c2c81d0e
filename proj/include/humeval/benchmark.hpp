#pragma once

// Synthetic benchmark corpora: a real-motion stand-in for calibration, a set
// of generated videos per model with injected artifacts, and human ratings
// drawn as a noisy function of the injected artifact magnitudes.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "humeval/types.hpp"

namespace humeval {

struct ModelProfile {
  std::string model_id;
  double prior_center = 0.8;       ///< mean VLM prior of this model's videos
  double jitter_rad = 0.0;         ///< mean jitter amplitude
  double flip_probability = 0.0;   ///< chance of a 180 degree root flip mid-video
  double anat_damage = 0.0;        ///< mean body-confidence damage in [0, 1]
};

/// synth_good, synth_fair, synth_bad, in decreasing quality.
std::vector<ModelProfile> default_model_profiles();

struct BenchmarkOptions {
  std::uint64_t seed = 1;
  std::vector<ModelProfile> models = default_model_profiles();
  std::size_t videos_per_model = 10;
  std::size_t calibration_videos = 10;
  std::size_t motion_frames = 60;
  std::size_t keypoint_frames = 12;
  double fps = 30.0;
  std::size_t joints = 22;
  double calibration_jitter_max = 0.006;   ///< capture noise in the real stand-in
  double calibration_damage_max = 0.0;
  double calibration_jump_max_deg = 0.0;
  double rating_jitter_scale = 0.05;       ///< jitter at which the motion rating bottoms out
  double rating_noise = 0.08;
  double rating_prior_weight = 0.5;        ///< weight of overall look against the specific artifact
  bool continuous = false;  ///< draw prior/jitter/damage uniformly instead of around the profile
  double continuous_jitter_max = 0.003;
  double continuous_jump_max_deg = 90.0;
};

struct SyntheticBenchmark {
  std::vector<VideoFeatures> calibration;
  std::vector<VideoFeatures> videos;
  std::vector<HumanRatingRecord> ratings;
};

SyntheticBenchmark make_benchmark(const BenchmarkOptions& options);

/// A single-model corpus with continuously varying prior, jitter, rotational
/// jump and anatomical damage, calibrated on a stand-in spanning the same range.
BenchmarkOptions ablation_options(std::uint64_t seed, std::size_t videos);

/// <root>/calibration/..., <root>/features/<model_id>/..., <root>/ratings.csv
void write_benchmark(const std::filesystem::path& root, const SyntheticBenchmark& benchmark);

}  // namespace humeval
