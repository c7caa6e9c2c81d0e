#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "humeval/geometry.hpp"

namespace humeval {

/// COCO-WholeBody topology: body 0-16, feet 17-22, face 23-90,
/// left hand 91-111, right hand 112-132 (0-based).
inline constexpr std::size_t kWholeBodyKeypointCount = 133;
/// SMPL body joints, excluding the pelvis/root.
inline constexpr std::size_t kDefaultJointCount = 22;

struct Keypoint {
  double x = 0.0;  ///< pixels
  double y = 0.0;  ///< pixels
  double confidence = 0.0;

  friend bool operator==(const Keypoint&, const Keypoint&) = default;
};

struct PersonKeypoints {
  std::vector<Keypoint> keypoints;  ///< always kWholeBodyKeypointCount entries

  friend bool operator==(const PersonKeypoints&, const PersonKeypoints&) = default;
};

struct KeypointFrame {
  std::uint64_t frame_index = 0;
  std::vector<PersonKeypoints> persons;

  friend bool operator==(const KeypointFrame&, const KeypointFrame&) = default;
};

struct KeypointStream {
  std::string video_id;
  double fps = 0.0;
  std::vector<KeypointFrame> frames;

  friend bool operator==(const KeypointStream&, const KeypointStream&) = default;
};

struct MotionFrame {
  Quaternion root_rotation;        ///< body-to-world, gravity-aligned y-up world
  std::vector<Vec3> joint_angles;  ///< axis-angle radians, one per joint

  friend bool operator==(const MotionFrame&, const MotionFrame&) = default;
};

struct MotionTrack {
  std::string video_id;
  std::string person_id;
  double fps = 0.0;
  std::vector<MotionFrame> frames;

  std::size_t joint_count() const {
    return frames.empty() ? 0 : frames.front().joint_angles.size();
  }

  friend bool operator==(const MotionTrack&, const MotionTrack&) = default;
};

struct VlmPriorRecord {
  std::string video_id;
  double positive_logit = 0.0;
  double negative_logit = 0.0;

  friend bool operator==(const VlmPriorRecord&, const VlmPriorRecord&) = default;
};

enum class Metric { anat, local, global };

std::string_view to_string(Metric metric);
std::optional<Metric> metric_from_string(std::string_view name);

struct CalibrationBounds {
  Metric metric = Metric::anat;
  double min_real = 0.0;
  double max_real = 1.0;
  std::string corpus_id;
  std::size_t sample_count = 0;

  friend bool operator==(const CalibrationBounds&, const CalibrationBounds&) = default;
};

struct ScoreReport {
  std::string video_id;
  std::string model_id;  ///< empty when the features were not grouped by model
  double s_prior = 0.0;
  double s_anat_raw = 0.0;
  double s_anat_norm = 0.0;
  double q_anat = 0.0;
  double s_local_raw = 0.0;
  double s_local_norm = 0.0;
  double s_global_raw = 0.0;
  double s_global_norm = 0.0;
  double s_mot = 0.0;
  double q_mot = 0.0;
  std::vector<std::string> flags;

  bool has_flag(std::string_view flag) const;
  void add_flag(std::string_view flag);

  friend bool operator==(const ScoreReport&, const ScoreReport&) = default;
};

enum class Category { bmo_simple, bmo_skill, hoi, hhi };

inline constexpr Category kAllCategories[] = {Category::bmo_simple, Category::bmo_skill,
                                             Category::hoi, Category::hhi};

/// Wire names: BMO_SIMPLE, BMO_SKILL, HOI, HHI.
std::string_view to_string(Category category);
std::optional<Category> category_from_string(std::string_view name);

struct HumanRatingRecord {
  std::string video_id;
  std::string model_id;
  Category category = Category::bmo_simple;
  double acs = 1.0;  ///< anatomical correctness, 5-point scale
  double mss = 1.0;  ///< motion smoothness, 5-point scale
};

/// Everything known about one video: any of the three modalities may be absent.
struct VideoFeatures {
  std::string video_id;
  std::string model_id;
  std::optional<KeypointStream> keypoints;
  std::vector<MotionTrack> tracks;  ///< one per person
  std::optional<VlmPriorRecord> prior;
};

// Diagnostic flags carried on ScoreReport.
namespace flags {
inline constexpr std::string_view kNoPersonVisible = "no-person-visible";
inline constexpr std::string_view kNoPersonDetected = "no-person-detected";
inline constexpr std::string_view kShortSequence = "short-sequence";
inline constexpr std::string_view kNoPrior = "no-prior";
inline constexpr std::string_view kNoKeypoints = "no-keypoints";
inline constexpr std::string_view kNoMotion = "no-motion";
}  // namespace flags

}  // namespace humeval
