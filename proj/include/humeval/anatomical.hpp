#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "humeval/types.hpp"

namespace humeval {

struct PartRange {
  std::string name;
  std::size_t begin = 0;  ///< first keypoint index
  std::size_t end = 0;    ///< one past the last keypoint index
};

/// Named keypoint ranges. Construction checks that the ranges are disjoint,
/// non-empty and cover exactly [0, kWholeBodyKeypointCount).
class PartGrouping {
 public:
  explicit PartGrouping(std::vector<PartRange> parts);

  /// body [0,17), feet [17,23), face [23,91), left_hand [91,112), right_hand [112,133).
  static const PartGrouping& whole_body();

  const std::vector<PartRange>& parts() const { return parts_; }
  const PartRange* find(std::string_view name) const;

 private:
  std::vector<PartRange> parts_;
};

struct AnatConfig {
  double tau = 0.3;  ///< a part is visible iff its mean confidence is strictly greater

  void validate() const;
};

/// Mean confidence over all keypoints of the visible parts, or nullopt when no
/// part of this person is visible.
std::optional<double> person_anat_score(const PersonKeypoints& person, const PartGrouping& grouping,
                                        const AnatConfig& cfg);

struct FrameAnatScore {
  double score = 0.0;
  std::size_t visible_persons = 0;  ///< 0 means the frame scored 0 ("no-person-visible")
};

/// Average of person scores over persons with at least one visible part.
FrameAnatScore frame_anat_score(const KeypointFrame& frame, const PartGrouping& grouping, const AnatConfig& cfg);

struct AnatResult {
  double score = 0.0;  ///< raw S_Anat
  std::size_t frames_without_person = 0;
  std::vector<std::string> flags;
};

/// Unweighted mean of frame scores; frames with nobody visible contribute 0.
AnatResult video_anat_score(const KeypointStream& stream, const PartGrouping& grouping, const AnatConfig& cfg);

/// S_Prior * normalized S_Anat. Both arguments must lie in [0, 1].
double q_anat(double s_prior, double s_anat_norm);

}  // namespace humeval
