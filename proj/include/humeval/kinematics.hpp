#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "humeval/calibration.hpp"
#include "humeval/geometry.hpp"
#include "humeval/types.hpp"

namespace humeval {

/// Dense row-major matrix; rows are time samples.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct KinConfig {
  double gaussian_sigma_frames = 2.0;
  double gaussian_truncate = 3.0;    ///< kernel half-width = ceil(truncate * sigma)
  double phi_lambda_local = 100.0;   ///< rad/s^3
  double phi_lambda_global = 0.5;    ///< dimensionless
  double heading_epsilon = 1e-6;
  Vec3 world_up{0.0, 1.0, 0.0};
  Vec3 forward_axis{0.0, 0.0, 1.0};

  void validate() const;
};

/// Perceptual map phi(x) = 1 / (1 + x / lambda); strictly decreasing, phi(0) = 1.
double stability_map(double deviation, double lambda);

/// Forward third difference of the flattened joint angles, scaled by fps^3.
/// Row t holds the jerk at frame t, t = 0 .. T-4. Requires T >= 4.
Matrix joint_jerk(const MotionTrack& track);

/// Normalized Gaussian taps, length 2 * ceil(truncate * sigma) + 1.
std::vector<double> gaussian_kernel(double sigma, double truncate);

/// Per-column Gaussian convolution with half-sample symmetric reflection at
/// both ends (d c b a | a b c d | d c b a).
Matrix gaussian_smooth(const Matrix& signal, const KinConfig& cfg);

struct LocalStability {
  double deviation = 0.0;  ///< mean L2 norm of jerk minus its smoothed trend
  double score = 1.0;      ///< raw S_local = phi(deviation)
};

LocalStability local_stability(const MotionTrack& track, const KinConfig& cfg);

struct Orientation {
  Vec3 up;
  Vec3 heading;
};

/// Body up axis and horizontal heading per frame. When the heading is
/// degenerate (body forward axis parallel to world up) the previous heading is
/// carried forward; on the first frame the horizontal projection of the
/// forward axis is used.
std::vector<Orientation> orientation_vectors(const MotionTrack& track, const KinConfig& cfg);

struct PairDeviation {
  double up = 0.0;       ///< 1 - up_t . up_{t+1}, in [0, 2]
  double heading = 0.0;  ///< 1 - head_t . head_{t+1}, in [0, 2]
};

std::vector<PairDeviation> orientation_deviations(const MotionTrack& track, const KinConfig& cfg);

struct GlobalConsistency {
  double deviation = 0.0;  ///< D: worst adjacent-pair deviation, in [0, 2]
  double score = 1.0;      ///< raw S_global = phi(D)
  std::size_t worst_pair = 0;
};

GlobalConsistency global_consistency(const MotionTrack& track, const KinConfig& cfg);

/// Normalized local * normalized global; arguments must lie in [0, 1].
double s_mot(double local_norm, double global_norm);
/// S_Prior * S_Mot; arguments must lie in [0, 1].
double q_mot(double s_prior, double s_mot);

struct TrackScore {
  std::string person_id;
  bool scored = false;  ///< false for tracks shorter than 4 frames
  double local_raw = 0.0;
  double local_norm = 0.0;
  double global_raw = 0.0;
  double global_norm = 0.0;
  double s_mot = 0.0;
};

struct MotionScores {
  double s_local_raw = 0.0;    ///< mean over scored tracks
  double s_local_norm = 0.0;   ///< mean over scored tracks
  double s_global_raw = 0.0;   ///< mean over scored tracks
  double s_global_norm = 0.0;  ///< mean over scored tracks
  double s_mot = 0.0;          ///< mean over all tracks; short tracks count as 0
  std::vector<TrackScore> tracks;
  std::vector<std::string> flags;
};

/// Scores every person track of one video against the local/global bounds.
MotionScores score_motion(std::span<const MotionTrack> tracks, const KinConfig& cfg,
                          const CalibrationSet& calibration);

}  // namespace humeval
