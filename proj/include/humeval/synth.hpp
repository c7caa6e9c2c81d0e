#pragma once

// Seeded synthetic feature generators with controlled artifacts.
//
// Randomness: every generator owns a std::mt19937_64 (whose output sequence is
// fixed by the C++ standard) seeded with splitmix64(seed ^ stream_salt), and
// converts raw 64-bit draws to doubles as (draw >> 11) * 2^-53. No standard
// library distributions are used, so values reproduce across toolchains.

#include <cstdint>
#include <optional>
#include <random>
#include <string>

#include "humeval/geometry.hpp"
#include "humeval/types.hpp"

namespace humeval {

std::uint64_t splitmix64(std::uint64_t x);

class SeededRng {
 public:
  SeededRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next();
  double uniform01();                     ///< [0, 1)
  double uniform(double lo, double hi);   ///< [lo, hi)
  std::size_t index(std::size_t n);       ///< [0, n)

 private:
  std::mt19937_64 engine_;
};

struct SmoothTrackParams {
  std::string video_id = "synth";
  std::string person_id = "p0";
  double amplitude_rad = 0.15;      ///< per-sinusoid amplitude upper bound
  double min_period_s = 1.5;        ///< must be >= 0.5
  double max_period_s = 4.0;
  std::size_t max_components = 3;   ///< sinusoids per angle, 1..3
  double max_yaw_rate_deg_s = 20.0; ///< must be <= 30
};

/// Joint angles are sums of slow sinusoids; the root turns at a constant yaw
/// rate about the world up axis. Requires frames >= 8.
MotionTrack gen_smooth_track(std::uint64_t seed, std::size_t frames, double fps, std::size_t joints,
                             const SmoothTrackParams& params = {});

/// Adds i.i.d. uniform noise in [-amplitude, amplitude] to every joint-angle
/// component. amplitude == 0 returns the track unchanged.
MotionTrack inject_jitter(const MotionTrack& track, double amplitude_rad, std::uint64_t seed);

/// Pre-multiplies a world-frame rotation of `angle_deg` about `axis` onto the
/// root rotation of every frame >= frame_k. angle 0 returns the track unchanged.
MotionTrack inject_flip(const MotionTrack& track, std::size_t frame_k, double angle_deg, Vec3 axis);

struct PartDegrade {
  std::string part;  ///< a PartGrouping::whole_body() part name
  double confidence = 0.0;
};

struct KeypointStreamParams {
  std::string video_id = "synth";
  double fps = 30.0;
  double confidence_noise = 0.0;  ///< uniform +- noise, clamped to [0, 1]
  double width = 1280.0;
  double height = 720.0;
};

/// Every confidence is `base_confidence` except the degraded part's keypoints.
KeypointStream gen_keypoint_stream(std::uint64_t seed, std::size_t frames, std::size_t persons,
                                   double base_confidence, const std::optional<PartDegrade>& degrade = std::nullopt,
                                   const KeypointStreamParams& params = {});

/// Logit pair (logit(prior), 0), which scores exactly to `prior` up to rounding.
VlmPriorRecord make_prior_record(std::string video_id, double prior);

}  // namespace humeval
