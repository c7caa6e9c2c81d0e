#include "humeval/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "humeval/anatomical.hpp"
#include "humeval/error.hpp"

namespace humeval {

namespace {

constexpr std::uint64_t kTrackStream = 0x747261636b000001ULL;
constexpr std::uint64_t kJitterStream = 0x6a69747465720002ULL;
constexpr std::uint64_t kKeypointStream = 0x6b70747300000003ULL;

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kDegToRad = std::numbers::pi / 180.0;

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

SeededRng::SeededRng(std::uint64_t seed, std::uint64_t stream) : engine_(splitmix64(seed ^ stream)) {}

std::uint64_t SeededRng::next() { return engine_(); }

double SeededRng::uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double SeededRng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

std::size_t SeededRng::index(std::size_t n) { return static_cast<std::size_t>(next() % n); }

MotionTrack gen_smooth_track(std::uint64_t seed, std::size_t frames, double fps, std::size_t joints,
                             const SmoothTrackParams& params) {
  if (frames < 8) throw Error(ErrorKind::input, "smooth track needs at least 8 frames");
  if (!(fps > 0.0) || joints == 0) throw Error(ErrorKind::input, "smooth track needs fps > 0 and joints > 0");
  if (!(params.amplitude_rad >= 0.0)) throw Error(ErrorKind::input, "amplitude must be >= 0");
  if (!(params.min_period_s >= 0.5) || !(params.max_period_s >= params.min_period_s)) {
    throw Error(ErrorKind::input, "sinusoid periods must satisfy 0.5 <= min <= max");
  }
  if (params.max_components < 1 || params.max_components > 3) {
    throw Error(ErrorKind::input, "max_components must be 1..3");
  }
  if (!(params.max_yaw_rate_deg_s >= 0.0 && params.max_yaw_rate_deg_s <= 30.0)) {
    throw Error(ErrorKind::input, "yaw rate must lie in [0, 30] deg/s");
  }

  SeededRng rng(seed, kTrackStream);
  const double yaw0 = rng.uniform(0.0, kTwoPi);
  const double yaw_rate = rng.uniform(-params.max_yaw_rate_deg_s, params.max_yaw_rate_deg_s) * kDegToRad;

  struct Wave {
    double amplitude, omega, phase;  // omega in rad/frame
  };
  std::vector<double> offsets(3 * joints);
  std::vector<std::vector<Wave>> waves(3 * joints);
  for (std::size_t c = 0; c < 3 * joints; ++c) {
    offsets[c] = rng.uniform(-0.3, 0.3);
    const std::size_t count = 1 + rng.index(params.max_components);
    for (std::size_t k = 0; k < count; ++k) {
      const double amp = params.amplitude_rad * rng.uniform(0.3, 1.0);
      const double period = rng.uniform(params.min_period_s, params.max_period_s);
      const double phase = rng.uniform(0.0, kTwoPi);
      waves[c].push_back({amp, kTwoPi / (period * fps), phase});
    }
  }

  MotionTrack track;
  track.video_id = params.video_id;
  track.person_id = params.person_id;
  track.fps = fps;
  track.frames.resize(frames);
  for (std::size_t t = 0; t < frames; ++t) {
    MotionFrame& f = track.frames[t];
    const double time = static_cast<double>(t);
    f.root_rotation = Quaternion::from_axis_angle({0.0, 1.0, 0.0}, yaw0 + yaw_rate * time / fps);
    f.joint_angles.resize(joints);
    for (std::size_t j = 0; j < joints; ++j) {
      double v[3];
      for (std::size_t k = 0; k < 3; ++k) {
        const std::size_t c = 3 * j + k;
        v[k] = offsets[c];
        for (const Wave& w : waves[c]) v[k] += w.amplitude * std::sin(w.omega * time + w.phase);
      }
      f.joint_angles[j] = {v[0], v[1], v[2]};
    }
  }
  return track;
}

MotionTrack inject_jitter(const MotionTrack& track, double amplitude_rad, std::uint64_t seed) {
  if (!(amplitude_rad >= 0.0)) throw Error(ErrorKind::input, "jitter amplitude must be >= 0");
  MotionTrack out = track;
  if (amplitude_rad == 0.0) return out;

  SeededRng rng(seed, kJitterStream);
  for (MotionFrame& f : out.frames) {
    for (Vec3& a : f.joint_angles) {
      a.x += rng.uniform(-amplitude_rad, amplitude_rad);
      a.y += rng.uniform(-amplitude_rad, amplitude_rad);
      a.z += rng.uniform(-amplitude_rad, amplitude_rad);
    }
  }
  return out;
}

MotionTrack inject_flip(const MotionTrack& track, std::size_t frame_k, double angle_deg, Vec3 axis) {
  if (frame_k >= track.frames.size()) throw Error(ErrorKind::input, "flip frame is past the end of the track");
  if (!std::isfinite(angle_deg)) throw Error(ErrorKind::input, "flip angle must be finite");
  if (norm(axis) == 0.0) throw Error(ErrorKind::input, "flip axis must be non-zero");
  MotionTrack out = track;
  if (angle_deg == 0.0) return out;

  const Quaternion flip = Quaternion::from_axis_angle(axis, angle_deg * kDegToRad);
  for (std::size_t t = frame_k; t < out.frames.size(); ++t) {
    out.frames[t].root_rotation = flip * out.frames[t].root_rotation;
  }
  return out;
}

KeypointStream gen_keypoint_stream(std::uint64_t seed, std::size_t frames, std::size_t persons,
                                   double base_confidence, const std::optional<PartDegrade>& degrade,
                                   const KeypointStreamParams& params) {
  if (frames == 0) throw Error(ErrorKind::input, "keypoint stream needs at least one frame");
  if (!(base_confidence >= 0.0 && base_confidence <= 1.0)) {
    throw Error(ErrorKind::input, "base confidence must lie in [0, 1]");
  }
  if (!(params.fps > 0.0)) throw Error(ErrorKind::input, "fps must be > 0");
  const PartRange* degraded = nullptr;
  if (degrade) {
    degraded = PartGrouping::whole_body().find(degrade->part);
    if (!degraded) throw Error(ErrorKind::input, "unknown body part '" + degrade->part + "'");
    if (!(degrade->confidence >= 0.0 && degrade->confidence <= 1.0)) {
      throw Error(ErrorKind::input, "degraded confidence must lie in [0, 1]");
    }
  }

  SeededRng rng(seed, kKeypointStream);
  struct Layout {
    double cx, cy, vx, vy;
    std::vector<Vec3> offsets;  // z unused
  };
  std::vector<Layout> layouts(persons);
  for (Layout& l : layouts) {
    l.cx = rng.uniform(0.2, 0.8) * params.width;
    l.cy = rng.uniform(0.3, 0.7) * params.height;
    l.vx = rng.uniform(-2.0, 2.0);
    l.vy = rng.uniform(-1.0, 1.0);
    l.offsets.resize(kWholeBodyKeypointCount);
    for (Vec3& o : l.offsets) o = {rng.uniform(-80.0, 80.0), rng.uniform(-160.0, 160.0), 0.0};
  }

  KeypointStream stream;
  stream.video_id = params.video_id;
  stream.fps = params.fps;
  stream.frames.resize(frames);
  for (std::size_t t = 0; t < frames; ++t) {
    KeypointFrame& frame = stream.frames[t];
    frame.frame_index = t;
    frame.persons.resize(persons);
    for (std::size_t p = 0; p < persons; ++p) {
      const Layout& l = layouts[p];
      auto& kps = frame.persons[p].keypoints;
      kps.resize(kWholeBodyKeypointCount);
      for (std::size_t i = 0; i < kWholeBodyKeypointCount; ++i) {
        const bool in_degraded = degraded && i >= degraded->begin && i < degraded->end;
        double conf = in_degraded ? degrade->confidence : base_confidence;
        if (params.confidence_noise > 0.0) {
          conf = std::clamp(conf + rng.uniform(-params.confidence_noise, params.confidence_noise), 0.0, 1.0);
        }
        const double time = static_cast<double>(t);
        kps[i] = {l.cx + l.vx * time + l.offsets[i].x, l.cy + l.vy * time + l.offsets[i].y, conf};
      }
    }
  }
  return stream;
}

VlmPriorRecord make_prior_record(std::string video_id, double prior) {
  if (!(prior > 0.0 && prior < 1.0)) throw Error(ErrorKind::input, "prior must lie in (0, 1)");
  return {std::move(video_id), std::log(prior / (1.0 - prior)), 0.0};
}

}  // namespace humeval
