#include "humeval/kinematics.hpp"

#include <algorithm>
#include <cmath>

#include "humeval/error.hpp"

namespace humeval {

namespace {

constexpr std::size_t kMinJerkFrames = 4;

void require_unit_interval(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) throw Error(ErrorKind::input, std::string(what) + " must lie in [0, 1]");
}

// Half-sample symmetric reflection of an arbitrary index into [0, n).
std::size_t reflect_index(std::ptrdiff_t i, std::size_t n) {
  const auto period = static_cast<std::ptrdiff_t>(2 * n);
  std::ptrdiff_t m = i % period;
  if (m < 0) m += period;
  if (m >= static_cast<std::ptrdiff_t>(n)) m = period - 1 - m;
  return static_cast<std::size_t>(m);
}

Vec3 horizontal(Vec3 v, Vec3 up) { return v - dot(v, up) * up; }

double pair_term(Vec3 a, Vec3 b) { return std::clamp(1.0 - dot(a, b), 0.0, 2.0); }

}  // namespace

void KinConfig::validate() const {
  if (!(gaussian_sigma_frames > 0.0)) throw Error(ErrorKind::input, "gaussian sigma must be > 0");
  if (!(gaussian_truncate > 0.0)) throw Error(ErrorKind::input, "gaussian truncate must be > 0");
  if (!(phi_lambda_local > 0.0)) throw Error(ErrorKind::input, "lambda_local must be > 0");
  if (!(phi_lambda_global > 0.0)) throw Error(ErrorKind::input, "lambda_global must be > 0");
  if (!(heading_epsilon > 0.0)) throw Error(ErrorKind::input, "heading epsilon must be > 0");
  if (std::abs(norm(world_up) - 1.0) > 1e-9 || std::abs(norm(forward_axis) - 1.0) > 1e-9) {
    throw Error(ErrorKind::input, "world_up and forward_axis must be unit vectors");
  }
  if (norm(cross(world_up, forward_axis)) < 1e-6) {
    throw Error(ErrorKind::input, "world_up and forward_axis must not be parallel");
  }
}

double stability_map(double deviation, double lambda) { return 1.0 / (1.0 + deviation / lambda); }

Matrix joint_jerk(const MotionTrack& track) {
  const std::size_t frames = track.frames.size();
  if (frames < kMinJerkFrames) {
    throw Error(ErrorKind::sequence_too_short,
                "sequence too short: jerk needs at least 4 frames, got " + std::to_string(frames));
  }
  const std::size_t joints = track.joint_count();
  const double fps3 = track.fps * track.fps * track.fps;

  Matrix jerk(frames - 3, 3 * joints);
  for (std::size_t t = 0; t + 3 < frames; ++t) {
    const auto& a0 = track.frames[t].joint_angles;
    const auto& a1 = track.frames[t + 1].joint_angles;
    const auto& a2 = track.frames[t + 2].joint_angles;
    const auto& a3 = track.frames[t + 3].joint_angles;
    for (std::size_t j = 0; j < joints; ++j) {
      const double c0[3] = {a0[j].x, a0[j].y, a0[j].z};
      const double c1[3] = {a1[j].x, a1[j].y, a1[j].z};
      const double c2[3] = {a2[j].x, a2[j].y, a2[j].z};
      const double c3[3] = {a3[j].x, a3[j].y, a3[j].z};
      for (std::size_t k = 0; k < 3; ++k) {
        jerk(t, 3 * j + k) = ((c3[k] - c0[k]) - 3.0 * (c2[k] - c1[k])) * fps3;
      }
    }
  }
  return jerk;
}

std::vector<double> gaussian_kernel(double sigma, double truncate) {
  if (!(sigma > 0.0) || !(truncate > 0.0)) throw Error(ErrorKind::input, "gaussian sigma and truncate must be > 0");
  const auto radius = static_cast<std::ptrdiff_t>(std::ceil(truncate * sigma));
  std::vector<double> taps(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (std::ptrdiff_t k = -radius; k <= radius; ++k) {
    const double u = static_cast<double>(k) / sigma;
    const double w = std::exp(-0.5 * u * u);
    taps[static_cast<std::size_t>(k + radius)] = w;
    sum += w;
  }
  for (double& w : taps) w /= sum;
  return taps;
}

Matrix gaussian_smooth(const Matrix& signal, const KinConfig& cfg) {
  const std::vector<double> taps = gaussian_kernel(cfg.gaussian_sigma_frames, cfg.gaussian_truncate);
  const auto radius = static_cast<std::ptrdiff_t>(taps.size() / 2);
  const std::size_t n = signal.rows();

  Matrix out(n, signal.cols());
  for (std::size_t t = 0; t < n; ++t) {
    auto dst = out.row(t);
    for (std::ptrdiff_t k = -radius; k <= radius; ++k) {
      const double w = taps[static_cast<std::size_t>(k + radius)];
      const auto src = signal.row(reflect_index(static_cast<std::ptrdiff_t>(t) + k, n));
      for (std::size_t c = 0; c < dst.size(); ++c) dst[c] += w * src[c];
    }
  }
  return out;
}

LocalStability local_stability(const MotionTrack& track, const KinConfig& cfg) {
  const Matrix jerk = joint_jerk(track);
  const Matrix trend = gaussian_smooth(jerk, cfg);

  double total = 0.0;
  for (std::size_t t = 0; t < jerk.rows(); ++t) {
    const auto raw = jerk.row(t);
    const auto smooth = trend.row(t);
    double sq = 0.0;
    for (std::size_t c = 0; c < raw.size(); ++c) {
      const double r = raw[c] - smooth[c];
      sq += r * r;
    }
    total += std::sqrt(sq);
  }
  LocalStability result;
  result.deviation = total / static_cast<double>(jerk.rows());
  result.score = stability_map(result.deviation, cfg.phi_lambda_local);
  return result;
}

std::vector<Orientation> orientation_vectors(const MotionTrack& track, const KinConfig& cfg) {
  std::vector<Orientation> out;
  out.reserve(track.frames.size());

  Vec3 fallback = horizontal(cfg.forward_axis, cfg.world_up);
  fallback = (1.0 / norm(fallback)) * fallback;

  for (const MotionFrame& frame : track.frames) {
    const Quaternion q = frame.root_rotation.normalized();
    Orientation o;
    o.up = q.rotate(cfg.world_up);
    const Vec3 h = horizontal(q.rotate(cfg.forward_axis), cfg.world_up);
    const double len = norm(h);
    if (len < cfg.heading_epsilon) {
      o.heading = out.empty() ? fallback : out.back().heading;
    } else {
      o.heading = (1.0 / len) * h;
    }
    out.push_back(o);
  }
  return out;
}

std::vector<PairDeviation> orientation_deviations(const MotionTrack& track, const KinConfig& cfg) {
  const auto orient = orientation_vectors(track, cfg);
  std::vector<PairDeviation> out;
  for (std::size_t t = 0; t + 1 < orient.size(); ++t) {
    out.push_back({pair_term(orient[t].up, orient[t + 1].up),
                   pair_term(orient[t].heading, orient[t + 1].heading)});
  }
  return out;
}

GlobalConsistency global_consistency(const MotionTrack& track, const KinConfig& cfg) {
  if (track.frames.size() < 2) {
    throw Error(ErrorKind::sequence_too_short,
                "sequence too short: orientation consistency needs at least 2 frames");
  }
  GlobalConsistency result;
  const auto pairs = orientation_deviations(track, cfg);
  for (std::size_t t = 0; t < pairs.size(); ++t) {
    const double d = std::max(pairs[t].up, pairs[t].heading);
    if (d > result.deviation) {
      result.deviation = d;
      result.worst_pair = t;
    }
  }
  result.score = stability_map(result.deviation, cfg.phi_lambda_global);
  return result;
}

double s_mot(double local_norm, double global_norm) {
  require_unit_interval(local_norm, "normalized local stability");
  require_unit_interval(global_norm, "normalized global consistency");
  return local_norm * global_norm;
}

double q_mot(double s_prior, double s_mot_value) {
  require_unit_interval(s_prior, "prior score");
  require_unit_interval(s_mot_value, "motion stability score");
  return s_prior * s_mot_value;
}

MotionScores score_motion(std::span<const MotionTrack> tracks, const KinConfig& cfg,
                          const CalibrationSet& calibration) {
  cfg.validate();
  MotionScores out;
  if (tracks.empty()) {
    out.flags.emplace_back(flags::kNoMotion);
    return out;
  }

  std::size_t scored = 0;
  double mot_sum = 0.0;
  for (const MotionTrack& track : tracks) {
    TrackScore ts;
    ts.person_id = track.person_id;
    if (track.frames.size() >= kMinJerkFrames) {
      ts.scored = true;
      ts.local_raw = local_stability(track, cfg).score;
      ts.global_raw = global_consistency(track, cfg).score;
      ts.local_norm = normalize(ts.local_raw, calibration.local);
      ts.global_norm = normalize(ts.global_raw, calibration.global);
      ts.s_mot = s_mot(ts.local_norm, ts.global_norm);

      ++scored;
      out.s_local_raw += ts.local_raw;
      out.s_local_norm += ts.local_norm;
      out.s_global_raw += ts.global_raw;
      out.s_global_norm += ts.global_norm;
    } else if (out.flags.empty()) {
      out.flags.emplace_back(flags::kShortSequence);
    }
    mot_sum += ts.s_mot;
    out.tracks.push_back(std::move(ts));
  }

  if (scored > 0) {
    const auto n = static_cast<double>(scored);
    out.s_local_raw /= n;
    out.s_local_norm /= n;
    out.s_global_raw /= n;
    out.s_global_norm /= n;
  }
  out.s_mot = mot_sum / static_cast<double>(tracks.size());
  return out;
}

}  // namespace humeval
