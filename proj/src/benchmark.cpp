#include "humeval/benchmark.hpp"

#include <algorithm>
#include <cmath>

#include "humeval/engine.hpp"
#include "humeval/error.hpp"
#include "humeval/feature_io.hpp"
#include "humeval/synth.hpp"

namespace humeval {

namespace {

constexpr std::uint64_t kLatentStream = 0x6c6174656e740004ULL;
constexpr double kBaseConfidence = 0.9;
constexpr double kDamagedFloor = 0.35;  // stays above the default visibility threshold

struct Latent {
  double prior = 0.5;
  double jitter = 0.0;
  double jump_deg = 0.0;  // mid-video root rotation about the forward axis
  double damage = 0.0;
  double base_confidence = kBaseConfidence;
  Category category = Category::bmo_simple;
};

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(seed ^ (a * 0x100000001b3ULL)) ^ b);
}

VideoFeatures make_video(std::uint64_t seed, const std::string& video_id, const std::string& model_id,
                         const Latent& z, const BenchmarkOptions& opt, bool with_prior) {
  VideoFeatures v;
  v.video_id = video_id;
  v.model_id = model_id;
  const std::size_t persons = z.category == Category::hhi ? 2 : 1;

  for (std::size_t p = 0; p < persons; ++p) {
    SmoothTrackParams params;
    params.video_id = video_id;
    params.person_id = "p" + std::to_string(p);
    MotionTrack track = gen_smooth_track(derive_seed(seed, 1, p), opt.motion_frames, opt.fps, opt.joints, params);
    track = inject_jitter(track, z.jitter, derive_seed(seed, 2, p));
    if (z.jump_deg > 0.0) track = inject_flip(track, opt.motion_frames / 2, z.jump_deg, {0.0, 0.0, 1.0});
    v.tracks.push_back(std::move(track));
  }

  std::optional<PartDegrade> degrade;
  if (z.damage > 0.0) degrade = PartDegrade{"body", z.base_confidence - z.damage * (z.base_confidence - kDamagedFloor)};
  KeypointStreamParams kp;
  kp.video_id = video_id;
  kp.fps = opt.fps;
  kp.confidence_noise = 0.03;
  v.keypoints = gen_keypoint_stream(derive_seed(seed, 3, 0), opt.keypoint_frames, persons, z.base_confidence,
                                    degrade, kp);

  if (with_prior) v.prior = make_prior_record(video_id, z.prior);
  return v;
}

// Mean of seven integer-valued annotator scores, so ties are common.
double likert(double quality01) { return 1.0 + std::round(4.0 * std::clamp(quality01, 0.0, 1.0) * 7.0) / 7.0; }

HumanRatingRecord rate(const std::string& video_id, const std::string& model_id, const Latent& z,
                       const BenchmarkOptions& opt, SeededRng& rng) {
  double motion_quality = 1.0 - std::min(z.jitter / opt.rating_jitter_scale, 1.0);
  motion_quality *= 1.0 - 0.7 * z.jump_deg / 180.0;
  const double anat_quality = 1.0 - z.damage;
  HumanRatingRecord r;
  r.video_id = video_id;
  r.model_id = model_id;
  r.category = z.category;
  const double w = opt.rating_prior_weight;
  r.acs = likert(w * z.prior + (1.0 - w) * anat_quality + rng.uniform(-opt.rating_noise, opt.rating_noise));
  r.mss = likert(w * z.prior + (1.0 - w) * motion_quality + rng.uniform(-opt.rating_noise, opt.rating_noise));
  return r;
}

std::string numbered(const std::string& prefix, std::size_t i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%03zu", i);
  return prefix + buf;
}

}  // namespace

std::vector<ModelProfile> default_model_profiles() {
  return {
      {"synth_good", 0.85, 0.0005, 0.0, 0.05},
      {"synth_fair", 0.70, 0.004, 0.1, 0.3},
      {"synth_bad", 0.55, 0.03, 1.0, 0.7},
  };
}

SyntheticBenchmark make_benchmark(const BenchmarkOptions& opt) {
  if (opt.models.empty()) throw Error(ErrorKind::input, "benchmark needs at least one model");
  SyntheticBenchmark bench;
  SeededRng rng(opt.seed, kLatentStream);

  for (std::size_t i = 0; i < opt.calibration_videos; ++i) {
    Latent z;
    z.jitter = rng.uniform(0.0, opt.calibration_jitter_max);
    z.damage = rng.uniform(0.0, opt.calibration_damage_max);
    z.jump_deg = rng.uniform(0.0, opt.calibration_jump_max_deg);
    z.base_confidence = rng.uniform(0.82, 0.95);
    bench.calibration.push_back(
        make_video(derive_seed(opt.seed, 100, i), numbered("real_", i), "", z, opt, false));
  }

  for (std::size_t m = 0; m < opt.models.size(); ++m) {
    const ModelProfile& profile = opt.models[m];
    for (std::size_t i = 0; i < opt.videos_per_model; ++i) {
      Latent z;
      if (opt.continuous) {
        z.prior = rng.uniform(0.1, 0.9);
        z.jitter = rng.uniform(0.0, opt.continuous_jitter_max);
        z.damage = rng.uniform(0.0, 1.0);
        z.jump_deg = rng.uniform(0.0, opt.continuous_jump_max_deg);
      } else {
        z.prior = std::clamp(profile.prior_center + rng.uniform(-0.12, 0.12), 0.02, 0.98);
        z.jitter = profile.jitter_rad * rng.uniform(0.5, 1.5);
        z.jump_deg = rng.uniform01() < profile.flip_probability ? 180.0 : 0.0;
        z.damage = std::clamp(profile.anat_damage * rng.uniform(0.5, 1.5), 0.0, 1.0);
      }
      z.category = kAllCategories[i % std::size(kAllCategories)];
      const std::string id = profile.model_id + "_" + numbered("v", i);
      bench.videos.push_back(make_video(derive_seed(opt.seed, 200 + m, i), id, profile.model_id, z, opt, true));
      bench.ratings.push_back(rate(id, profile.model_id, z, opt, rng));
    }
  }
  return bench;
}

BenchmarkOptions ablation_options(std::uint64_t seed, std::size_t videos) {
  BenchmarkOptions opt;
  opt.seed = seed;
  opt.models = {{"synth_mix", 0.5, 0.0, 0.0, 0.0}};
  opt.videos_per_model = videos;
  opt.calibration_videos = 12;
  opt.continuous = true;
  opt.continuous_jitter_max = 0.003;
  opt.calibration_jitter_max = 0.003;
  opt.calibration_damage_max = 1.0;
  opt.calibration_jump_max_deg = opt.continuous_jump_max_deg;
  opt.rating_jitter_scale = 0.003;
  return opt;
}

void write_benchmark(const std::filesystem::path& root, const SyntheticBenchmark& bench) {
  for (const VideoFeatures& v : bench.calibration) write_features(root / "calibration", v);
  for (const VideoFeatures& v : bench.videos) write_features(root / "features", v);
  write_file(root / "ratings.csv", serialize_ratings(bench.ratings));
}

}  // namespace humeval
