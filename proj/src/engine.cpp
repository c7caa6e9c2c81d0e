#include "humeval/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

#include "humeval/error.hpp"
#include "humeval/feature_io.hpp"
#include "humeval/prior.hpp"
#include "humeval/report.hpp"

namespace humeval {

namespace fs = std::filesystem;

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double setting_real(std::string_view key, std::string_view value) {
  const std::string text(value);
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || !std::isfinite(v)) {
    throw Error(ErrorKind::input, "setting '" + std::string(key) + "' expects a number, got '" + text + "'");
  }
  return v;
}

Vec3 setting_vec3(std::string_view key, std::string_view value) {
  std::string text = trim(value);
  if (text.size() < 2 || text.front() != '[' || text.back() != ']') {
    throw Error(ErrorKind::input, "setting '" + std::string(key) + "' expects [x, y, z]");
  }
  text = text.substr(1, text.size() - 2);
  double v[3];
  std::size_t start = 0;
  for (int i = 0; i < 3; ++i) {
    const std::size_t comma = text.find(',', start);
    if ((i < 2) != (comma != std::string::npos)) {
      throw Error(ErrorKind::input, "setting '" + std::string(key) + "' expects exactly three components");
    }
    v[i] = setting_real(key, trim(std::string_view(text).substr(start, comma - start)));
    start = comma + 1;
  }
  return {v[0], v[1], v[2]};
}

bool has_suffix(const std::string& name, std::string_view suffix) {
  return name.size() > suffix.size() && name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string safe_name(std::string_view id) {
  std::string out(id);
  for (char& c : out) {
    if (c == '/' || c == '\\') c = '_';
  }
  return out;
}

}  // namespace

void EngineConfig::validate() const {
  anat.validate();
  kin.validate();
  if (percentile && !(*percentile >= 0.0 && *percentile < 50.0)) {
    throw Error(ErrorKind::input, "percentile must lie in [0, 50)");
  }
}

void apply_setting(EngineConfig& cfg, std::string_view key, std::string_view value) {
  if (key == "tau") {
    cfg.anat.tau = setting_real(key, value);
  } else if (key == "sigma") {
    cfg.kin.gaussian_sigma_frames = setting_real(key, value);
  } else if (key == "truncate") {
    cfg.kin.gaussian_truncate = setting_real(key, value);
  } else if (key == "lambda_local") {
    cfg.kin.phi_lambda_local = setting_real(key, value);
  } else if (key == "lambda_global") {
    cfg.kin.phi_lambda_global = setting_real(key, value);
  } else if (key == "heading_epsilon") {
    cfg.kin.heading_epsilon = setting_real(key, value);
  } else if (key == "world_up") {
    cfg.kin.world_up = setting_vec3(key, value);
  } else if (key == "forward_axis") {
    cfg.kin.forward_axis = setting_vec3(key, value);
  } else if (key == "percentile") {
    cfg.percentile = setting_real(key, value);
  } else if (key == "jobs") {
    const double jobs = setting_real(key, value);
    if (jobs < 0.0 || jobs != std::floor(jobs)) throw Error(ErrorKind::input, "jobs must be a non-negative integer");
    cfg.jobs = static_cast<unsigned>(jobs);
  } else {
    throw Error(ErrorKind::input, "unknown setting '" + std::string(key) + "'");
  }
}

EngineConfig parse_engine_config(std::string_view text) {
  EngineConfig cfg;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string line(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty() || line.front() == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::parse, "expected 'key = value'", line_no);
    try {
      apply_setting(cfg, trim(std::string_view(line).substr(0, eq)), trim(std::string_view(line).substr(eq + 1)));
    } catch (const Error& e) {
      throw Error(e.kind(), e.what(), line_no);
    }
    if (end == text.size()) break;
  }
  cfg.validate();
  return cfg;
}

EngineConfig load_engine_config(const fs::path& path) { return parse_engine_config(read_file(path)); }

RawScores raw_scores(const VideoFeatures& video, const EngineConfig& cfg) {
  RawScores raw;
  if (video.keypoints) raw.anat = video_anat_score(*video.keypoints, PartGrouping::whole_body(), cfg.anat).score;

  double local = 0.0;
  double global = 0.0;
  std::size_t scored = 0;
  for (const MotionTrack& track : video.tracks) {
    if (track.frames.size() < 4) continue;
    local += local_stability(track, cfg.kin).score;
    global += global_consistency(track, cfg.kin).score;
    ++scored;
  }
  if (scored > 0) {
    raw.local = local / static_cast<double>(scored);
    raw.global = global / static_cast<double>(scored);
  }
  return raw;
}

CalibrationSet fit_calibration(std::span<const VideoFeatures> corpus, const EngineConfig& cfg,
                               const std::string& corpus_id) {
  cfg.validate();
  std::vector<RawScores> raws(corpus.size());
  parallel_for(corpus.size(), cfg.jobs, [&](std::size_t i) { raws[i] = raw_scores(corpus[i], cfg); });

  std::vector<double> anat;
  std::vector<double> local;
  std::vector<double> global;
  for (const RawScores& r : raws) {
    if (r.anat) anat.push_back(*r.anat);
    if (r.local) local.push_back(*r.local);
    if (r.global) global.push_back(*r.global);
  }
  auto fit = [&](const std::vector<double>& values, Metric metric) {
    if (values.empty()) {
      throw Error(ErrorKind::degenerate_calibration,
                  "calibration corpus has no scorable videos for '" + std::string(to_string(metric)) + "'");
    }
    return fit_bounds(values, metric, corpus_id, cfg.percentile);
  };
  return {fit(anat, Metric::anat), fit(local, Metric::local), fit(global, Metric::global)};
}

ScoreReport score_video(const VideoFeatures& video, const CalibrationSet& calibration, const EngineConfig& cfg) {
  ScoreReport r;
  r.video_id = video.video_id;
  r.model_id = video.model_id;

  if (video.prior) {
    r.s_prior = prior_score(*video.prior);
  } else {
    r.s_prior = 1.0;
    r.add_flag(flags::kNoPrior);
  }

  if (video.keypoints) {
    const AnatResult anat = video_anat_score(*video.keypoints, PartGrouping::whole_body(), cfg.anat);
    r.s_anat_raw = anat.score;
    r.s_anat_norm = normalize(anat.score, calibration.anat);
    for (const auto& f : anat.flags) r.add_flag(f);
  } else {
    r.add_flag(flags::kNoKeypoints);
  }
  r.q_anat = q_anat(r.s_prior, r.s_anat_norm);

  const MotionScores motion = score_motion(video.tracks, cfg.kin, calibration);
  r.s_local_raw = motion.s_local_raw;
  r.s_local_norm = motion.s_local_norm;
  r.s_global_raw = motion.s_global_raw;
  r.s_global_norm = motion.s_global_norm;
  r.s_mot = motion.s_mot;
  for (const auto& f : motion.flags) r.add_flag(f);
  r.q_mot = q_mot(r.s_prior, r.s_mot);

  validate(r);
  return r;
}

void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  const auto workers = static_cast<unsigned>(std::min<std::size_t>(jobs, n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = n;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<ScoreReport> score_videos(std::span<const VideoFeatures> videos, const CalibrationSet& calibration,
                                      const EngineConfig& cfg) {
  cfg.validate();
  std::vector<ScoreReport> reports(videos.size());
  parallel_for(videos.size(), cfg.jobs, [&](std::size_t i) { reports[i] = score_video(videos[i], calibration, cfg); });
  return reports;
}

std::vector<FeatureFiles> scan_features(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw Error(ErrorKind::io, "'" + dir.string() + "' is not a directory");

  std::vector<fs::path> paths;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file()) paths.push_back(entry.path());
  }
  std::sort(paths.begin(), paths.end());

  std::map<std::string, FeatureFiles> by_video;
  for (const fs::path& path : paths) {
    const std::string name = path.filename().string();
    const bool kps = has_suffix(name, ".kps.ndjson");
    const bool mot = has_suffix(name, ".mot.ndjson");
    const bool vlm = has_suffix(name, ".vlm.json");
    if (!kps && !mot && !vlm) continue;

    std::string video_id;
    try {
      video_id = peek_video_id(path);
    } catch (const Error& e) {
      throw Error(e.kind(), path.string() + ": " + e.what());
    }
    const fs::path rel = fs::relative(path, dir);
    const std::string model_id = std::distance(rel.begin(), rel.end()) > 1 ? rel.begin()->string() : "";

    auto [it, inserted] = by_video.try_emplace(video_id);
    FeatureFiles& files = it->second;
    if (inserted) {
      files.video_id = video_id;
      files.model_id = model_id;
    } else if (files.model_id != model_id) {
      throw Error(ErrorKind::schema, "video '" + video_id + "' has feature files under two models");
    }
    if (kps) {
      if (files.keypoints) throw Error(ErrorKind::schema, "video '" + video_id + "' has two keypoint files");
      files.keypoints = path;
    } else if (vlm) {
      if (files.prior) throw Error(ErrorKind::schema, "video '" + video_id + "' has two prior files");
      files.prior = path;
    } else {
      files.motion.push_back(path);
    }
  }

  std::vector<FeatureFiles> out;
  out.reserve(by_video.size());
  for (auto& [id, files] : by_video) out.push_back(std::move(files));
  return out;
}

VideoFeatures load_features(const FeatureFiles& files) {
  auto parse = [](const fs::path& path, auto&& parser) {
    try {
      return parser(read_file(path));
    } catch (const Error& e) {
      throw Error(e.kind(), path.string() + ": " + e.what());
    }
  };
  VideoFeatures video;
  video.video_id = files.video_id;
  video.model_id = files.model_id;
  if (files.keypoints) video.keypoints = parse(*files.keypoints, [](const std::string& t) { return parse_keypoint_stream(t); });
  for (const fs::path& p : files.motion) {
    video.tracks.push_back(parse(p, [](const std::string& t) { return parse_motion_track(t); }));
  }
  if (files.prior) video.prior = parse(*files.prior, [](const std::string& t) { return parse_vlm_record(t); });
  return video;
}

void write_features(const fs::path& dir, const VideoFeatures& video) {
  const fs::path base = video.model_id.empty() ? dir : dir / safe_name(video.model_id);
  const std::string stem = safe_name(video.video_id);
  if (video.keypoints) write_file(base / (stem + ".kps.ndjson"), serialize_keypoint_stream(*video.keypoints));
  for (const MotionTrack& track : video.tracks) {
    write_file(base / (stem + "." + safe_name(track.person_id) + ".mot.ndjson"), serialize_motion_track(track));
  }
  if (video.prior) write_file(base / (stem + ".vlm.json"), serialize_vlm_record(*video.prior));
}

}  // namespace humeval
