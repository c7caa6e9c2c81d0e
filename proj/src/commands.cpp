#include "humeval/commands.hpp"

#include <algorithm>
#include <ostream>

#include "humeval/benchmark.hpp"
#include "humeval/error.hpp"
#include "humeval/feature_io.hpp"
#include "humeval/harness.hpp"
#include "humeval/report.hpp"
#include "humeval/synth.hpp"

namespace humeval {

namespace fs = std::filesystem;

namespace {

std::vector<VideoFeatures> load_all(const std::vector<FeatureFiles>& files, unsigned jobs) {
  std::vector<VideoFeatures> videos(files.size());
  parallel_for(files.size(), jobs, [&](std::size_t i) { videos[i] = load_features(files[i]); });
  return videos;
}

std::string corpus_name(const fs::path& dir) {
  fs::path p = dir;
  if (!p.has_filename()) p = p.parent_path();
  return p.filename().string();
}

}  // namespace

CalibrationSet cmd_calibrate(const fs::path& corpus_dir, const fs::path& out, const EngineConfig& cfg,
                             std::ostream& log) {
  cfg.validate();
  const auto files = scan_features(corpus_dir);
  if (files.empty()) throw Error(ErrorKind::input, "calibration corpus '" + corpus_dir.string() + "' is empty");

  const auto corpus = load_all(files, cfg.jobs);
  const CalibrationSet set = fit_calibration(corpus, cfg, corpus_name(corpus_dir));
  save_bounds(out, set);
  for (Metric m : {Metric::anat, Metric::local, Metric::global}) {
    const auto& b = set.get(m);
    log << to_string(m) << ": n=" << b.sample_count << " min=" << format_real(b.min_real)
        << " max=" << format_real(b.max_real) << '\n';
  }
  return set;
}

std::size_t cmd_score(const fs::path& features_dir, const fs::path& calibration, const fs::path& out,
                      const EngineConfig& cfg, std::ostream& log) {
  cfg.validate();
  if (!fs::exists(calibration)) throw Error(ErrorKind::io, "calibration file '" + calibration.string() + "' not found");
  const CalibrationSet bounds = load_bounds(calibration);
  const auto files = scan_features(features_dir);

  std::vector<ScoreReport> reports(files.size());
  parallel_for(files.size(), cfg.jobs,
               [&](std::size_t i) { reports[i] = score_video(load_features(files[i]), bounds, cfg); });
  write_file(out, serialize_reports(reports));

  std::size_t flagged = 0;
  for (const auto& r : reports) flagged += r.flags.empty() ? 0 : 1;
  log << "scored " << reports.size() << " video(s), " << flagged << " with flags\n";
  return reports.size();
}

void cmd_correlate(const CorrelateRequest& request, std::ostream& log) {
  const auto reports = parse_reports(read_file(request.reports));
  const auto ratings = parse_ratings(read_file(request.ratings));

  std::vector<Pairing> pairings = request.ablation ? ablation_pairings() : default_pairings();
  for (const std::string& name : request.scores) {
    const auto field = score_field_from_string(name);
    if (!field) throw Error(ErrorKind::input, "unknown score column '" + name + "'");
    for (Dimension d : {Dimension::acs, Dimension::mss}) {
      const bool present = std::any_of(pairings.begin(), pairings.end(),
                                       [&](const Pairing& p) { return p.score == *field && p.dimension == d; });
      if (!present) pairings.push_back({*field, d});
    }
  }

  const CorrelateOutput result =
      correlate(reports, ratings, pairings, {request.allow_missing, request.per_model});
  write_file(request.out, correlations_csv(result.results));
  for (const auto& id : result.missing_video_ids) log << "warning: no report for rated video '" << id << "'\n";
  log << correlations_csv(result.results);
}

void cmd_leaderboard(const fs::path& reports_path, const std::optional<fs::path>& ratings, const fs::path& out,
                     std::ostream& log) {
  auto reports = parse_reports(read_file(reports_path));
  if (ratings) assign_models(reports, parse_ratings(read_file(*ratings)));
  const auto rows = leaderboard(reports);
  write_file(out, leaderboard_csv(rows));
  log << leaderboard_table(rows);
}

void cmd_categories(const fs::path& reports_path, const fs::path& ratings_path, const fs::path& out_csv,
                    const fs::path& plot_json, bool allow_missing, std::ostream& log) {
  const auto reports = parse_reports(read_file(reports_path));
  const auto ratings = parse_ratings(read_file(ratings_path));
  const auto rows = category_breakdown(reports, ratings, allow_missing);
  write_file(out_csv, categories_csv(rows));
  write_file(plot_json, category_plot_json(rows));
  log << categories_csv(rows);
}

void cmd_synth(const SynthRequest& req, std::ostream& log) {
  auto smooth = [&] {
    SmoothTrackParams params;
    params.video_id = req.video_id;
    return gen_smooth_track(req.seed, req.frames, req.fps, req.joints, params);
  };

  if (req.kind == "smooth") {
    write_file(req.out, serialize_motion_track(smooth()));
  } else if (req.kind == "jitter") {
    write_file(req.out, serialize_motion_track(inject_jitter(smooth(), req.amplitude, req.seed)));
  } else if (req.kind == "flip") {
    const std::size_t k = req.flip_frame.value_or(req.frames / 2);
    write_file(req.out, serialize_motion_track(inject_flip(smooth(), k, req.flip_angle_deg, req.flip_axis)));
  } else if (req.kind == "kps") {
    std::optional<PartDegrade> degrade;
    if (req.degrade_part) degrade = PartDegrade{*req.degrade_part, req.degrade_confidence};
    KeypointStreamParams params;
    params.video_id = req.video_id;
    params.fps = req.fps;
    write_file(req.out, serialize_keypoint_stream(
                            gen_keypoint_stream(req.seed, req.frames, req.persons, req.base_confidence, degrade, params)));
  } else if (req.kind == "vlm") {
    write_file(req.out, serialize_vlm_record(make_prior_record(req.video_id, req.prior)));
  } else if (req.kind == "corpus") {
    BenchmarkOptions opt;
    opt.seed = req.seed;
    opt.videos_per_model = req.videos_per_model;
    opt.calibration_videos = req.calibration_videos;
    const SyntheticBenchmark bench = make_benchmark(opt);
    write_benchmark(req.out, bench);
    log << "wrote " << bench.calibration.size() << " calibration video(s), " << bench.videos.size()
        << " scored video(s) and ratings.csv under " << req.out.string() << '\n';
    return;
  } else {
    throw Error(ErrorKind::input, "unknown synth kind '" + req.kind + "'");
  }
  log << "wrote " << req.out.string() << '\n';
}

}  // namespace humeval
