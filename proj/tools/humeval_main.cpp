// humeval: calibrate, score, correlate, leaderboard, categories, synth gen.
//
// Exit codes: 0 success, 1 run error (JSON summary on stderr), 2 usage error.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "humeval/commands.hpp"
#include "humeval/error.hpp"

namespace fs = std::filesystem;
using namespace humeval;

namespace {

struct EngineFlags {
  std::optional<double> tau;
  std::optional<double> sigma;
  std::optional<double> lambda_local;
  std::optional<double> lambda_global;
  std::optional<double> percentile;
  std::optional<unsigned> jobs;
  std::optional<std::string> config;
};

void add_engine_flags(CLI::App* app, EngineFlags& f) {
  app->add_option("--tau", f.tau, "part visibility threshold");
  app->add_option("--sigma", f.sigma, "Gaussian smoothing sigma in frames");
  app->add_option("--lambda-local", f.lambda_local, "local stability scale");
  app->add_option("--lambda-global", f.lambda_global, "global consistency scale");
  app->add_option("--jobs", f.jobs, "worker threads (0 = CPU count)");
  app->add_option("--config", f.config, "key = value config file (default: $HUMEVAL_CONFIG)");
}

EngineConfig resolve_config(const EngineFlags& f) {
  EngineConfig cfg;
  std::optional<std::string> path = f.config;
  if (!path) {
    if (const char* env = std::getenv("HUMEVAL_CONFIG"); env && *env) path = env;
  }
  if (path) cfg = load_engine_config(*path);
  if (f.tau) cfg.anat.tau = *f.tau;
  if (f.sigma) cfg.kin.gaussian_sigma_frames = *f.sigma;
  if (f.lambda_local) cfg.kin.phi_lambda_local = *f.lambda_local;
  if (f.lambda_global) cfg.kin.phi_lambda_global = *f.lambda_global;
  if (f.percentile) cfg.percentile = *f.percentile;
  if (f.jobs) cfg.jobs = *f.jobs;
  cfg.validate();
  return cfg;
}

void print_error(std::string_view kind, std::string_view message) {
  nlohmann::json j;
  j["error"]["kind"] = kind;
  j["error"]["message"] = message;
  std::cerr << j.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Human-centric video generation metric"};
  app.require_subcommand(1);

  EngineFlags eflags;

  std::string corpus_dir, cal_out = "calibration.json";
  auto* calibrate = app.add_subcommand("calibrate", "fit normalization bounds on a real-motion corpus");
  calibrate->add_option("corpus_dir", corpus_dir, "directory of feature files")->required();
  calibrate->add_option("-o,--out", cal_out, "output calibration file");
  calibrate->add_option("--percentile", eflags.percentile, "use the p-th/(100-p)-th percentiles as bounds");
  add_engine_flags(calibrate, eflags);

  std::string features_dir, calibration = "calibration.json", reports_out = "reports.ndjson";
  auto* score = app.add_subcommand("score", "score every video under a features directory");
  score->add_option("features_dir", features_dir, "directory of feature files")->required();
  score->add_option("-c,--calibration", calibration, "calibration file");
  score->add_option("-o,--out", reports_out, "output reports file");
  add_engine_flags(score, eflags);

  CorrelateRequest corr;
  corr.out = "correlations.csv";
  std::string corr_reports, corr_ratings, corr_out = "correlations.csv";
  auto* correlate = app.add_subcommand("correlate", "Spearman correlation against human ratings");
  correlate->add_option("reports", corr_reports, "reports.ndjson")->required();
  correlate->add_option("ratings", corr_ratings, "ratings.csv")->required();
  correlate->add_option("-o,--out", corr_out, "output CSV");
  correlate->add_flag("--ablation", corr.ablation, "add component rows for both dimensions");
  correlate->add_flag("--allow-missing", corr.allow_missing, "skip rated videos without a report");
  correlate->add_flag("--per-model", corr.per_model, "add one row per model");
  correlate->add_option("--score", corr.scores, "extra score column to correlate (repeatable)");

  std::string lb_reports, lb_out = "leaderboard.csv";
  std::optional<std::string> lb_ratings;
  auto* board = app.add_subcommand("leaderboard", "per-model mean Q_Anat and Q_Mot");
  board->add_option("reports", lb_reports, "reports.ndjson")->required();
  board->add_option("--ratings", lb_ratings, "ratings.csv used to fill missing model ids");
  board->add_option("-o,--out", lb_out, "output CSV");

  std::string cat_reports, cat_ratings, cat_out = "categories.csv", cat_plot = "plotdata.json";
  bool cat_allow_missing = false;
  auto* categories = app.add_subcommand("categories", "per-category, per-model breakdown");
  categories->add_option("reports", cat_reports, "reports.ndjson")->required();
  categories->add_option("ratings", cat_ratings, "ratings.csv (category source)")->required();
  categories->add_option("-o,--out", cat_out, "output CSV");
  categories->add_option("--plot", cat_plot, "output plot data JSON");
  categories->add_flag("--allow-missing", cat_allow_missing, "skip rated videos without a report");

  SynthRequest syn;
  std::string syn_out;
  std::vector<double> flip_axis;
  auto* synth = app.add_subcommand("synth", "synthetic feature data");
  synth->require_subcommand(1);
  auto* gen = synth->add_subcommand("gen", "generate feature files");
  gen->add_option("--kind", syn.kind, "smooth | jitter | flip | kps | vlm | corpus")
      ->required()
      ->check(CLI::IsMember({"smooth", "jitter", "flip", "kps", "vlm", "corpus"}));
  gen->add_option("-o,--out", syn_out, "output file (directory for corpus)")->required();
  gen->add_option("--seed", syn.seed, "generator seed");
  gen->add_option("--video-id", syn.video_id, "video id written to the header");
  gen->add_option("--frames", syn.frames, "frame count");
  gen->add_option("--fps", syn.fps, "frame rate");
  gen->add_option("--joints", syn.joints, "joint count");
  gen->add_option("--amplitude", syn.amplitude, "jitter amplitude in radians");
  gen->add_option("--flip-frame", syn.flip_frame, "first flipped frame (default: frames/2)");
  gen->add_option("--flip-angle", syn.flip_angle_deg, "flip angle in degrees");
  gen->add_option("--flip-axis", flip_axis, "flip axis x y z")->expected(3);
  gen->add_option("--persons", syn.persons, "persons per keypoint frame");
  gen->add_option("--confidence", syn.base_confidence, "base keypoint confidence");
  gen->add_option("--degrade-part", syn.degrade_part, "part whose confidence is overridden");
  gen->add_option("--degrade-confidence", syn.degrade_confidence, "confidence of the degraded part");
  gen->add_option("--prior", syn.prior, "prior probability for --kind vlm");
  gen->add_option("--videos-per-model", syn.videos_per_model, "corpus size per model");
  gen->add_option("--calibration-videos", syn.calibration_videos, "calibration corpus size");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*calibrate) {
      cmd_calibrate(corpus_dir, cal_out, resolve_config(eflags), std::cout);
    } else if (*score) {
      cmd_score(features_dir, calibration, reports_out, resolve_config(eflags), std::cout);
    } else if (*correlate) {
      corr.reports = corr_reports;
      corr.ratings = corr_ratings;
      corr.out = corr_out;
      cmd_correlate(corr, std::cout);
    } else if (*board) {
      std::optional<fs::path> ratings;
      if (lb_ratings) ratings = *lb_ratings;
      cmd_leaderboard(lb_reports, ratings, lb_out, std::cout);
    } else if (*categories) {
      cmd_categories(cat_reports, cat_ratings, cat_out, cat_plot, cat_allow_missing, std::cout);
    } else if (*gen) {
      syn.out = syn_out;
      if (!flip_axis.empty()) syn.flip_axis = {flip_axis[0], flip_axis[1], flip_axis[2]};
      cmd_synth(syn, std::cout);
    }
  } catch (const Error& e) {
    print_error(to_string(e.kind()), e.what());
    return 1;
  } catch (const std::exception& e) {
    print_error("internal", e.what());
    return 1;
  }
  return 0;
}
