#include <cstdlib>
#include <fstream>
#include <string>

#include <sys/wait.h>

#include <gtest/gtest.h>

#include "humeval/calibration.hpp"
#include "humeval/feature_io.hpp"
#include "humeval/report.hpp"
#include "support.hpp"

using humeval::test::TempDir;
namespace fs = std::filesystem;

namespace {

struct Invocation {
  int code = -1;
  std::string out;
  std::string err;
};

Invocation humeval_cli(const std::string& args, const fs::path& scratch, const std::string& env = "") {
  const fs::path out = scratch / "stdout.txt", err = scratch / "stderr.txt";
  const std::string cmd = env + " " + std::string(HUMEVAL_CLI_PATH) + " " + args + " > " + out.string() + " 2> " +
                          err.string();
  const int status = std::system(cmd.c_str());
  Invocation r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = humeval::read_file(out);
  r.err = humeval::read_file(err);
  return r;
}

class Cli : public ::testing::Test {
 protected:
  TempDir dir{"cli"};
  std::string p(const std::string& name) const { return (dir.path() / name).string(); }
  Invocation run(const std::string& args, const std::string& env = "") { return humeval_cli(args, dir.path(), env); }

  void make_corpus() {
    ASSERT_EQ(run("synth gen --kind corpus --seed 5 --videos-per-model 4 --calibration-videos 10 -o " + p("c")).code,
              0);
  }
};

}  // namespace

TEST_F(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("--bogus").code, 2);
  EXPECT_EQ(run("score").code, 2);
  EXPECT_EQ(run("score x --no-such-flag").code, 2);
  EXPECT_EQ(run("synth gen --kind spiral -o x").code, 2);
  EXPECT_EQ(run("calibrate x --tau abc").code, 2);
}

TEST_F(Cli, RunErrorsEmitJson) {
  const Invocation r = run("score " + p("nowhere") + " -c " + p("missing.json"));
  EXPECT_EQ(r.code, 1);
  const auto j = nlohmann::json::parse(r.err);
  EXPECT_EQ(j["error"]["kind"], "io");
  EXPECT_TRUE(j["error"]["message"].is_string());
}

TEST_F(Cli, CalibrateCountsAndDeterminism) {
  make_corpus();
  const Invocation r = run("calibrate " + p("c/calibration") + " -o " + p("cal.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("anat: n=10"), std::string::npos);
  EXPECT_NE(r.out.find("global: n=10"), std::string::npos);
  const std::string first = humeval::read_file(p("cal.json"));
  ASSERT_EQ(run("calibrate " + p("c/calibration") + " -o " + p("cal.json")).code, 0);
  EXPECT_EQ(humeval::read_file(p("cal.json")), first);
  const auto cal = humeval::parse_calibration(first);
  EXPECT_EQ(cal.local.corpus_id, "calibration");
}

TEST_F(Cli, SingleVideoCorpusIsDegenerate) {
  ASSERT_EQ(run("synth gen --kind smooth --video-id solo -o " + p("one/solo.p0.mot.ndjson")).code, 0);
  ASSERT_EQ(run("synth gen --kind kps --video-id solo --frames 3 -o " + p("one/solo.kps.ndjson")).code, 0);
  const Invocation r = run("calibrate " + p("one") + " -o " + p("cal.json"));
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(nlohmann::json::parse(r.err)["error"]["kind"], "degenerate-calibration");
}

TEST_F(Cli, EmptyCorpusIsAnError) {
  fs::create_directories(dir.path() / "empty");
  EXPECT_EQ(run("calibrate " + p("empty") + " -o " + p("cal.json")).code, 1);
}

TEST_F(Cli, PipelineAndAblationRows) {
  make_corpus();
  ASSERT_EQ(run("calibrate " + p("c/calibration") + " -o " + p("cal.json")).code, 0);
  const Invocation s = run("score " + p("c/features") + " -c " + p("cal.json") + " -o " + p("reports.ndjson") + " --jobs 2");
  ASSERT_EQ(s.code, 0) << s.err;
  const auto reports = humeval::parse_reports(humeval::read_file(p("reports.ndjson")));
  EXPECT_EQ(reports.size(), 12u);

  ASSERT_EQ(run("correlate " + p("reports.ndjson") + " " + p("c/ratings.csv") + " -o " + p("plain.csv")).code, 0);
  ASSERT_EQ(run("correlate --ablation " + p("reports.ndjson") + " " + p("c/ratings.csv") + " -o " + p("abl.csv")).code,
            0);
  auto lines = [](const std::string& text) { return std::count(text.begin(), text.end(), '\n'); };
  EXPECT_EQ(lines(humeval::read_file(p("plain.csv"))), 3);
  EXPECT_EQ(lines(humeval::read_file(p("abl.csv"))), 11);
  EXPECT_NE(humeval::read_file(p("abl.csv")).find("pooled,s_anat_norm,ACS,"), std::string::npos);

  const Invocation lb = run("leaderboard " + p("reports.ndjson") + " -o " + p("lb.csv"));
  ASSERT_EQ(lb.code, 0);
  EXPECT_NE(lb.out.find("synth_good"), std::string::npos);
  ASSERT_EQ(run("categories " + p("reports.ndjson") + " " + p("c/ratings.csv") + " -o " + p("cat.csv") + " --plot " +
                p("plot.json"))
                .code,
            0);
  EXPECT_EQ(nlohmann::json::parse(humeval::read_file(p("plot.json")))["categories"].size(), 4u);
}

TEST_F(Cli, MissingPriorFileFlagsReport) {
  make_corpus();
  ASSERT_EQ(run("calibrate " + p("c/calibration") + " -o " + p("cal.json")).code, 0);
  fs::remove(dir.path() / "c/features/synth_good/synth_good_v000.vlm.json");
  ASSERT_EQ(run("score " + p("c/features") + " -c " + p("cal.json") + " -o " + p("r.ndjson")).code, 0);
  for (const auto& r : humeval::parse_reports(humeval::read_file(p("r.ndjson")))) {
    EXPECT_EQ(r.has_flag("no-prior"), r.video_id == "synth_good_v000");
    if (r.video_id == "synth_good_v000") EXPECT_EQ(r.s_prior, 1.0);
  }
}

TEST_F(Cli, ConfigFileFromEnvironment) {
  make_corpus();
  std::ofstream(p("cfg.toml")) << "tau = 0.95\n";
  ASSERT_EQ(run("calibrate " + p("c/calibration") + " -o " + p("cal.json")).code, 0);
  // Every part falls below a 0.95 visibility threshold, so scoring flags every video.
  ASSERT_EQ(run("score " + p("c/features") + " -c " + p("cal.json") + " -o " + p("r.ndjson"),
                "HUMEVAL_CONFIG=" + p("cfg.toml"))
                .code,
            0);
  for (const auto& r : humeval::parse_reports(humeval::read_file(p("r.ndjson"))))
    EXPECT_TRUE(r.has_flag("no-person-detected")) << r.video_id;
  // A flag overrides the file.
  ASSERT_EQ(run("score " + p("c/features") + " -c " + p("cal.json") + " -o " + p("r2.ndjson") + " --tau 0.3",
                "HUMEVAL_CONFIG=" + p("cfg.toml"))
                .code,
            0);
  for (const auto& r : humeval::parse_reports(humeval::read_file(p("r2.ndjson"))))
    EXPECT_FALSE(r.has_flag("no-person-detected"));

  std::ofstream(p("bad.toml")) << "nonsense = 1\n";
  const Invocation bad = run("score " + p("c/features") + " -c " + p("cal.json"), "HUMEVAL_CONFIG=" + p("bad.toml"));
  EXPECT_EQ(bad.code, 1);
}

TEST_F(Cli, MissingRatingsNeedAllowMissing) {
  make_corpus();
  ASSERT_EQ(run("calibrate " + p("c/calibration") + " -o " + p("cal.json")).code, 0);
  fs::remove_all(dir.path() / "c/features/synth_fair");
  ASSERT_EQ(run("score " + p("c/features") + " -c " + p("cal.json") + " -o " + p("r.ndjson")).code, 0);
  const Invocation strict = run("correlate " + p("r.ndjson") + " " + p("c/ratings.csv") + " -o " + p("x.csv"));
  EXPECT_EQ(strict.code, 1);
  EXPECT_EQ(nlohmann::json::parse(strict.err)["error"]["kind"], "missing-data");
  EXPECT_EQ(run("correlate --allow-missing " + p("r.ndjson") + " " + p("c/ratings.csv") + " -o " + p("x.csv")).code, 0);
}

TEST_F(Cli, SynthKindsEmitParsableFiles) {
  ASSERT_EQ(run("synth gen --kind jitter --amplitude 0.02 -o " + p("j.mot.ndjson")).code, 0);
  ASSERT_EQ(run("synth gen --kind flip --flip-frame 30 -o " + p("f.mot.ndjson")).code, 0);
  ASSERT_EQ(run("synth gen --kind kps --frames 4 --degrade-part face -o " + p("k.kps.ndjson")).code, 0);
  ASSERT_EQ(run("synth gen --kind vlm --prior 0.3 -o " + p("v.vlm.json")).code, 0);
  EXPECT_EQ(humeval::parse_motion_track(humeval::read_file(p("j.mot.ndjson"))).frames.size(), 120u);
  EXPECT_EQ(humeval::parse_keypoint_stream(humeval::read_file(p("k.kps.ndjson"))).frames.size(), 4u);
  EXPECT_NO_THROW(humeval::parse_vlm_record(humeval::read_file(p("v.vlm.json"))));
  const Invocation past = run("synth gen --kind flip --flip-frame 500 -o " + p("x.mot.ndjson"));
  EXPECT_EQ(past.code, 1);
}
