#include "humeval/feature_io.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "humeval/synth.hpp"
#include "support.hpp"

using namespace humeval;
using humeval::test::TempDir;

namespace {

std::string kps_header() { return R"({"fps":30,"video_id":"v1"})"; }

std::string kps_frame(std::size_t index, double confidence = 0.5, std::size_t count = kWholeBodyKeypointCount) {
  std::string kps;
  for (std::size_t k = 0; k < count; ++k) {
    if (k) kps += ',';
    kps += "[1.5,2.5," + format_real(confidence) + "]";
  }
  return R"({"frame_index":)" + std::to_string(index) + R"(,"persons":[{"keypoints":[)" + kps + "]}]}";
}

std::string mot_line(const std::string& quat = "[1,0,0,0]", std::size_t joints = 2) {
  std::string angles;
  for (std::size_t j = 0; j < joints; ++j) angles += std::string(j ? "," : "") + "[0.1,0.2,0.3]";
  return R"({"joint_angles":[)" + angles + R"(],"root_rotation":)" + quat + "}";
}

std::string mot_header(std::size_t joints = 2) {
  return R"({"fps":30,"joint_count":)" + std::to_string(joints) + R"(,"person_id":"p0","video_id":"v1"})";
}

}  // namespace

TEST(KeypointStream, ParsesHeaderAndFrames) {
  const auto s = parse_keypoint_stream(kps_header() + "\n" + kps_frame(0) + "\n\n" + kps_frame(4, 0.25) + "\n");
  EXPECT_EQ(s.video_id, "v1");
  EXPECT_EQ(s.fps, 30.0);
  ASSERT_EQ(s.frames.size(), 2u);
  EXPECT_EQ(s.frames[1].frame_index, 4u);
  ASSERT_EQ(s.frames[1].persons.size(), 1u);
  EXPECT_EQ(s.frames[1].persons[0].keypoints.size(), kWholeBodyKeypointCount);
  EXPECT_EQ(s.frames[1].persons[0].keypoints[7].confidence, 0.25);
  EXPECT_EQ(s.frames[1].persons[0].keypoints[7].x, 1.5);
}

TEST(KeypointStream, FrameWithNoPersonsIsValid) {
  const auto s = parse_keypoint_stream(kps_header() + "\n" + R"({"frame_index":0,"persons":[]})");
  ASSERT_EQ(s.frames.size(), 1u);
  EXPECT_TRUE(s.frames[0].persons.empty());
}

TEST(KeypointStream, Rejections) {
  const std::string h = kps_header() + "\n";
  EXPECT_ERROR_KIND(parse_keypoint_stream(h + kps_frame(0, 1.2)), ErrorKind::range);
  EXPECT_ERROR_KIND(parse_keypoint_stream(h + kps_frame(0, -0.01)), ErrorKind::range);
  EXPECT_ERROR_KIND(parse_keypoint_stream(h + kps_frame(0, 0.5, 132)), ErrorKind::schema);
  EXPECT_ERROR_KIND(parse_keypoint_stream(h + kps_frame(0, 0.5, 134)), ErrorKind::schema);
  EXPECT_ERROR_KIND(parse_keypoint_stream(h + kps_frame(3) + "\n" + kps_frame(3)), ErrorKind::ordering);
  EXPECT_ERROR_KIND(parse_keypoint_stream(h + kps_frame(3) + "\n" + kps_frame(2)), ErrorKind::ordering);
  EXPECT_ERROR_KIND(parse_keypoint_stream(h + "{not json"), ErrorKind::parse);
  EXPECT_ERROR_KIND(parse_keypoint_stream(R"({"fps":0,"video_id":"v1"})" "\n" + kps_frame(0)), ErrorKind::range);
  EXPECT_ERROR_KIND(parse_keypoint_stream(R"({"fps":30})" "\n" + kps_frame(0)), ErrorKind::schema);
  EXPECT_ERROR_KIND(parse_keypoint_stream(h), ErrorKind::schema);
  EXPECT_ERROR_KIND(parse_keypoint_stream(""), ErrorKind::schema);
  EXPECT_ERROR_KIND(parse_keypoint_stream(h + R"({"frame_index":0,"persons":[],"video_id":"other"})"),
                    ErrorKind::schema);
}

TEST(KeypointStream, ErrorsCarryLineNumbers) {
  try {
    parse_keypoint_stream(kps_header() + "\n" + kps_frame(0) + "\n\n" + kps_frame(1, 2.0));
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.line(), std::optional<std::size_t>(4));
    EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos);
  }
}

TEST(MotionTrack, ParsesAndDefaultsJointCount) {
  const auto t = parse_motion_track(mot_header() + "\n" + mot_line() + "\n" + mot_line("[0,1,0,0]"));
  EXPECT_EQ(t.person_id, "p0");
  ASSERT_EQ(t.frames.size(), 2u);
  EXPECT_EQ(t.joint_count(), 2u);
  EXPECT_EQ(t.frames[1].root_rotation, (Quaternion{0, 1, 0, 0}));
  EXPECT_EQ(t.frames[0].joint_angles[1], (Vec3{0.1, 0.2, 0.3}));

  const auto d = parse_motion_track(R"({"fps":30,"person_id":"p0","video_id":"v1"})" "\n" +
                                    mot_line("[1,0,0,0]", kDefaultJointCount));
  EXPECT_EQ(d.joint_count(), kDefaultJointCount);
}

TEST(MotionTrack, QuaternionNormHandling) {
  const std::string h = mot_header() + "\n";
  // Within 1e-8 of unit norm: kept as written.
  const auto verbatim = parse_motion_track(h + mot_line("[1.000000005,0,0,0]"));
  EXPECT_EQ(verbatim.frames[0].root_rotation.w, 1.000000005);
  // Within tolerance but not that close: renormalized.
  const auto renorm = parse_motion_track(h + mot_line("[1.0000005,0,0,0]"));
  EXPECT_EQ(renorm.frames[0].root_rotation.w, 1.0);
  EXPECT_ERROR_KIND(parse_motion_track(h + mot_line("[1.00001,0,0,0]")), ErrorKind::range);
  EXPECT_ERROR_KIND(parse_motion_track(h + mot_line("[0,0,0,0]")), ErrorKind::range);
  EXPECT_ERROR_KIND(parse_motion_track(h + mot_line("[1,0,0]")), ErrorKind::schema);
}

TEST(MotionTrack, Rejections) {
  EXPECT_ERROR_KIND(parse_motion_track(mot_header(3) + "\n" + mot_line()), ErrorKind::schema);
  EXPECT_ERROR_KIND(parse_motion_track(mot_header() + "\n" + R"({"joint_angles":[[0,0],[0,0,0]],"root_rotation":[1,0,0,0]})"),
                    ErrorKind::schema);
  EXPECT_ERROR_KIND(parse_motion_track(mot_header() + "\n" + R"({"joint_angles":[[0,"x",0],[0,0,0]],"root_rotation":[1,0,0,0]})"),
                    ErrorKind::schema);
  EXPECT_ERROR_KIND(parse_motion_track(mot_header()), ErrorKind::schema);
  EXPECT_ERROR_KIND(parse_motion_track(R"({"fps":30,"joint_count":0,"person_id":"p0","video_id":"v1"})" "\n" +
                                       mot_line()),
                    ErrorKind::range);
}

TEST(VlmRecord, ParsesAndIgnoresExtraKeys) {
  const auto r = parse_vlm_record(R"({"video_id":"v1","positive_logit":2.5,"negative_logit":-1,"prompt":"x"})");
  EXPECT_EQ(r.video_id, "v1");
  EXPECT_EQ(r.positive_logit, 2.5);
  EXPECT_EQ(r.negative_logit, -1.0);
  EXPECT_ERROR_KIND(parse_vlm_record(R"({"video_id":"v1","positive_logit":2.5})"), ErrorKind::schema);
  EXPECT_ERROR_KIND(parse_vlm_record(R"({"video_id":"v1","positive_logit":"a","negative_logit":0})"),
                    ErrorKind::schema);
  EXPECT_ERROR_KIND(parse_vlm_record("[1,2]"), ErrorKind::schema);
}

TEST(Ratings, ParsesRows) {
  const auto r = parse_ratings(
      "video_id,model_id,category,acs,mss\n"
      "a,m1,BMO_SIMPLE,3.5,4\n"
      "b,m2,HHI,1,5\n");
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0].category, Category::bmo_simple);
  EXPECT_EQ(r[0].acs, 3.5);
  EXPECT_EQ(r[1].category, Category::hhi);
  EXPECT_EQ(r[1].mss, 5.0);
}

TEST(Ratings, Rejections) {
  const std::string h = "video_id,model_id,category,acs,mss\n";
  EXPECT_ERROR_KIND(parse_ratings("id,model,category,acs,mss\na,m,HOI,3,3\n"), ErrorKind::schema);
  EXPECT_ERROR_KIND(parse_ratings(h + "a,m,HOI,3,3\na,m,HOI,3,3\n"), ErrorKind::schema);
  EXPECT_ERROR_KIND(parse_ratings(h + "a,m,DANCE,3,3\n"), ErrorKind::schema);
  EXPECT_ERROR_KIND(parse_ratings(h + "a,m,HOI,0.5,3\n"), ErrorKind::range);
  EXPECT_ERROR_KIND(parse_ratings(h + "a,m,HOI,3,5.5\n"), ErrorKind::range);
  EXPECT_ERROR_KIND(parse_ratings(h + "a,m,HOI,3\n"), ErrorKind::parse);
  EXPECT_ERROR_KIND(parse_ratings(h + "a,m,HOI,3,\n"), ErrorKind::parse);
  EXPECT_ERROR_KIND(parse_ratings(h + "a,m,HOI,x,3\n"), ErrorKind::parse);
  EXPECT_ERROR_KIND(parse_ratings(""), ErrorKind::schema);
}

TEST(Canonical, KeysSortedAndNinesDigits) {
  const nlohmann::json j = {{"b", 0.1}, {"a", {1, 2.0, 1.0 / 3.0}}, {"c", "s"}};
  EXPECT_EQ(canonical_dump(j), R"({"a":[1,2,0.333333333],"b":0.1,"c":"s"})");
  EXPECT_EQ(format_real(1e-12), "1e-12");
  EXPECT_EQ(format_real(30.0), "30");
  EXPECT_ERROR_KIND(format_real(std::nan("")), ErrorKind::range);
}

// Serialize -> parse -> serialize must reproduce the first bytes exactly.
TEST(RoundTrip, ByteStableForGeneratedData) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const MotionTrack track = inject_jitter(gen_smooth_track(seed, 24, 30.0, 5), 0.01, seed);
    const std::string once = serialize_motion_track(track);
    const std::string twice = serialize_motion_track(parse_motion_track(once));
    ASSERT_EQ(once, twice) << "seed " << seed;

    KeypointStreamParams params;
    params.confidence_noise = 0.05;
    const KeypointStream stream = gen_keypoint_stream(seed, 3, 1 + seed % 3, 0.7, std::nullopt, params);
    const std::string k1 = serialize_keypoint_stream(stream);
    ASSERT_EQ(k1, serialize_keypoint_stream(parse_keypoint_stream(k1))) << "seed " << seed;

    const std::string v1 = serialize_vlm_record(make_prior_record("v", 0.01 + 0.049 * static_cast<double>(seed)));
    ASSERT_EQ(v1, serialize_vlm_record(parse_vlm_record(v1)));
  }
}

TEST(RoundTrip, RatingsByteStable) {
  std::vector<HumanRatingRecord> rows = {{"a", "m", Category::hoi, 1.0 + 4.0 / 7.0, 5.0},
                                         {"b", "m", Category::bmo_skill, 2.25, 1.0}};
  const std::string once = serialize_ratings(rows);
  EXPECT_EQ(once, serialize_ratings(parse_ratings(once)));
}

// Property: flipping any single keypoint confidence out of [0,1] anywhere in a
// valid file is rejected with a range error on that frame's line.
TEST(Mutation, OutOfRangeConfidenceAnywhereIsRejected) {
  std::mt19937_64 gen(3);
  const KeypointStream base = gen_keypoint_stream(9, 4, 2, 0.6);
  for (int trial = 0; trial < 50; ++trial) {
    KeypointStream s = base;
    const std::size_t f = gen() % s.frames.size();
    const std::size_t p = gen() % s.frames[f].persons.size();
    const std::size_t k = gen() % kWholeBodyKeypointCount;
    s.frames[f].persons[p].keypoints[k].confidence = trial % 2 ? 1.0 + 1e-6 : -1e-6;
    try {
      parse_keypoint_stream(serialize_keypoint_stream(s));
      FAIL() << "accepted confidence outside [0,1]";
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::range);
      EXPECT_EQ(e.line(), std::optional<std::size_t>(f + 2));
    }
  }
}

// Property: deleting any single line after the header from a valid motion file
// still parses; deleting the header never does.
TEST(Mutation, LineDeletion) {
  const std::string text = serialize_motion_track(gen_smooth_track(4, 10, 30.0, 3));
  std::vector<std::string> lines;
  std::stringstream in(text);
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  for (std::size_t drop = 0; drop < lines.size(); ++drop) {
    std::string mutated;
    for (std::size_t i = 0; i < lines.size(); ++i)
      if (i != drop) mutated += lines[i] + "\n";
    if (drop == 0) {
      EXPECT_TRUE(test::error_kind([&] { parse_motion_track(mutated); }).has_value());
    } else {
      EXPECT_EQ(parse_motion_track(mutated).frames.size(), lines.size() - 2);
    }
  }
}

// Property: truncating a valid keypoint file at any byte either parses to a
// prefix of the frames or fails with a typed error, never anything else.
TEST(Mutation, TruncationFailsCleanly) {
  const std::string text = serialize_keypoint_stream(gen_keypoint_stream(2, 2, 1, 0.8));
  for (std::size_t cut = 0; cut < text.size(); cut += 97) {
    try {
      const auto s = parse_keypoint_stream(text.substr(0, cut));
      EXPECT_LE(s.frames.size(), 2u);
    } catch (const Error&) {
    }
  }
}

TEST(Files, WriteReadAndPeek) {
  TempDir dir("io");
  const auto path = dir.path() / "nested" / "x.vlm.json";
  write_file(path, serialize_vlm_record({"vid9", 1.0, 2.0}));
  EXPECT_EQ(peek_video_id(path), "vid9");
  const auto mot = dir.path() / "x.p0.mot.ndjson";
  write_file(mot, serialize_motion_track(gen_smooth_track(1, 8, 30.0, 2, {"vid8"})));
  EXPECT_EQ(peek_video_id(mot), "vid8");
  EXPECT_ERROR_KIND(read_file(dir.path() / "missing.json"), ErrorKind::io);
}
