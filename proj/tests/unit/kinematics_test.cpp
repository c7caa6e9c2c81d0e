#include "humeval/kinematics.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "humeval/synth.hpp"
#include "support.hpp"

using namespace humeval;
using humeval::test::scalar_track;

namespace {

CalibrationSet unit_calibration() {
  return {{Metric::anat, 0.0, 1.0, "t", 1}, {Metric::local, 0.0, 1.0, "t", 1}, {Metric::global, 0.0, 1.0, "t", 1}};
}

MotionTrack rotating_track(const std::vector<Quaternion>& rotations) {
  MotionTrack t;
  t.video_id = "v";
  t.person_id = "p0";
  t.fps = 30.0;
  for (const auto& q : rotations) t.frames.push_back({q, {Vec3{}}});
  return t;
}

}  // namespace

TEST(StabilityMap, Values) {
  EXPECT_EQ(stability_map(0.0, 100.0), 1.0);
  EXPECT_EQ(stability_map(100.0, 100.0), 0.5);
  EXPECT_DOUBLE_EQ(stability_map(300.0, 100.0), 0.25);
  EXPECT_EQ(stability_map(2.0, 0.5), 0.2);
}

TEST(Jerk, ShapeAndScaling) {
  const Matrix j = joint_jerk(scalar_track({0, 0, 0, 1, 0, 0}, 10.0));
  ASSERT_EQ(j.rows(), 3u);
  ASSERT_EQ(j.cols(), 3u);
  EXPECT_EQ(j(0, 0), 1000.0);
  EXPECT_EQ(j(1, 0), -3000.0);
  EXPECT_EQ(j(2, 2), 3000.0);
}

TEST(Jerk, TooShort) {
  EXPECT_ERROR_KIND(joint_jerk(scalar_track({0, 1, 2}, 30.0)), ErrorKind::sequence_too_short);
  EXPECT_EQ(joint_jerk(scalar_track({0, 1, 2, 3}, 30.0)).rows(), 1u);
}

TEST(Jerk, CubicIsConstant) {
  std::vector<double> theta;
  for (int t = 0; t < 60; ++t) theta.push_back(std::pow(t / 30.0, 3));
  const Matrix j = joint_jerk(scalar_track(theta, 30.0));
  for (std::size_t r = 0; r < j.rows(); ++r) EXPECT_NEAR(j(r, 1), 6.0, 1e-9);
}

TEST(Jerk, DyadicLinearIsExactlyZero) {
  std::vector<double> theta;
  for (int t = 0; t < 40; ++t) theta.push_back(0.75 - 0.125 * t);
  const Matrix j = joint_jerk(scalar_track(theta, 25.0));
  for (std::size_t r = 0; r < j.rows(); ++r) EXPECT_EQ(j(r, 0), 0.0);
}

TEST(Gaussian, KernelShape) {
  const auto k = gaussian_kernel(2.0, 3.0);
  ASSERT_EQ(k.size(), 13u);
  double sum = 0.0;
  for (double w : k) sum += w;
  EXPECT_NEAR(sum, 1.0, 1e-15);
  EXPECT_EQ(k[0], k[12]);
  EXPECT_GT(k[6], k[5]);
  EXPECT_EQ(gaussian_kernel(0.5, 3.0).size(), 5u);
  EXPECT_ERROR_KIND(gaussian_kernel(0.0, 3.0), ErrorKind::input);
}

// Reference values from scipy.ndimage.gaussian_filter1d(x, 2.0, mode="reflect").
TEST(Gaussian, MatchesReferenceValues) {
  Matrix x(6, 1);
  const double in[] = {1.0, 2.0, 4.0, 8.0, 16.0, 32.0};
  for (std::size_t i = 0; i < 6; ++i) x(i, 0) = in[i];
  const Matrix y = gaussian_smooth(x, KinConfig{});
  const double expected[] = {3.44450435, 4.93199604, 7.88866567, 11.94348844, 16.0660732, 18.7252723};
  for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(y(i, 0), expected[i], 1e-7) << i;

  const double in2[] = {3, -1, 4, 1, -5, 9, 2, 6, -5, 3, 5, 8};
  Matrix x2(12, 1);
  for (std::size_t i = 0; i < 12; ++i) x2(i, 0) = in2[i];
  const Matrix y2 = gaussian_smooth(x2, KinConfig{});
  const double expected2[] = {1.59030729, 1.50914133, 1.44026767, 1.52256053, 1.82200063, 2.20001337,
                              2.41977545, 2.4800859,  2.6865695,  3.29471535, 4.18555422, 4.84900876};
  for (std::size_t i = 0; i < 12; ++i) EXPECT_NEAR(y2(i, 0), expected2[i], 1e-7) << i;
}

TEST(Gaussian, ImpulseSpreadsSymmetrically) {
  Matrix x(41, 1);
  x(20, 0) = 1.0;
  const Matrix y = gaussian_smooth(x, KinConfig{});
  const auto k = gaussian_kernel(2.0, 3.0);
  for (int d = -6; d <= 6; ++d) EXPECT_NEAR(y(20 + d, 0), k[d + 6], 1e-16);
  EXPECT_EQ(y(13, 0), 0.0);
}

TEST(GaussianProperty, LinearityAndConstants) {
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int trial = 0; trial < 30; ++trial) {
    Matrix a(25, 2), b(25, 2), sum(25, 2);
    for (std::size_t r = 0; r < 25; ++r)
      for (std::size_t c = 0; c < 2; ++c) {
        a(r, c) = u(gen);
        b(r, c) = u(gen);
        sum(r, c) = a(r, c) + b(r, c);
      }
    const Matrix ga = gaussian_smooth(a, {}), gb = gaussian_smooth(b, {}), gs = gaussian_smooth(sum, {});
    for (std::size_t r = 0; r < 25; ++r)
      for (std::size_t c = 0; c < 2; ++c) EXPECT_NEAR(gs(r, c), ga(r, c) + gb(r, c), 1e-12);
  }
  const Matrix flat = gaussian_smooth(Matrix(7, 4, 2.5), {});
  for (std::size_t r = 0; r < 7; ++r) EXPECT_NEAR(flat(r, 3), 2.5, 1e-15);
}

TEST(LocalStability, SmoothTrackScoresHigh) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto ls = local_stability(gen_smooth_track(seed, 120, 30.0, kDefaultJointCount), {});
    EXPECT_LT(ls.deviation, 10.0) << seed;
    EXPECT_GT(ls.score, 0.9) << seed;
  }
}

TEST(LocalStability, CubicHasNoResidual) {
  std::vector<double> theta;
  for (int t = 0; t < 50; ++t) theta.push_back(std::pow(t / 30.0, 3));
  const auto ls = local_stability(scalar_track(theta, 30.0), {});
  EXPECT_NEAR(ls.deviation, 0.0, 1e-6);
  EXPECT_NEAR(ls.score, 1.0, 1e-8);
}

TEST(LocalStability, LambdaScalesScore) {
  const MotionTrack t = inject_jitter(gen_smooth_track(3, 60, 30.0, 4), 0.02, 3);
  KinConfig a, b;
  a.phi_lambda_local = 10.0;
  b.phi_lambda_local = 1000.0;
  const auto la = local_stability(t, a), lb = local_stability(t, b);
  EXPECT_EQ(la.deviation, lb.deviation);
  EXPECT_LT(la.score, lb.score);
}

TEST(Orientation, IdentityAndYaw) {
  const auto o = orientation_vectors(rotating_track({Quaternion::identity()}), {});
  EXPECT_EQ(o[0].up, (Vec3{0, 1, 0}));
  EXPECT_EQ(o[0].heading, (Vec3{0, 0, 1}));

  const auto yaw = Quaternion::from_axis_angle({0, 1, 0}, std::numbers::pi / 2);
  const auto r = orientation_vectors(rotating_track({yaw}), {});
  EXPECT_NEAR(r[0].heading.x, 1.0, 1e-15);
  EXPECT_NEAR(r[0].heading.z, 0.0, 1e-15);
  EXPECT_NEAR(r[0].up.y, 1.0, 1e-15);
}

TEST(Orientation, DegenerateHeadingCarriesForward) {
  // Pitching the body by 90 degrees points its forward axis straight up.
  const auto pitch = Quaternion::from_axis_angle({1, 0, 0}, -std::numbers::pi / 2);
  const auto yaw = Quaternion::from_axis_angle({0, 1, 0}, 0.3);
  const auto o = orientation_vectors(rotating_track({yaw, pitch}), {});
  EXPECT_NEAR(o[1].heading.x, o[0].heading.x, 1e-15);
  EXPECT_NEAR(o[1].heading.z, o[0].heading.z, 1e-15);

  // First frame degenerate: falls back to the forward axis.
  const auto first = orientation_vectors(rotating_track({pitch}), {});
  EXPECT_EQ(first[0].heading, (Vec3{0, 0, 1}));
}

TEST(Global, FlipGivesMaximalDeviation) {
  std::vector<Quaternion> q(10, Quaternion::identity());
  for (std::size_t t = 5; t < 10; ++t) q[t] = Quaternion::from_axis_angle({0, 0, 1}, std::numbers::pi);
  const auto g = global_consistency(rotating_track(q), {});
  EXPECT_NEAR(g.deviation, 2.0, 1e-12);
  EXPECT_EQ(g.worst_pair, 4u);
  EXPECT_NEAR(g.score, 0.2, 1e-12);

  const auto d = orientation_deviations(rotating_track(q), {});
  ASSERT_EQ(d.size(), 9u);
  EXPECT_NEAR(d[4].up, 2.0, 1e-12);
  EXPECT_NEAR(d[4].heading, 0.0, 1e-12);
  EXPECT_EQ(d[3].up, 0.0);
}

TEST(Global, HeadingReversal) {
  std::vector<Quaternion> q(6, Quaternion::identity());
  for (std::size_t t = 3; t < 6; ++t) q[t] = Quaternion::from_axis_angle({0, 1, 0}, std::numbers::pi);
  const auto d = orientation_deviations(rotating_track(q), {});
  EXPECT_NEAR(d[2].heading, 2.0, 1e-12);
  EXPECT_NEAR(d[2].up, 0.0, 1e-12);
}

TEST(Global, ConstantOrientationIsPerfect) {
  const auto g = global_consistency(rotating_track(std::vector<Quaternion>(5, Quaternion::identity())), {});
  EXPECT_EQ(g.deviation, 0.0);
  EXPECT_EQ(g.score, 1.0);
  EXPECT_ERROR_KIND(global_consistency(rotating_track({Quaternion::identity()}), {}), ErrorKind::sequence_too_short);
}

TEST(KinConfig, Validation) {
  KinConfig c;
  c.phi_lambda_local = 0.0;
  EXPECT_ERROR_KIND(c.validate(), ErrorKind::input);
  c = {};
  c.forward_axis = {0, 1, 0};
  EXPECT_ERROR_KIND(c.validate(), ErrorKind::input);
  c = {};
  c.world_up = {0, 2, 0};
  EXPECT_ERROR_KIND(c.validate(), ErrorKind::input);
}

TEST(Motion, FusionAndTracks) {
  EXPECT_EQ(s_mot(0.5, 0.5), 0.25);
  EXPECT_EQ(q_mot(0.5, 0.4), 0.2);

  const auto cal = unit_calibration();
  const MotionTrack good = gen_smooth_track(1, 40, 30.0, 3);
  MotionTrack shorty = good;
  shorty.frames.resize(3);
  const std::vector<MotionTrack> tracks = {good, shorty};
  const MotionScores m = score_motion(tracks, {}, cal);
  ASSERT_EQ(m.tracks.size(), 2u);
  EXPECT_TRUE(m.tracks[0].scored);
  EXPECT_FALSE(m.tracks[1].scored);
  EXPECT_EQ(m.flags, std::vector<std::string>{std::string(flags::kShortSequence)});
  EXPECT_DOUBLE_EQ(m.s_mot, m.tracks[0].s_mot / 2.0);
  EXPECT_EQ(m.s_local_raw, m.tracks[0].local_raw);

  const MotionScores none = score_motion({}, {}, cal);
  EXPECT_EQ(none.s_mot, 0.0);
  EXPECT_EQ(none.flags, std::vector<std::string>{std::string(flags::kNoMotion)});
}
