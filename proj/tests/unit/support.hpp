#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <random>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

#include "humeval/error.hpp"
#include "humeval/types.hpp"

namespace humeval::test {

/// Runs `fn` and returns the kind of the humeval::Error it throws.
inline std::optional<ErrorKind> error_kind(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

#define EXPECT_ERROR_KIND(expr, kind) EXPECT_EQ(::humeval::test::error_kind([&] { (void)(expr); }), kind)

inline KeypointStream uniform_stream(double confidence, std::size_t frames = 3, std::size_t persons = 1) {
  KeypointStream s;
  s.video_id = "v";
  s.fps = 30.0;
  for (std::size_t f = 0; f < frames; ++f) {
    KeypointFrame frame;
    frame.frame_index = f;
    for (std::size_t p = 0; p < persons; ++p) {
      PersonKeypoints person;
      person.keypoints.assign(kWholeBodyKeypointCount, Keypoint{10.0, 20.0, confidence});
      frame.persons.push_back(person);
    }
    s.frames.push_back(frame);
  }
  return s;
}

/// One joint whose three components all follow theta, identity root.
inline MotionTrack scalar_track(const std::vector<double>& theta, double fps = 30.0) {
  MotionTrack t;
  t.video_id = "v";
  t.person_id = "p0";
  t.fps = fps;
  for (double v : theta) t.frames.push_back({Quaternion::identity(), {Vec3{v, v, v}}});
  return t;
}

/// A fresh, empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::mt19937_64 gen(std::random_device{}());
    path_ = std::filesystem::temp_directory_path() / ("humeval_" + tag + "_" + std::to_string(gen()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace humeval::test
