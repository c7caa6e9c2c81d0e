#include "humeval/anatomical.hpp"

#include <algorithm>
#include <cmath>

#include "humeval/error.hpp"

namespace humeval {

namespace {

// Incremental mean; returns the input exactly when every sample is equal.
class RunningMean {
 public:
  void add(double x) {
    ++count_;
    mean_ += (x - mean_) / static_cast<double>(count_);
  }
  double value() const { return mean_; }
  std::size_t count() const { return count_; }

 private:
  double mean_ = 0.0;
  std::size_t count_ = 0;
};

}  // namespace

PartGrouping::PartGrouping(std::vector<PartRange> parts) : parts_(std::move(parts)) {
  std::vector<const PartRange*> sorted;
  for (const PartRange& p : parts_) {
    if (p.begin >= p.end) throw Error(ErrorKind::input, "part '" + p.name + "' is empty");
    sorted.push_back(&p);
  }
  std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->begin < b->begin; });
  std::size_t next = 0;
  for (const PartRange* p : sorted) {
    if (p->begin != next) throw Error(ErrorKind::input, "part ranges must be disjoint and contiguous");
    next = p->end;
  }
  if (next != kWholeBodyKeypointCount) {
    throw Error(ErrorKind::input, "part ranges must cover all whole-body keypoints");
  }
}

const PartGrouping& PartGrouping::whole_body() {
  static const PartGrouping grouping({{"body", 0, 17},
                                      {"feet", 17, 23},
                                      {"face", 23, 91},
                                      {"left_hand", 91, 112},
                                      {"right_hand", 112, 133}});
  return grouping;
}

const PartRange* PartGrouping::find(std::string_view name) const {
  for (const PartRange& p : parts_) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

void AnatConfig::validate() const {
  if (!(tau > 0.0 && tau < 1.0)) throw Error(ErrorKind::input, "tau must lie in (0, 1)");
}

std::optional<double> person_anat_score(const PersonKeypoints& person, const PartGrouping& grouping,
                                        const AnatConfig& cfg) {
  RunningMean visible;
  for (const PartRange& part : grouping.parts()) {
    RunningMean part_mean;
    for (std::size_t i = part.begin; i < part.end; ++i) part_mean.add(person.keypoints[i].confidence);
    if (part_mean.value() > cfg.tau) {
      for (std::size_t i = part.begin; i < part.end; ++i) visible.add(person.keypoints[i].confidence);
    }
  }
  if (visible.count() == 0) return std::nullopt;
  return visible.value();
}

FrameAnatScore frame_anat_score(const KeypointFrame& frame, const PartGrouping& grouping, const AnatConfig& cfg) {
  RunningMean persons;
  for (const PersonKeypoints& person : frame.persons) {
    if (auto s = person_anat_score(person, grouping, cfg)) persons.add(*s);
  }
  return {persons.value(), persons.count()};
}

AnatResult video_anat_score(const KeypointStream& stream, const PartGrouping& grouping, const AnatConfig& cfg) {
  if (stream.frames.empty()) throw Error(ErrorKind::input, "keypoint stream has no frames");
  cfg.validate();

  AnatResult result;
  RunningMean frames;
  for (const KeypointFrame& frame : stream.frames) {
    const FrameAnatScore s = frame_anat_score(frame, grouping, cfg);
    if (s.visible_persons == 0) ++result.frames_without_person;
    frames.add(s.score);
  }
  result.score = frames.value();
  if (result.frames_without_person == stream.frames.size()) {
    result.flags.emplace_back(flags::kNoPersonDetected);
  } else if (result.frames_without_person > 0) {
    result.flags.emplace_back(flags::kNoPersonVisible);
  }
  return result;
}

double q_anat(double s_prior, double s_anat_norm) {
  if (!(s_prior >= 0.0 && s_prior <= 1.0) || !(s_anat_norm >= 0.0 && s_anat_norm <= 1.0)) {
    throw Error(ErrorKind::input, "q_anat arguments must lie in [0, 1]");
  }
  return s_prior * s_anat_norm;
}

}  // namespace humeval
