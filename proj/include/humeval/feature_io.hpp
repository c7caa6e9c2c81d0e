#pragma once

// Feature-file formats. Every external model output enters the engine
// through one of these parsers; all type invariants are enforced here.
//
//   *.kps.ndjson   line 1: {"fps":F,"video_id":S}
//                  then one frame per line:
//                  {"frame_index":N,"persons":[{"keypoints":[[x,y,c],...133]}]}
//   *.mot.ndjson   line 1: {"fps":F,"joint_count":J,"person_id":S,"video_id":S}
//                  then one frame per line:
//                  {"joint_angles":[[ax,ay,az],...J],"root_rotation":[w,x,y,z]}
//   *.vlm.json     {"negative_logit":L,"positive_logit":L,"video_id":S}
//   ratings.csv    video_id,model_id,category,acs,mss
//
// Canonical serialization sorts object keys and prints reals with 9
// significant digits, so parse(serialize(x)) re-serializes to the same bytes.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "humeval/types.hpp"

namespace humeval {

inline constexpr int kCanonicalDigits = 9;
inline constexpr double kUnitQuaternionTolerance = 1e-6;

KeypointStream parse_keypoint_stream(std::string_view text);
MotionTrack parse_motion_track(std::string_view text);
VlmPriorRecord parse_vlm_record(std::string_view text);
std::vector<HumanRatingRecord> parse_ratings(std::string_view text);

std::string serialize_keypoint_stream(const KeypointStream& stream);
std::string serialize_motion_track(const MotionTrack& track);
std::string serialize_vlm_record(const VlmPriorRecord& record);
std::string serialize_ratings(const std::vector<HumanRatingRecord>& ratings);

/// Compact JSON with sorted keys and `%.<digits>g` reals.
std::string canonical_dump(const nlohmann::json& value, int digits = kCanonicalDigits);
std::string format_real(double value, int digits = kCanonicalDigits);

/// Reads the header line of a `.kps.ndjson`/`.mot.ndjson` file, or the whole
/// object of a `.vlm.json`, and returns its video_id.
std::string peek_video_id(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace humeval
