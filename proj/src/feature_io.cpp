#include "humeval/feature_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "humeval/error.hpp"

namespace humeval {

using nlohmann::json;

namespace {

// Quaternions within this distance of unit norm are stored as written; the
// canonical 9-digit format cannot represent a unit quaternion more exactly,
// and renormalizing would break byte-stable reserialization.
constexpr double kVerbatimNormSlack = 1e-8;

struct Line {
  std::size_t number;
  std::string_view text;
};

bool is_blank(std::string_view s) {
  return s.find_first_not_of(" \t\r\n") == std::string_view::npos;
}

std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> lines;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = text.find('\n', pos);
    std::string_view line = text.substr(pos, end == std::string_view::npos ? text.size() - pos : end - pos);
    ++number;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!is_blank(line)) lines.push_back({number, line});
    if (end == std::string_view::npos) break;
    pos = end + 1;
  }
  return lines;
}

json parse_json(std::string_view text, std::optional<std::size_t> line) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::parse, std::string("malformed JSON: ") + e.what(), line);
  }
}

const json& require_field(const json& obj, const char* key, std::optional<std::size_t> line) {
  if (!obj.is_object()) throw Error(ErrorKind::schema, "expected a JSON object", line);
  auto it = obj.find(key);
  if (it == obj.end()) throw Error(ErrorKind::schema, std::string("missing field '") + key + "'", line);
  return *it;
}

double as_real(const json& value, const std::string& what, std::optional<std::size_t> line) {
  if (!value.is_number()) throw Error(ErrorKind::schema, what + " must be a number", line);
  const double v = value.get<double>();
  if (!std::isfinite(v)) throw Error(ErrorKind::range, what + " must be finite", line);
  return v;
}

std::string as_string(const json& value, const std::string& what, std::optional<std::size_t> line) {
  if (!value.is_string()) throw Error(ErrorKind::schema, what + " must be a string", line);
  return value.get<std::string>();
}

std::uint64_t as_index(const json& value, const std::string& what, std::optional<std::size_t> line) {
  if (value.is_number_unsigned()) return value.get<std::uint64_t>();
  if (value.is_number_integer()) {
    if (value.get<std::int64_t>() < 0) throw Error(ErrorKind::range, what + " must be non-negative", line);
    return static_cast<std::uint64_t>(value.get<std::int64_t>());
  }
  throw Error(ErrorKind::schema, what + " must be a non-negative integer", line);
}

double positive_fps(const json& header, std::optional<std::size_t> line) {
  const double fps = as_real(require_field(header, "fps", line), "fps", line);
  if (!(fps > 0.0)) throw Error(ErrorKind::range, "fps must be > 0", line);
  return fps;
}

const json& as_array(const json& value, const std::string& what, std::optional<std::size_t> line) {
  if (!value.is_array()) throw Error(ErrorKind::schema, what + " must be an array", line);
  return value;
}

Keypoint parse_keypoint(const json& value, std::size_t index, std::size_t line) {
  const std::string what = "keypoint " + std::to_string(index);
  const json& arr = as_array(value, what, line);
  if (arr.size() != 3) throw Error(ErrorKind::schema, what + " must be [x, y, confidence]", line);
  Keypoint kp{as_real(arr[0], what + " x", line), as_real(arr[1], what + " y", line),
              as_real(arr[2], what + " confidence", line)};
  if (kp.confidence < 0.0 || kp.confidence > 1.0) {
    throw Error(ErrorKind::range, what + " confidence outside [0,1]", line);
  }
  return kp;
}

PersonKeypoints parse_person(const json& value, std::size_t line) {
  const json& kps = as_array(require_field(value, "keypoints", line), "keypoints", line);
  if (kps.size() != kWholeBodyKeypointCount) {
    throw Error(ErrorKind::schema,
                "person has " + std::to_string(kps.size()) + " keypoints, expected " +
                    std::to_string(kWholeBodyKeypointCount),
                line);
  }
  PersonKeypoints person;
  person.keypoints.reserve(kps.size());
  for (std::size_t i = 0; i < kps.size(); ++i) person.keypoints.push_back(parse_keypoint(kps[i], i, line));
  return person;
}

Quaternion parse_rotation(const json& value, std::size_t line) {
  const json& arr = as_array(value, "root_rotation", line);
  if (arr.size() != 4) throw Error(ErrorKind::schema, "root_rotation must be [w, x, y, z]", line);
  Quaternion q{as_real(arr[0], "root_rotation w", line), as_real(arr[1], "root_rotation x", line),
               as_real(arr[2], "root_rotation y", line), as_real(arr[3], "root_rotation z", line)};
  const double n = q.norm();
  if (!(std::abs(n - 1.0) <= kUnitQuaternionTolerance)) {
    throw Error(ErrorKind::range, "root_rotation is not a unit quaternion (norm " + format_real(n) + ")", line);
  }
  if (std::abs(n - 1.0) > kVerbatimNormSlack) q = q.normalized();
  return q;
}

Vec3 parse_axis_angle(const json& value, std::size_t joint, std::size_t line) {
  const std::string what = "joint " + std::to_string(joint);
  const json& arr = as_array(value, what, line);
  if (arr.size() != 3) throw Error(ErrorKind::schema, what + " must be an axis-angle triple", line);
  return {as_real(arr[0], what, line), as_real(arr[1], what, line), as_real(arr[2], what, line)};
}

json real_array(std::initializer_list<double> values) {
  json arr = json::array();
  for (double v : values) arr.push_back(v);
  return arr;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_csv_real(const std::string& field, const char* what, std::size_t line) {
  if (field.empty()) throw Error(ErrorKind::parse, std::string(what) + " is empty", line);
  char* end = nullptr;
  const double v = std::strtod(field.c_str(), &end);
  if (end != field.c_str() + field.size()) {
    throw Error(ErrorKind::parse, std::string(what) + " is not a number: '" + field + "'", line);
  }
  if (!std::isfinite(v)) throw Error(ErrorKind::range, std::string(what) + " must be finite", line);
  return v;
}

}  // namespace

std::string format_real(double value, int digits) {
  if (!std::isfinite(value)) throw Error(ErrorKind::range, "cannot serialize a non-finite real");
  if (value == 0.0) value = 0.0;  // drop the sign of -0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, value);
  return buf;
}

std::string canonical_dump(const json& value, int digits) {
  switch (value.type()) {
    case json::value_t::number_float:
      return format_real(value.get<double>(), digits);
    case json::value_t::array: {
      std::string out = "[";
      for (std::size_t i = 0; i < value.size(); ++i) {
        if (i) out += ',';
        out += canonical_dump(value[i], digits);
      }
      return out + "]";
    }
    case json::value_t::object: {
      // nlohmann::json objects are std::map backed, so iteration is key-sorted.
      std::string out = "{";
      bool first = true;
      for (const auto& [key, item] : value.items()) {
        if (!first) out += ',';
        first = false;
        out += json(key).dump();
        out += ':';
        out += canonical_dump(item, digits);
      }
      return out + "}";
    }
    default:
      return value.dump();
  }
}

KeypointStream parse_keypoint_stream(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw Error(ErrorKind::schema, "keypoint stream is empty");

  const Line& head = lines.front();
  const json header = parse_json(head.text, head.number);
  KeypointStream stream;
  stream.video_id = as_string(require_field(header, "video_id", head.number), "video_id", head.number);
  stream.fps = positive_fps(header, head.number);

  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t ln = lines[i].number;
    const json obj = parse_json(lines[i].text, ln);
    KeypointFrame frame;
    frame.frame_index = as_index(require_field(obj, "frame_index", ln), "frame_index", ln);
    if (auto it = obj.find("video_id"); it != obj.end() &&
                                        as_string(*it, "video_id", ln) != stream.video_id) {
      throw Error(ErrorKind::schema, "frame references a different video_id", ln);
    }
    if (!stream.frames.empty() && frame.frame_index <= stream.frames.back().frame_index) {
      throw Error(ErrorKind::ordering,
                  "frame_index " + std::to_string(frame.frame_index) + " does not follow " +
                      std::to_string(stream.frames.back().frame_index),
                  ln);
    }
    for (const json& person : as_array(require_field(obj, "persons", ln), "persons", ln)) {
      frame.persons.push_back(parse_person(person, ln));
    }
    stream.frames.push_back(std::move(frame));
  }
  if (stream.frames.empty()) throw Error(ErrorKind::schema, "keypoint stream has no frames");
  return stream;
}

MotionTrack parse_motion_track(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw Error(ErrorKind::schema, "motion track is empty");

  const Line& head = lines.front();
  const json header = parse_json(head.text, head.number);
  MotionTrack track;
  track.video_id = as_string(require_field(header, "video_id", head.number), "video_id", head.number);
  track.person_id = as_string(require_field(header, "person_id", head.number), "person_id", head.number);
  track.fps = positive_fps(header, head.number);
  std::size_t joints = kDefaultJointCount;
  if (auto it = header.find("joint_count"); it != header.end()) {
    joints = as_index(*it, "joint_count", head.number);
    if (joints == 0) throw Error(ErrorKind::range, "joint_count must be positive", head.number);
  }

  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t ln = lines[i].number;
    const json obj = parse_json(lines[i].text, ln);
    MotionFrame frame;
    frame.root_rotation = parse_rotation(require_field(obj, "root_rotation", ln), ln);
    const json& angles = as_array(require_field(obj, "joint_angles", ln), "joint_angles", ln);
    if (angles.size() != joints) {
      throw Error(ErrorKind::schema,
                  "frame has " + std::to_string(angles.size()) + " joints, expected " + std::to_string(joints),
                  ln);
    }
    frame.joint_angles.reserve(joints);
    for (std::size_t j = 0; j < joints; ++j) frame.joint_angles.push_back(parse_axis_angle(angles[j], j, ln));
    track.frames.push_back(std::move(frame));
  }
  if (track.frames.empty()) throw Error(ErrorKind::schema, "motion track has no frames");
  return track;
}

VlmPriorRecord parse_vlm_record(std::string_view text) {
  const json obj = parse_json(text, std::nullopt);
  VlmPriorRecord record;
  record.video_id = as_string(require_field(obj, "video_id", std::nullopt), "video_id", std::nullopt);
  record.positive_logit = as_real(require_field(obj, "positive_logit", std::nullopt), "positive_logit", std::nullopt);
  record.negative_logit = as_real(require_field(obj, "negative_logit", std::nullopt), "negative_logit", std::nullopt);
  return record;
}

std::vector<HumanRatingRecord> parse_ratings(std::string_view text) {
  static constexpr std::string_view kHeader = "video_id,model_id,category,acs,mss";
  const auto lines = split_lines(text);
  if (lines.empty() || trim(lines.front().text) != kHeader) {
    throw Error(ErrorKind::schema, "ratings header must be '" + std::string(kHeader) + "'",
                lines.empty() ? std::optional<std::size_t>{} : lines.front().number);
  }

  std::vector<HumanRatingRecord> records;
  std::unordered_set<std::string> seen;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t ln = lines[i].number;
    std::vector<std::string> fields;
    std::stringstream row{std::string(lines[i].text)};
    for (std::string field; std::getline(row, field, ',');) fields.push_back(trim(field));
    if (lines[i].text.back() == ',') fields.emplace_back();
    if (fields.size() != 5) {
      throw Error(ErrorKind::parse, "expected 5 fields, got " + std::to_string(fields.size()), ln);
    }

    HumanRatingRecord rec;
    rec.video_id = fields[0];
    rec.model_id = fields[1];
    if (rec.video_id.empty()) throw Error(ErrorKind::schema, "empty video_id", ln);
    if (!seen.insert(rec.video_id).second) {
      throw Error(ErrorKind::schema, "duplicate video_id '" + rec.video_id + "'", ln);
    }
    const auto category = category_from_string(fields[2]);
    if (!category) throw Error(ErrorKind::schema, "unknown category '" + fields[2] + "'", ln);
    rec.category = *category;
    rec.acs = parse_csv_real(fields[3], "acs", ln);
    rec.mss = parse_csv_real(fields[4], "mss", ln);
    if (rec.acs < 1.0 || rec.acs > 5.0) throw Error(ErrorKind::range, "acs outside [1,5]", ln);
    if (rec.mss < 1.0 || rec.mss > 5.0) throw Error(ErrorKind::range, "mss outside [1,5]", ln);
    records.push_back(std::move(rec));
  }
  return records;
}

std::string serialize_keypoint_stream(const KeypointStream& stream) {
  std::string out = canonical_dump(json{{"video_id", stream.video_id}, {"fps", stream.fps}});
  out += '\n';
  for (const KeypointFrame& frame : stream.frames) {
    json persons = json::array();
    for (const PersonKeypoints& person : frame.persons) {
      json kps = json::array();
      for (const Keypoint& kp : person.keypoints) kps.push_back(real_array({kp.x, kp.y, kp.confidence}));
      persons.push_back(json{{"keypoints", std::move(kps)}});
    }
    out += canonical_dump(json{{"frame_index", frame.frame_index}, {"persons", std::move(persons)}});
    out += '\n';
  }
  return out;
}

std::string serialize_motion_track(const MotionTrack& track) {
  std::string out = canonical_dump(json{{"video_id", track.video_id},
                                        {"person_id", track.person_id},
                                        {"fps", track.fps},
                                        {"joint_count", track.joint_count()}});
  out += '\n';
  for (const MotionFrame& frame : track.frames) {
    const Quaternion& q = frame.root_rotation;
    json angles = json::array();
    for (const Vec3& a : frame.joint_angles) angles.push_back(real_array({a.x, a.y, a.z}));
    out += canonical_dump(json{{"root_rotation", real_array({q.w, q.x, q.y, q.z})},
                               {"joint_angles", std::move(angles)}});
    out += '\n';
  }
  return out;
}

std::string serialize_vlm_record(const VlmPriorRecord& record) {
  return canonical_dump(json{{"video_id", record.video_id},
                             {"positive_logit", record.positive_logit},
                             {"negative_logit", record.negative_logit}}) +
         "\n";
}

std::string serialize_ratings(const std::vector<HumanRatingRecord>& ratings) {
  std::string out = "video_id,model_id,category,acs,mss\n";
  for (const HumanRatingRecord& r : ratings) {
    out += r.video_id + ',' + r.model_id + ',' + std::string(to_string(r.category)) + ',' + format_real(r.acs) +
           ',' + format_real(r.mss) + '\n';
  }
  return out;
}

std::string peek_video_id(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  const std::string name = path.filename().string();
  const bool ndjson = name.size() >= 7 && name.compare(name.size() - 7, 7, ".ndjson") == 0;
  json obj;
  if (ndjson) {
    const auto lines = split_lines(text);
    if (lines.empty()) throw Error(ErrorKind::schema, path.string() + ": empty file");
    obj = parse_json(lines.front().text, lines.front().number);
  } else {
    obj = parse_json(text, std::nullopt);
  }
  return as_string(require_field(obj, "video_id", 1), "video_id", 1);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, "cannot write '" + path.string() + "'");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error(ErrorKind::io, "write failed for '" + path.string() + "'");
}

}  // namespace humeval
