#include "humeval/report.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include <json.hpp>

#include "humeval/error.hpp"

namespace humeval {

using nlohmann::json;

namespace {

struct Field {
  const char* name;
  double ScoreReport::*member;
};

constexpr Field kFields[] = {
    {"s_prior", &ScoreReport::s_prior},           {"s_anat_raw", &ScoreReport::s_anat_raw},
    {"s_anat_norm", &ScoreReport::s_anat_norm},   {"q_anat", &ScoreReport::q_anat},
    {"s_local_raw", &ScoreReport::s_local_raw},   {"s_local_norm", &ScoreReport::s_local_norm},
    {"s_global_raw", &ScoreReport::s_global_raw}, {"s_global_norm", &ScoreReport::s_global_norm},
    {"s_mot", &ScoreReport::s_mot},               {"q_mot", &ScoreReport::q_mot},
};

}  // namespace

void validate(const ScoreReport& report) {
  for (const Field& f : kFields) {
    const double v = report.*f.member;
    if (!(v >= 0.0 && v <= 1.0)) {
      throw Error(ErrorKind::range, "report '" + report.video_id + "': " + f.name + " outside [0,1]");
    }
  }
  if (report.q_anat > std::min(report.s_prior, report.s_anat_norm)) {
    throw Error(ErrorKind::range, "report '" + report.video_id + "': q_anat exceeds its factors");
  }
  if (report.q_mot > std::min(report.s_prior, report.s_mot)) {
    throw Error(ErrorKind::range, "report '" + report.video_id + "': q_mot exceeds its factors");
  }
}

std::string serialize_report(const ScoreReport& report) {
  json obj = json::object();
  obj["video_id"] = report.video_id;
  obj["model_id"] = report.model_id;
  for (const Field& f : kFields) obj[f.name] = report.*f.member;
  obj["flags"] = report.flags;
  return obj.dump();
}

std::string serialize_reports(const std::vector<ScoreReport>& reports) {
  std::string out;
  for (const ScoreReport& r : reports) {
    out += serialize_report(r);
    out += '\n';
  }
  return out;
}

std::vector<ScoreReport> parse_reports(std::string_view text) {
  std::vector<ScoreReport> reports;
  std::unordered_set<std::string> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;

    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw Error(ErrorKind::parse, std::string("malformed report: ") + e.what(), line_no);
    }
    if (!obj.is_object() || !obj.contains("video_id") || !obj["video_id"].is_string()) {
      throw Error(ErrorKind::schema, "report needs a string video_id", line_no);
    }
    ScoreReport r;
    r.video_id = obj["video_id"].get<std::string>();
    if (obj.contains("model_id")) {
      if (!obj["model_id"].is_string()) throw Error(ErrorKind::schema, "model_id must be a string", line_no);
      r.model_id = obj["model_id"].get<std::string>();
    }
    for (const Field& f : kFields) {
      if (!obj.contains(f.name) || !obj[f.name].is_number()) {
        throw Error(ErrorKind::schema, std::string("report is missing numeric '") + f.name + "'", line_no);
      }
      r.*f.member = obj[f.name].get<double>();
    }
    if (obj.contains("flags")) {
      if (!obj["flags"].is_array()) throw Error(ErrorKind::schema, "flags must be an array", line_no);
      for (const json& flag : obj["flags"]) {
        if (!flag.is_string()) throw Error(ErrorKind::schema, "flags must be strings", line_no);
        r.flags.push_back(flag.get<std::string>());
      }
    }
    if (!seen.insert(r.video_id).second) {
      throw Error(ErrorKind::schema, "duplicate report for '" + r.video_id + "'", line_no);
    }
    try {
      validate(r);
    } catch (const Error& e) {
      throw Error(e.kind(), e.what(), line_no);
    }
    reports.push_back(std::move(r));
  }
  return reports;
}

}  // namespace humeval
