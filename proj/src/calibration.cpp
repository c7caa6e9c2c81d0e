#include "humeval/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <json.hpp>

#include "humeval/error.hpp"
#include "humeval/feature_io.hpp"

namespace humeval {

using nlohmann::json;

namespace {

double percentile_of_sorted(const std::vector<double>& sorted, double p) {
  const double pos = p / 100.0 * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

CalibrationBounds fit_bounds(std::span<const double> raw_scores, Metric metric, std::string corpus_id,
                             std::optional<double> percentile) {
  if (raw_scores.empty()) throw Error(ErrorKind::input, "cannot calibrate on an empty sample");
  for (double v : raw_scores) {
    if (!std::isfinite(v)) throw Error(ErrorKind::input, "calibration sample contains a non-finite value");
  }

  CalibrationBounds bounds;
  bounds.metric = metric;
  bounds.corpus_id = std::move(corpus_id);
  bounds.sample_count = raw_scores.size();
  if (percentile) {
    if (!(*percentile >= 0.0 && *percentile < 50.0)) {
      throw Error(ErrorKind::input, "percentile must lie in [0, 50)");
    }
    std::vector<double> sorted(raw_scores.begin(), raw_scores.end());
    std::sort(sorted.begin(), sorted.end());
    bounds.min_real = percentile_of_sorted(sorted, *percentile);
    bounds.max_real = percentile_of_sorted(sorted, 100.0 - *percentile);
  } else {
    const auto [lo, hi] = std::minmax_element(raw_scores.begin(), raw_scores.end());
    bounds.min_real = *lo;
    bounds.max_real = *hi;
  }
  if (!(bounds.min_real < bounds.max_real)) {
    throw Error(ErrorKind::degenerate_calibration,
                "calibration for '" + std::string(to_string(metric)) + "' has zero width (min = max = " +
                    format_real(bounds.min_real) + ")");
  }
  return bounds;
}

double normalize(double raw, const CalibrationBounds& bounds) {
  const double t = (raw - bounds.min_real) / (bounds.max_real - bounds.min_real);
  return std::clamp(t, 0.0, 1.0);
}

void validate(const CalibrationBounds& bounds) {
  const std::string name(to_string(bounds.metric));
  if (!std::isfinite(bounds.min_real) || !std::isfinite(bounds.max_real)) {
    throw Error(ErrorKind::range, "calibration '" + name + "' has non-finite bounds");
  }
  if (!(bounds.min_real < bounds.max_real)) {
    throw Error(ErrorKind::degenerate_calibration, "calibration '" + name + "' requires min < max");
  }
  if (bounds.sample_count == 0) throw Error(ErrorKind::range, "calibration '" + name + "' has n = 0");
}

const CalibrationBounds& CalibrationSet::get(Metric metric) const {
  switch (metric) {
    case Metric::anat: return anat;
    case Metric::local: return local;
    case Metric::global: return global;
  }
  throw Error(ErrorKind::input, "unknown metric");
}

std::string serialize_calibration(const CalibrationSet& set) {
  json root = json::object();
  for (Metric m : {Metric::anat, Metric::local, Metric::global}) {
    const CalibrationBounds& b = set.get(m);
    root[std::string(to_string(m))] = {
        {"min", b.min_real}, {"max", b.max_real}, {"corpus_id", b.corpus_id}, {"n", b.sample_count}};
  }
  return root.dump(2) + "\n";
}

CalibrationSet parse_calibration(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::parse, std::string("malformed calibration JSON: ") + e.what());
  }
  if (!root.is_object()) throw Error(ErrorKind::schema, "calibration must be a JSON object");

  auto read = [&](Metric m) {
    const std::string name(to_string(m));
    auto it = root.find(name);
    if (it == root.end()) {
      throw Error(ErrorKind::incomplete_calibration, "calibration is missing the '" + name + "' record");
    }
    const json& rec = *it;
    auto field = [&](const char* key) -> const json& {
      if (!rec.is_object() || !rec.contains(key)) {
        throw Error(ErrorKind::schema, "calibration '" + name + "' is missing '" + key + "'");
      }
      return rec.at(key);
    };
    if (!field("min").is_number() || !field("max").is_number() || !field("n").is_number_integer() ||
        !field("corpus_id").is_string()) {
      throw Error(ErrorKind::schema, "calibration '" + name + "' has a mistyped field");
    }
    if (field("n").get<std::int64_t>() <= 0) throw Error(ErrorKind::range, "calibration '" + name + "' has n <= 0");
    CalibrationBounds b;
    b.metric = m;
    b.min_real = field("min").get<double>();
    b.max_real = field("max").get<double>();
    b.corpus_id = field("corpus_id").get<std::string>();
    b.sample_count = field("n").get<std::size_t>();
    validate(b);
    return b;
  };
  return {read(Metric::anat), read(Metric::local), read(Metric::global)};
}

void save_bounds(const std::filesystem::path& path, const CalibrationSet& set) {
  for (Metric m : {Metric::anat, Metric::local, Metric::global}) validate(set.get(m));
  write_file(path, serialize_calibration(set));
}

CalibrationSet load_bounds(const std::filesystem::path& path) { return parse_calibration(read_file(path)); }

}  // namespace humeval
