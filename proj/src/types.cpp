#include "humeval/types.hpp"

#include <algorithm>

namespace humeval {

std::string_view to_string(Metric metric) {
  switch (metric) {
    case Metric::anat: return "anat";
    case Metric::local: return "local";
    case Metric::global: return "global";
  }
  return "unknown";
}

std::optional<Metric> metric_from_string(std::string_view name) {
  for (Metric m : {Metric::anat, Metric::local, Metric::global}) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

std::string_view to_string(Category category) {
  switch (category) {
    case Category::bmo_simple: return "BMO_SIMPLE";
    case Category::bmo_skill: return "BMO_SKILL";
    case Category::hoi: return "HOI";
    case Category::hhi: return "HHI";
  }
  return "UNKNOWN";
}

std::optional<Category> category_from_string(std::string_view name) {
  for (Category c : kAllCategories) {
    if (to_string(c) == name) return c;
  }
  return std::nullopt;
}

bool ScoreReport::has_flag(std::string_view flag) const {
  return std::find(flags.begin(), flags.end(), flag) != flags.end();
}

void ScoreReport::add_flag(std::string_view flag) {
  if (!has_flag(flag)) flags.emplace_back(flag);
}

}  // namespace humeval
