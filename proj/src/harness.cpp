#include "humeval/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <unordered_map>

#include <json.hpp>

#include "humeval/error.hpp"

namespace humeval {

namespace {

constexpr ScoreField kAllFields[] = {
    ScoreField::s_prior,      ScoreField::s_anat_raw,    ScoreField::s_anat_norm, ScoreField::q_anat,
    ScoreField::s_local_raw,  ScoreField::s_local_norm,  ScoreField::s_global_raw,
    ScoreField::s_global_norm, ScoreField::s_mot,        ScoreField::q_mot,
};

// Sum in sorted order so group means do not depend on input order.
double order_free_mean(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

std::optional<double> try_spearman(const std::vector<double>& x, const std::vector<double>& y) {
  try {
    return spearman_rho(x, y);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::undefined_correlation || e.kind() == ErrorKind::input) return std::nullopt;
    throw;
  }
}

std::string csv_rho(const std::optional<double>& rho) { return rho ? format_fixed3(*rho) : "undefined"; }

std::string display_model(const std::string& model_id) { return model_id.empty() ? "unassigned" : model_id; }

}  // namespace

std::string_view to_string(Dimension dimension) { return dimension == Dimension::acs ? "ACS" : "MSS"; }

std::optional<Dimension> dimension_from_string(std::string_view name) {
  if (name == "ACS") return Dimension::acs;
  if (name == "MSS") return Dimension::mss;
  return std::nullopt;
}

double rating_value(const HumanRatingRecord& rating, Dimension dimension) {
  return dimension == Dimension::acs ? rating.acs : rating.mss;
}

std::string_view to_string(ScoreField field) {
  switch (field) {
    case ScoreField::s_prior: return "s_prior";
    case ScoreField::s_anat_raw: return "s_anat_raw";
    case ScoreField::s_anat_norm: return "s_anat_norm";
    case ScoreField::q_anat: return "q_anat";
    case ScoreField::s_local_raw: return "s_local_raw";
    case ScoreField::s_local_norm: return "s_local_norm";
    case ScoreField::s_global_raw: return "s_global_raw";
    case ScoreField::s_global_norm: return "s_global_norm";
    case ScoreField::s_mot: return "s_mot";
    case ScoreField::q_mot: return "q_mot";
  }
  return "unknown";
}

std::optional<ScoreField> score_field_from_string(std::string_view name) {
  for (ScoreField f : kAllFields) {
    if (to_string(f) == name) return f;
  }
  return std::nullopt;
}

double score_value(const ScoreReport& r, ScoreField field) {
  switch (field) {
    case ScoreField::s_prior: return r.s_prior;
    case ScoreField::s_anat_raw: return r.s_anat_raw;
    case ScoreField::s_anat_norm: return r.s_anat_norm;
    case ScoreField::q_anat: return r.q_anat;
    case ScoreField::s_local_raw: return r.s_local_raw;
    case ScoreField::s_local_norm: return r.s_local_norm;
    case ScoreField::s_global_raw: return r.s_global_raw;
    case ScoreField::s_global_norm: return r.s_global_norm;
    case ScoreField::s_mot: return r.s_mot;
    case ScoreField::q_mot: return r.q_mot;
  }
  throw Error(ErrorKind::input, "unknown score field");
}

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i + 1;
    while (j < n && values[order[j]] == values[order[i]]) ++j;
    // positions i..j-1 hold ranks i+1..j
    const double rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
    i = j;
  }
  return ranks;
}

double spearman_rho(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorKind::length_mismatch, "spearman_rho needs equal-length inputs (" + std::to_string(x.size()) +
                                                " vs " + std::to_string(y.size()) + ")");
  }
  if (x.size() < 2) throw Error(ErrorKind::input, "spearman_rho needs at least 2 samples");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) throw Error(ErrorKind::input, "spearman_rho inputs must be finite");
  }

  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double mean = 0.5 * static_cast<double>(x.size() + 1);
  double cov = 0.0;
  double vx = 0.0;
  double vy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    const double dx = rx[i] - mean;
    const double dy = ry[i] - mean;
    cov += dx * dy;
    vx += dx * dx;
    vy += dy * dy;
  }
  if (vx == 0.0 || vy == 0.0) throw Error(ErrorKind::undefined_correlation, "spearman_rho of a constant vector");
  return std::clamp(cov / std::sqrt(vx * vy), -1.0, 1.0);
}

std::vector<Pairing> default_pairings() {
  return {{ScoreField::q_anat, Dimension::acs}, {ScoreField::q_mot, Dimension::mss}};
}

std::vector<Pairing> ablation_pairings() {
  const ScoreField scores[] = {ScoreField::s_prior, ScoreField::s_anat_norm, ScoreField::s_mot, ScoreField::q_anat,
                               ScoreField::q_mot};
  const Dimension dims[] = {Dimension::acs, Dimension::mss};
  return cross_pairings(scores, dims);
}

std::vector<Pairing> cross_pairings(std::span<const ScoreField> scores, std::span<const Dimension> dimensions) {
  std::vector<Pairing> out;
  for (Dimension d : dimensions) {
    for (ScoreField s : scores) out.push_back({s, d});
  }
  return out;
}

CorrelateOutput correlate(const std::vector<ScoreReport>& reports, const std::vector<HumanRatingRecord>& ratings,
                          const std::vector<Pairing>& pairings, const CorrelateOptions& options) {
  std::unordered_map<std::string, const ScoreReport*> by_id;
  for (const ScoreReport& r : reports) by_id.emplace(r.video_id, &r);

  CorrelateOutput out;
  std::vector<std::pair<const ScoreReport*, const HumanRatingRecord*>> joined;
  for (const HumanRatingRecord& rating : ratings) {
    auto it = by_id.find(rating.video_id);
    if (it == by_id.end()) {
      out.missing_video_ids.push_back(rating.video_id);
    } else {
      joined.emplace_back(it->second, &rating);
    }
  }
  std::sort(out.missing_video_ids.begin(), out.missing_video_ids.end());
  if (!out.missing_video_ids.empty() && !options.allow_missing) {
    std::string list;
    for (const auto& id : out.missing_video_ids) list += (list.empty() ? "" : ", ") + id;
    throw Error(ErrorKind::missing_data,
                std::to_string(out.missing_video_ids.size()) + " rated video(s) have no report: " + list);
  }

  auto emit = [&](const std::string& scope, const auto& rows) {
    for (const Pairing& p : pairings) {
      std::vector<double> scores;
      std::vector<double> human;
      for (const auto& [report, rating] : rows) {
        scores.push_back(score_value(*report, p.score));
        human.push_back(rating_value(*rating, p.dimension));
      }
      out.results.push_back({scope, std::string(to_string(p.score)), p.dimension, try_spearman(scores, human),
                             scores.size()});
    }
  };

  emit("pooled", joined);
  if (options.per_model) {
    std::map<std::string, std::vector<std::pair<const ScoreReport*, const HumanRatingRecord*>>> by_model;
    for (const auto& row : joined) by_model[row.second->model_id].push_back(row);
    for (const auto& [model, rows] : by_model) emit("model:" + model, rows);
  }
  return out;
}

void assign_models(std::vector<ScoreReport>& reports, const std::vector<HumanRatingRecord>& ratings) {
  std::unordered_map<std::string, const HumanRatingRecord*> by_id;
  for (const HumanRatingRecord& r : ratings) by_id.emplace(r.video_id, &r);
  for (ScoreReport& report : reports) {
    if (!report.model_id.empty()) continue;
    if (auto it = by_id.find(report.video_id); it != by_id.end()) report.model_id = it->second->model_id;
  }
}

std::vector<LeaderboardRow> leaderboard(const std::vector<ScoreReport>& reports) {
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> groups;
  for (const ScoreReport& r : reports) {
    auto& g = groups[display_model(r.model_id)];
    g.first.push_back(r.q_anat);
    g.second.push_back(r.q_mot);
  }
  std::vector<LeaderboardRow> rows;
  for (auto& [model, g] : groups) {
    rows.push_back({model, g.first.size(), order_free_mean(g.first), order_free_mean(g.second)});
  }
  std::sort(rows.begin(), rows.end(), [](const LeaderboardRow& a, const LeaderboardRow& b) {
    if (a.q_mot != b.q_mot) return a.q_mot > b.q_mot;
    return a.model_id < b.model_id;
  });
  return rows;
}

std::vector<CategoryRow> category_breakdown(const std::vector<ScoreReport>& reports,
                                            const std::vector<HumanRatingRecord>& ratings, bool allow_missing) {
  std::unordered_map<std::string, const HumanRatingRecord*> by_id;
  for (const HumanRatingRecord& r : ratings) by_id.emplace(r.video_id, &r);

  std::map<std::pair<Category, std::string>, std::pair<std::vector<double>, std::vector<double>>> groups;
  std::vector<std::string> unlabeled;
  for (const ScoreReport& report : reports) {
    auto it = by_id.find(report.video_id);
    if (it == by_id.end()) {
      unlabeled.push_back(report.video_id);
      continue;
    }
    auto& g = groups[{it->second->category, display_model(it->second->model_id)}];
    g.first.push_back(report.q_anat);
    g.second.push_back(report.q_mot);
  }
  if (!unlabeled.empty() && !allow_missing) {
    std::sort(unlabeled.begin(), unlabeled.end());
    throw Error(ErrorKind::missing_data,
                std::to_string(unlabeled.size()) + " report(s) have no category label, first: " + unlabeled.front());
  }

  std::vector<CategoryRow> rows;
  for (auto& [key, g] : groups) {
    rows.push_back({key.first, key.second, g.first.size(), order_free_mean(g.first), order_free_mean(g.second)});
  }
  return rows;
}

std::string format_fixed3(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", value);
  // Avoid a "-0.000" cell for tiny negative correlations.
  if (std::string_view(buf) == "-0.000") return "0.000";
  return buf;
}

std::string correlations_csv(const std::vector<CorrelationResult>& results) {
  std::string out = "scope,metric,dimension,rho,n\n";
  for (const CorrelationResult& r : results) {
    out += r.scope + ',' + r.metric_name + ',' + std::string(to_string(r.dimension)) + ',' + csv_rho(r.rho) + ',' +
           std::to_string(r.n) + '\n';
  }
  return out;
}

std::string leaderboard_csv(const std::vector<LeaderboardRow>& rows) {
  std::string out = "rank,model_id,n,q_anat,q_mot\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    out += std::to_string(i + 1) + ',' + r.model_id + ',' + std::to_string(r.n) + ',' + format_fixed3(r.q_anat) +
           ',' + format_fixed3(r.q_mot) + '\n';
  }
  return out;
}

std::string leaderboard_table(const std::vector<LeaderboardRow>& rows) {
  std::size_t width = std::string_view("Model").size();
  for (const auto& r : rows) width = std::max(width, r.model_id.size());
  char line[256];
  std::string out;
  std::snprintf(line, sizeof line, "%-4s  %-*s  %5s  %7s  %7s\n", "Rank", static_cast<int>(width), "Model", "N",
                "Q_Anat", "Q_Mot");
  out += line;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    std::snprintf(line, sizeof line, "%-4zu  %-*s  %5zu  %7s  %7s\n", i + 1, static_cast<int>(width),
                  r.model_id.c_str(), r.n, format_fixed3(r.q_anat).c_str(), format_fixed3(r.q_mot).c_str());
    out += line;
  }
  return out;
}

std::string categories_csv(const std::vector<CategoryRow>& rows) {
  std::string out = "category,model_id,n,q_anat,q_mot\n";
  for (const CategoryRow& r : rows) {
    out += std::string(to_string(r.category)) + ',' + r.model_id + ',' + std::to_string(r.n) + ',' +
           format_fixed3(r.q_anat) + ',' + format_fixed3(r.q_mot) + '\n';
  }
  return out;
}

std::string category_plot_json(const std::vector<CategoryRow>& rows) {
  using nlohmann::json;
  std::map<std::string, std::pair<json, json>> series;
  for (const CategoryRow& r : rows) {
    auto [it, inserted] = series.try_emplace(r.model_id);
    if (inserted) {
      it->second.first = json::array();
      it->second.second = json::array();
      for (std::size_t i = 0; i < std::size(kAllCategories); ++i) {
        it->second.first.push_back(nullptr);
        it->second.second.push_back(nullptr);
      }
    }
    const auto idx = static_cast<std::size_t>(r.category);
    it->second.first[idx] = std::round(r.q_anat * 1000.0) / 1000.0;
    it->second.second[idx] = std::round(r.q_mot * 1000.0) / 1000.0;
  }
  json root;
  root["categories"] = json::array();
  for (Category c : kAllCategories) root["categories"].push_back(std::string(to_string(c)));
  root["series"] = json::array();
  for (auto& [model, values] : series) {
    root["series"].push_back({{"model_id", model}, {"q_anat", values.first}, {"q_mot", values.second}});
  }
  return root.dump(2) + "\n";
}

}  // namespace humeval
