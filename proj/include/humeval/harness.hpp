#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "humeval/types.hpp"

namespace humeval {

/// Human rating dimensions: anatomical correctness and motion smoothness.
enum class Dimension { acs, mss };

std::string_view to_string(Dimension dimension);
std::optional<Dimension> dimension_from_string(std::string_view name);
double rating_value(const HumanRatingRecord& rating, Dimension dimension);

/// Score columns of a ScoreReport, named as in the reports file.
enum class ScoreField {
  s_prior,
  s_anat_raw,
  s_anat_norm,
  q_anat,
  s_local_raw,
  s_local_norm,
  s_global_raw,
  s_global_norm,
  s_mot,
  q_mot,
};

std::string_view to_string(ScoreField field);
std::optional<ScoreField> score_field_from_string(std::string_view name);
double score_value(const ScoreReport& report, ScoreField field);

/// 1-based ranks; tied values share the average of the ranks they span.
std::vector<double> average_ranks(std::span<const double> values);

/// Pearson correlation of the average-rank vectors.
/// Throws ErrorKind::length_mismatch, ErrorKind::input (n < 2) or
/// ErrorKind::undefined_correlation (a constant side).
double spearman_rho(std::span<const double> x, std::span<const double> y);

struct CorrelationResult {
  std::string scope = "pooled";  ///< "pooled", or "model:<id>" for the per-model extension
  std::string metric_name;
  Dimension dimension = Dimension::acs;
  std::optional<double> rho;     ///< nullopt when one side is constant
  std::size_t n = 0;
};

struct Pairing {
  ScoreField score;
  Dimension dimension;
};

/// q_anat against ACS and q_mot against MSS.
std::vector<Pairing> default_pairings();
/// Every dimension against S_Prior, normalized S_Anat and S_Mot alone and
/// against both fused scores.
std::vector<Pairing> ablation_pairings();
std::vector<Pairing> cross_pairings(std::span<const ScoreField> scores, std::span<const Dimension> dimensions);

struct CorrelateOptions {
  bool allow_missing = false;
  bool per_model = false;  ///< also emit one row per model (not part of the pooled protocol)
};

struct CorrelateOutput {
  std::vector<CorrelationResult> results;
  std::vector<std::string> missing_video_ids;  ///< rated videos without a report
};

/// Joins reports and ratings on video_id and emits one pooled result per
/// pairing. Rated videos without a report raise ErrorKind::missing_data
/// unless `allow_missing` is set, in which case they are skipped and listed.
CorrelateOutput correlate(const std::vector<ScoreReport>& reports, const std::vector<HumanRatingRecord>& ratings,
                          const std::vector<Pairing>& pairings, const CorrelateOptions& options = {});

/// Fills empty report model_ids from the ratings.
void assign_models(std::vector<ScoreReport>& reports, const std::vector<HumanRatingRecord>& ratings);

struct LeaderboardRow {
  std::string model_id;
  std::size_t n = 0;
  double q_anat = 0.0;
  double q_mot = 0.0;
};

/// Per-model means, sorted by Q_Mot descending then model_id.
std::vector<LeaderboardRow> leaderboard(const std::vector<ScoreReport>& reports);

struct CategoryRow {
  Category category = Category::bmo_simple;
  std::string model_id;
  std::size_t n = 0;
  double q_anat = 0.0;
  double q_mot = 0.0;
};

/// Per-(category, model) means. Categories and model ids come from the
/// ratings; every report must have a rating unless `allow_missing`.
std::vector<CategoryRow> category_breakdown(const std::vector<ScoreReport>& reports,
                                            const std::vector<HumanRatingRecord>& ratings,
                                            bool allow_missing = false);

std::string correlations_csv(const std::vector<CorrelationResult>& results);
std::string leaderboard_csv(const std::vector<LeaderboardRow>& rows);
std::string leaderboard_table(const std::vector<LeaderboardRow>& rows);
std::string categories_csv(const std::vector<CategoryRow>& rows);
/// {"categories":[...],"series":[{"model_id":..,"q_anat":[..],"q_mot":[..]}]},
/// one entry per category, null where a model has no videos in it.
std::string category_plot_json(const std::vector<CategoryRow>& rows);

/// Fixed three-decimal formatting used in every table.
std::string format_fixed3(double value);

}  // namespace humeval
