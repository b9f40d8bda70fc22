// Copyright 2026 The egoskill Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "egoskill/session_model.hpp"
#include "egoskill/stats.hpp"

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace egoskill {

struct FeatureStat {
  std::optional<double> mean;  // over defined values only
  std::size_t count = 0;       // number of defined values
};

/// Session-level means aligned with feature_names().
struct SessionSummary {
  std::string session_id;
  std::size_t n_units = 0;
  std::vector<FeatureStat> stats;
  double total_dur_G = 0.0;
  double total_dur_H = 0.0;
  double total_dur_O = 0.0;
  double search_fraction = 0.0;  // share of units with a search gaze pattern
  double early_fraction = 0.0;   // share of units with a defined R that are early

  const FeatureStat& stat(const std::string& feature) const;
};

/// Throws InputError on an empty feature list.
SessionSummary session_feature_summary(std::span<const FeatureVector> features, std::string session_id = {});

struct SessionPair {
  std::string operator_id;
  std::string earlier;
  std::string later;

  bool operator==(const SessionPair&) const = default;
};

/// `operator,earlier,later` with header row.
std::vector<SessionPair> parse_pair_manifest(std::istream& in);
void write_pair_manifest(std::ostream& out, std::span<const SessionPair> pairs);

struct FeatureComparison {
  std::string feature;
  std::optional<double> mean_delta_pct;
  std::vector<std::pair<std::string, double>> per_pair;  // operator -> delta %
  std::size_t n_pairs = 0;
  std::size_t n_later_smaller = 0;
};

struct ComparisonReport {
  std::vector<FeatureComparison> features;  // feature_names() order
  std::vector<std::string> log;             // per-feature exclusions
};

/// Later relative to earlier, (later - earlier) / |earlier| in percent, per
/// pair, then averaged over pairs. A pair is dropped for a feature when either
/// side is undefined or the earlier value is zero. Throws InputError naming the
/// session when a pair references a missing summary.
ComparisonReport pairwise_comparison(std::span<const SessionPair> pairs,
                                     const std::map<std::string, SessionSummary>& summaries);

struct StepFeatureMeans {
  std::string step_id;
  std::size_t n_units = 0;
  std::vector<FeatureStat> stats;  // feature_names() order
};

struct StepAggregate {
  std::vector<StepFeatureMeans> steps;  // ordered by step id
  std::vector<std::string> log;
};

/// Mean of each feature over every labeled unit of each step, pooled across
/// sessions. Unlabeled units are ignored. `expected_steps` that received no
/// units are logged.
StepAggregate step_aggregate(std::span<const FeatureVector> features,
                             std::span<const std::string> expected_steps = {});

struct FeatureCorrelation {
  std::string feature;
  std::optional<double> r_vs_difficulty;
  std::optional<double> r_vs_score;
  std::size_t n_steps = 0;
};

struct CorrelationReport {
  std::vector<FeatureCorrelation> features;                       // pooled raters
  std::map<std::string, std::vector<FeatureCorrelation>> by_role;  // "expert" / "beginner"
  std::vector<std::pair<std::string, double>> step_difficulty;     // mean of -score
  std::vector<StepFeatureMeans> step_means;
  std::vector<std::string> log;
};

/// Difficulty of a step is the mean negated rater score (the rating scale runs
/// from most difficult, -5, to easiest, 5). Pearson r per feature over steps
/// with both a mean and a rating; fewer than three such steps is undefined.
CorrelationReport difficulty_correlation(std::span<const StepFeatureMeans> step_means,
                                         const DifficultyRatings& ratings);

std::string comparison_csv(const ComparisonReport& r);
std::string comparison_json(const ComparisonReport& r);
std::string correlation_csv(const CorrelationReport& r);
std::string correlation_json(const CorrelationReport& r);

}  // namespace egoskill
