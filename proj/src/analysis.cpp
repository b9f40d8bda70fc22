// Copyright 2026 The egoskill Authors
// SPDX-License-Identifier: Apache-2.0

#include "egoskill/analysis.hpp"

#include "egoskill/features.hpp"
#include "egoskill/text.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace egoskill {

namespace {

using ordered_json = nlohmann::ordered_json;

std::vector<FeatureStat> mean_stats(const std::vector<std::vector<std::optional<double>>>& rows) {
  const auto n_features = feature_names().size();
  std::vector<FeatureStat> stats(n_features);
  for (std::size_t c = 0; c < n_features; ++c) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& row : rows) {
      if (row[c]) {
        sum += *row[c];
        ++n;
      }
    }
    stats[c].count = n;
    if (n) stats[c].mean = sum / static_cast<double>(n);
  }
  return stats;
}

ordered_json optional_json(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

std::vector<FeatureCorrelation> correlate(std::span<const StepFeatureMeans> step_means,
                                          const std::map<std::string, double>& difficulty,
                                          std::vector<std::string>* log, const std::string& label) {
  const auto& names = feature_names();
  std::vector<FeatureCorrelation> out;
  for (std::size_t c = 0; c < names.size(); ++c) {
    std::vector<double> x;
    std::vector<double> y;
    for (const auto& step : step_means) {
      auto it = difficulty.find(step.step_id);
      if (it == difficulty.end() || !step.stats[c].mean) continue;
      x.push_back(*step.stats[c].mean);
      y.push_back(it->second);
    }
    FeatureCorrelation fc;
    fc.feature = names[c];
    fc.n_steps = x.size();
    if (x.size() >= 3) {
      const Eigen::Map<const Series> xv(x.data(), static_cast<Eigen::Index>(x.size()));
      const Eigen::Map<const Series> yv(y.data(), static_cast<Eigen::Index>(y.size()));
      fc.r_vs_difficulty = pearson(xv, yv);
      if (fc.r_vs_difficulty) fc.r_vs_score = -*fc.r_vs_difficulty;
    }
    if (!fc.r_vs_difficulty && log)
      log->push_back(label + names[c] + ": correlation undefined over " + std::to_string(x.size()) + " steps");
    out.push_back(std::move(fc));
  }
  return out;
}

std::map<std::string, double> mean_difficulty(const DifficultyRatings& ratings, std::optional<RaterRole> role) {
  std::map<std::string, std::pair<double, std::size_t>> acc;
  for (const auto& r : ratings.ratings) {
    if (role && r.role != *role) continue;
    auto& [sum, n] = acc[r.step_id];
    sum += -static_cast<double>(r.score);
    ++n;
  }
  std::map<std::string, double> out;
  for (const auto& [step, sn] : acc) out[step] = sn.first / static_cast<double>(sn.second);
  return out;
}

ordered_json correlations_json(const std::vector<FeatureCorrelation>& v) {
  auto arr = ordered_json::array();
  for (const auto& fc : v) {
    arr.push_back({{"feature", fc.feature},
                   {"r_vs_difficulty", optional_json(fc.r_vs_difficulty)},
                   {"r_vs_score", optional_json(fc.r_vs_score)},
                   {"n_steps", fc.n_steps}});
  }
  return arr;
}

}  // namespace

const FeatureStat& SessionSummary::stat(const std::string& feature) const {
  const auto& names = feature_names();
  auto it = std::find(names.begin(), names.end(), feature);
  if (it == names.end()) throw InputError("unknown feature " + feature);
  return stats.at(static_cast<std::size_t>(it - names.begin()));
}

SessionSummary session_feature_summary(std::span<const FeatureVector> features, std::string session_id) {
  if (features.empty()) throw InputError("session summary needs at least one operation unit");
  SessionSummary s;
  s.session_id = std::move(session_id);
  s.n_units = features.size();
  std::vector<std::vector<std::optional<double>>> rows;
  std::size_t n_search = 0;
  std::size_t n_early = 0;
  std::size_t n_shift_defined = 0;
  for (const auto& fv : features) {
    rows.push_back(feature_values(fv));
    s.total_dur_G += fv.dur_G;
    s.total_dur_H += fv.dur_H;
    s.total_dur_O += fv.dur_O;
    if (fv.gaze_pattern == GazePattern::search) ++n_search;
    if (fv.shift_kind != ShiftKind::undefined) {
      ++n_shift_defined;
      if (fv.shift_kind == ShiftKind::early) ++n_early;
    }
  }
  s.stats = mean_stats(rows);
  s.search_fraction = static_cast<double>(n_search) / static_cast<double>(features.size());
  s.early_fraction = n_shift_defined ? static_cast<double>(n_early) / static_cast<double>(n_shift_defined) : 0.0;
  return s;
}

std::vector<SessionPair> parse_pair_manifest(std::istream& in) {
  std::vector<SessionPair> pairs;
  std::string raw;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(in, raw)) {
    ++line_no;
    if (trim(raw).empty()) continue;
    auto cells = split_csv(raw);
    if (!header) {
      if (cells != std::vector<std::string>{"operator", "earlier", "later"})
        throw InputError("expected header operator,earlier,later", line_no);
      header = true;
      continue;
    }
    if (cells.size() != 3) throw InputError("pair row needs 3 fields", line_no);
    SessionPair p{std::string(trim(cells[0])), std::string(trim(cells[1])), std::string(trim(cells[2]))};
    if (p.earlier.empty() || p.later.empty()) throw InputError("pair row has an empty session id", line_no);
    if (p.earlier == p.later) throw InputError("pair compares a session with itself", line_no);
    pairs.push_back(std::move(p));
  }
  return pairs;
}

void write_pair_manifest(std::ostream& out, std::span<const SessionPair> pairs) {
  out << "operator,earlier,later\n";
  for (const auto& p : pairs) out << p.operator_id << ',' << p.earlier << ',' << p.later << '\n';
}

ComparisonReport pairwise_comparison(std::span<const SessionPair> pairs,
                                     const std::map<std::string, SessionSummary>& summaries) {
  for (const auto& p : pairs)
    for (const auto* id : {&p.earlier, &p.later})
      if (!summaries.count(*id)) throw InputError("missing session " + *id);

  ComparisonReport report;
  const auto& names = feature_names();
  for (std::size_t c = 0; c < names.size(); ++c) {
    FeatureComparison fc;
    fc.feature = names[c];
    double sum = 0.0;
    for (const auto& p : pairs) {
      const auto& e = summaries.at(p.earlier).stats[c].mean;
      const auto& l = summaries.at(p.later).stats[c].mean;
      if (!e || !l) {
        report.log.push_back(names[c] + ": pair " + p.operator_id + " excluded (undefined value)");
        continue;
      }
      if (*l < *e) ++fc.n_later_smaller;
      if (*e == 0.0) {
        report.log.push_back(names[c] + ": pair " + p.operator_id + " excluded (earlier value is zero)");
        continue;
      }
      const double delta = (*l - *e) / std::abs(*e) * 100.0;
      fc.per_pair.emplace_back(p.operator_id, delta);
      sum += delta;
    }
    fc.n_pairs = fc.per_pair.size();
    if (fc.n_pairs) fc.mean_delta_pct = sum / static_cast<double>(fc.n_pairs);
    report.features.push_back(std::move(fc));
  }
  return report;
}

StepAggregate step_aggregate(std::span<const FeatureVector> features, std::span<const std::string> expected_steps) {
  std::map<std::string, std::vector<std::vector<std::optional<double>>>> by_step;
  for (const auto& fv : features)
    if (fv.step_id) by_step[*fv.step_id].push_back(feature_values(fv));

  StepAggregate agg;
  for (const auto& [step, rows] : by_step) agg.steps.push_back({step, rows.size(), mean_stats(rows)});
  std::set<std::string> seen;
  for (const auto& step : expected_steps) {
    if (!by_step.count(step) && seen.insert(step).second)
      agg.log.push_back("step " + step + " has no operation units; excluded");
  }
  return agg;
}

CorrelationReport difficulty_correlation(std::span<const StepFeatureMeans> step_means,
                                         const DifficultyRatings& ratings) {
  CorrelationReport report;
  report.step_means.assign(step_means.begin(), step_means.end());
  const auto pooled = mean_difficulty(ratings, std::nullopt);
  for (const auto& [step, d] : pooled) report.step_difficulty.emplace_back(step, d);
  for (const auto& s : step_means)
    if (!pooled.count(s.step_id)) report.log.push_back("step " + s.step_id + " has no ratings; excluded");

  report.features = correlate(step_means, pooled, &report.log, "");
  for (RaterRole role : {RaterRole::expert, RaterRole::beginner}) {
    auto d = mean_difficulty(ratings, role);
    if (d.empty()) continue;
    const std::string key(to_string(role));
    report.by_role[key] = correlate(step_means, d, nullptr, key + ": ");
  }
  return report;
}

std::string comparison_csv(const ComparisonReport& r) {
  std::ostringstream out;
  out << "feature,mean_delta_pct,n_pairs,n_later_smaller\n";
  for (const auto& fc : r.features)
    out << fc.feature << ',' << format_optional(fc.mean_delta_pct) << ',' << fc.n_pairs << ',' << fc.n_later_smaller
        << '\n';
  return out.str();
}

std::string comparison_json(const ComparisonReport& r) {
  ordered_json j;
  j["baseline"] = "earlier";
  auto arr = ordered_json::array();
  for (const auto& fc : r.features) {
    auto pairs = ordered_json::array();
    for (const auto& [op, d] : fc.per_pair) pairs.push_back({{"operator", op}, {"delta_pct", d}});
    arr.push_back({{"feature", fc.feature},
                   {"mean_delta_pct", optional_json(fc.mean_delta_pct)},
                   {"n_pairs", fc.n_pairs},
                   {"n_later_smaller", fc.n_later_smaller},
                   {"per_pair", pairs}});
  }
  j["features"] = arr;
  j["log"] = r.log;
  return j.dump(2) + "\n";
}

std::string correlation_csv(const CorrelationReport& r) {
  std::ostringstream out;
  out << "feature,r_vs_difficulty,r_vs_score,n_steps\n";
  for (const auto& fc : r.features)
    out << fc.feature << ',' << format_optional(fc.r_vs_difficulty) << ',' << format_optional(fc.r_vs_score) << ','
        << fc.n_steps << '\n';
  return out.str();
}

std::string correlation_json(const CorrelationReport& r) {
  ordered_json j;
  j["features"] = correlations_json(r.features);
  auto roles = ordered_json::object();
  for (const auto& [role, v] : r.by_role) roles[role] = correlations_json(v);
  j["by_role"] = roles;
  auto diff = ordered_json::array();
  for (const auto& [step, d] : r.step_difficulty) diff.push_back({{"step_id", step}, {"difficulty", d}});
  j["step_difficulty"] = diff;
  auto means = ordered_json::array();
  const auto& names = feature_names();
  for (const auto& s : r.step_means) {
    ordered_json row;
    row["step_id"] = s.step_id;
    row["n_units"] = s.n_units;
    for (std::size_t c = 0; c < names.size(); ++c) row[names[c]] = optional_json(s.stats[c].mean);
    means.push_back(row);
  }
  j["step_means"] = means;
  j["log"] = r.log;
  return j.dump(2) + "\n";
}

}  // namespace egoskill
