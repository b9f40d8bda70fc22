// Copyright 2026 The egoskill Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "egoskill/analysis.hpp"
#include "egoskill/session_model.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace egoskill {

/// One behavior archetype: search or shift while gazing, early or non-early
/// shift at the end of operating.
struct ArchetypeSpec {
  GazePattern gaze_pattern = GazePattern::shift;
  ShiftKind shift_kind = ShiftKind::non_early;
  double dur_G = 2.0;
  double dur_H = 1.0;
  double dur_O = 2.0;
  double oscillation_hz = 1.5;   // search: two direction reversals per cycle
  double approach_speed = 450.0; // units/s for zigzag legs and the early exit
  double noise_sigma = 0.0;      // std of the low-frequency drift added to every point
  std::vector<Point2> hotspots = {Point2(320.0, 240.0)};
  double lag = 0.2;              // seconds hand trails attention
  double early_shift_R = 0.3;    // planned R for the early archetype
  double sample_rate_hz = 30.0;
  Eigen::Vector2d scene_size = Eigen::Vector2d(640.0, 480.0);

  void validate() const;
};

/// What the generator planned for one unit, after frame quantization.
struct OuTruth {
  GazePattern gaze_pattern = GazePattern::shift;
  ShiftKind shift_kind = ShiftKind::non_early;
  double dur_G = 0.0;
  double dur_H = 0.0;
  double dur_O = 0.0;
  int gaze_turns = 0;
  double early_shift_R = 0.0;
  double lag = 0.0;
  Point2 hotspot = Point2::Zero();
  std::string step_id;
};

struct SyntheticTrace {
  Session session;
  OuTruth truth;
};

/// Single-unit session realizing an archetype; deterministic given the seed.
SyntheticTrace generate_ou_trace(const ArchetypeSpec& a, std::uint64_t seed);

/// Deadband that keeps the drift noise of `sigma` out of the sign sequence.
double recommended_deadband(double noise_sigma);

struct StepSpec {
  std::string id;
  double difficulty = 0.0;  // 5 most difficult .. -5 easiest
  Point2 hotspot = Point2::Zero();
};

struct CohortSpec {
  std::size_t n_pairs = 20;
  std::uint64_t seed = 1;
  double sample_rate_hz = 30.0;
  double noise_sigma = 0.0;
  std::size_t n_steps = 15;
  std::vector<StepSpec> steps;  // generated from the seed when empty

  // Per-unit baseline of the earlier session before step slopes.
  double base_dur_G = 3.0;
  double base_dur_H = 1.2;
  double base_dur_O = 2.0;
  double base_gaze_turns = 5.0;
  double base_early_shift_R = 0.3;
  double base_lag = 0.21;
  double approach_speed = 180.0;

  /// Change per unit of difficulty, keyed by dur_G, dur_H, dur_O, gaze_turns,
  /// early_shift_R, lag.
  std::map<std::string, double> slopes = {{"dur_H", 0.1}, {"gaze_turns", 0.5}};
  /// Later relative to earlier in percent, same keys as slopes.
  std::map<std::string, double> deltas_pct;

  double operator_spread = 0.15;  // uniform +/- factor per operator
  double unit_jitter = 0.10;      // uniform +/- factor per unit
  std::size_t n_expert_raters = 3;
  std::size_t n_beginner_raters = 3;
  double rating_noise = 0.8;

  void validate() const;
};

/// Parses synth.json. Unknown keys are rejected.
CohortSpec parse_cohort_spec(const nlohmann::json& j);
nlohmann::ordered_json cohort_spec_json(const CohortSpec& c);

struct CohortData {
  std::vector<Session> sessions;
  std::vector<SessionPair> pairs;
  DifficultyRatings ratings;
  std::vector<StepSpec> steps;
  std::map<std::string, std::vector<OuTruth>> truth;  // by session id
  double recommended_deadband = 0.0;
};

CohortData generate_cohort(const CohortSpec& c, int jobs = 1);

/// Writes sessions/<id>.jsonl (+ .steps.csv), pairs.csv, ratings.csv,
/// truth.json and analysis_config.json under `dir`.
void write_cohort(const CohortData& data, const CohortSpec& spec, const std::filesystem::path& dir);

/// Deterministic RNG stream for (seed, label); independent of scheduling.
std::mt19937_64 derived_rng(std::uint64_t seed, const std::string& label);

}  // namespace egoskill
