// Copyright 2026 The egoskill Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "egoskill/session_model.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace egoskill {

struct FeatureParams {
  double sign_deadband = 0.0;         // units/sample; |v| <= this is sign 0
  double lag_threshold = 0.2;         // fraction of a series' max that counts as "reached"
  double min_operating_for_R = 1.0;   // seconds; fixed
  double early_shift_min_ratio = 0.1; // R at or above this is an early shift
  double search_min_rate = 1.0;       // sign changes per second that make a search

  void validate() const;
};

/// Which frames of a unit a distance series covers.
enum class PeriodSelect {
  gazing,       // [g.start, g.end)
  approaching,  // [h.start, h.end)
  operating,    // [o.start, o.end]
  approach,     // [g.start, o.start): everything before the first touch
  unit,         // [g.start, o.end]
};

/// Euclidean distances per frame. HO and AH skip frames without a hand;
/// HO is 0 on touching frames.
DistanceSeries build_distance_series(const Session& s, const OperationUnit& ou, const Point2& hotspot,
                                     DistanceKind kind, PeriodSelect period);

/// d* = d - min(d). Throws InputError on an empty series.
DistanceSeries compensate_offset(const DistanceSeries& d);

Sign sign_of(double v, double deadband);

/// Number of +/- reversals; zeros are transparent, so + 0 0 - is one change.
int count_sign_changes(std::span<const Sign> signs);

KinematicsSummary kinematics(const DistanceSeries& d_star, double deadband, double sample_rate_hz);

/// Seconds covered by the trailing run of + signs of diff(d); a 0 sign ends the run.
double trailing_increase_duration(const DistanceSeries& d, double deadband);

/// R = p1 / dur_O, undefined when dur_O < min_operating (1 s).
std::optional<double> early_shift_ratio(const DistanceSeries& d_ao_operating, double dur_O, double deadband,
                                        double min_operating = 1.0);

ShiftKind classify_shift_kind(std::optional<double> R, double r_min = 0.1);

/// Search iff sign changes per second reach f_min. Fewer than three samples
/// is a shift. `period_duration` defaults to the series' time span.
GazePattern classify_gaze_pattern(const DistanceSeries& d_ao_gazing, double deadband, double f_min = 1.0,
                                  std::optional<double> period_duration = std::nullopt);

/// Pearson r over co-timed samples of d_AO and d_HO.
std::optional<double> attention_hand_correlation(const DistanceSeries& d_ao, const DistanceSeries& d_ho);

/// First time the series drops below threshold * max and stays below to the
/// end. Undefined for a flat-zero series or one that ends above the threshold.
std::optional<double> sustained_approach_time(const DistanceSeries& d_star, double threshold);

/// t_hand - t_attention of the sustained approach times; positive when
/// attention reaches the hotspot first.
std::optional<double> attention_lead_lag(const DistanceSeries& d_ao_star, const DistanceSeries& d_ho_star,
                                         double threshold);

/// Every per-unit feature. Never throws on degenerate units: undefined fields
/// carry a reason code in `undefined_reasons`. `hotspot` may be null.
FeatureVector feature_vector(const Session& s, const OperationUnit& ou, const Hotspot* hotspot,
                             const FeatureParams& p);

/// Numeric feature columns in their canonical order.
const std::vector<std::string>& feature_names();

/// Numeric feature values aligned with feature_names().
std::vector<std::optional<double>> feature_values(const FeatureVector& fv);

std::string features_csv(std::span<const FeatureVector> features);

/// Reads features.csv back. Throws InputError on malformed input.
std::vector<FeatureVector> parse_features_csv(std::string_view text);

/// `t,d_ao,d_ho,d_ah` over the whole unit, raw distances, empty cells where
/// the hand is absent.
std::string trace_csv(const Session& s, const OperationUnit& ou, const Point2& hotspot);

}  // namespace egoskill
