// Copyright 2026 The egoskill Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace egoskill {

/// Planar position in the session's declared scene frame.
using Point2 = Eigen::Vector2d;

/// Dense column of samples (times, distances, speeds).
using Series = Eigen::VectorXd;

/// Thrown for any input that cannot become a valid domain object.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

  /// 1-based line number in the offending stream, 0 when not line-bound.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

enum class Ordinal { earlier, later };

std::string_view to_string(Ordinal o);
Ordinal parse_ordinal(std::string_view s);

/// One timestamped sample. `attention` is the projected view center; an
/// absent `hand` means the hand is not in sight.
struct FrameRecord {
  double t = 0.0;
  Point2 attention = Point2::Zero();
  std::optional<Point2> hand;
  bool touching = false;

  bool operator==(const FrameRecord&) const = default;
};

struct StepLabel {
  double start_t = 0.0;
  double end_t = 0.0;
  std::string step_id;

  bool operator==(const StepLabel&) const = default;
};

struct Session {
  std::string id;
  std::string operator_id;
  Ordinal ordinal = Ordinal::earlier;
  std::vector<FrameRecord> frames;
  std::vector<StepLabel> step_labels;
  std::string coord_frame;
  double sample_rate_hz = 30.0;

  bool operator==(const Session&) const = default;
};

/// Half-open [start, end) unless noted; `end == start` is an empty period.
struct Interval {
  double start = 0.0;
  double end = 0.0;

  double length() const { return end - start; }
  bool operator==(const Interval&) const = default;
};

/// Spatio-temporal cluster of touch points.
struct Hotspot {
  int id = 0;
  Point2 centroid = Point2::Zero();
  std::size_t touch_count = 0;
  double first_t = 0.0;
  double last_t = 0.0;
  std::vector<std::size_t> member_touch_indices;
};

/// One pure-gazing -> hand-approaching -> operating cycle.
/// gazing and approaching are half-open, operating is closed.
struct OperationUnit {
  int index = 0;
  Interval gazing;
  Interval approaching;
  Interval operating;
  std::optional<int> hotspot_id;  // empty: assignment undefined
  std::optional<std::string> step_id;

  Interval span() const { return {gazing.start, operating.end}; }
};

enum class DistanceKind { AO, HO, AH };

std::string_view to_string(DistanceKind k);

/// Per-frame 2D distances between attention (A), hand (H) and hotspot (O).
struct DistanceSeries {
  Series times;
  Series values;
  DistanceKind kind = DistanceKind::AO;

  Eigen::Index size() const { return values.size(); }
  bool empty() const { return values.size() == 0; }
};

enum class Sign : std::int8_t { minus = -1, zero = 0, plus = 1 };

/// Speed, sign-change frequency and variance of a compensated series.
struct KinematicsSummary {
  Series speed;                            // diff(d*), units/sample; empty when undefined
  std::optional<double> mean_abs_speed;    // units/second
  std::optional<int> sign_change_count;    // f
  double variance = 0.0;                   // population variance of d*
  double mean = 0.0;
  std::vector<Sign> signs;

  bool defined() const { return sign_change_count.has_value(); }
};

enum class GazePattern { search, shift };
enum class ShiftKind { early, non_early, undefined };

std::string_view to_string(GazePattern p);
std::string_view to_string(ShiftKind k);

/// Kinematics of d_AO over one period, reduced to scalars.
struct PeriodKinematics {
  std::optional<int> sign_changes;
  std::optional<double> mean_abs_speed;
  std::optional<double> variance;
};

struct FeatureVector {
  int ou_index = 0;
  std::optional<std::string> step_id;
  std::optional<int> hotspot_id;

  double dur_G = 0.0;
  double dur_H = 0.0;
  double dur_O = 0.0;
  double ratio_G = 0.0;
  double ratio_H = 0.0;
  double ratio_O = 0.0;

  std::optional<double> mean_d_AO_operating;
  PeriodKinematics kin_G;
  PeriodKinematics kin_H;
  PeriodKinematics kin_O;
  std::optional<double> corr_AO_HO;
  std::optional<double> attention_lead_lag;
  std::optional<double> early_shift_ratio;
  std::optional<GazePattern> gaze_pattern;
  ShiftKind shift_kind = ShiftKind::undefined;

  /// "field:code" entries for every undefined field, in column order.
  std::vector<std::string> undefined_reasons;
};

enum class RaterRole { expert, beginner };

std::string_view to_string(RaterRole r);
RaterRole parse_rater_role(std::string_view s);

struct Rating {
  std::string step_id;
  std::string rater_id;
  RaterRole role = RaterRole::expert;
  int score = 0;  // -5 most difficult .. 5 easiest

  bool operator==(const Rating&) const = default;
};

struct DifficultyRatings {
  std::vector<Rating> ratings;

  bool operator==(const DifficultyRatings&) const = default;
};

}  // namespace egoskill
