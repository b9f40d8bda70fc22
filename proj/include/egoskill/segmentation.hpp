// Copyright 2026 The egoskill Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "egoskill/session_model.hpp"

#include <span>
#include <string>
#include <vector>

namespace egoskill {

struct SegmentationParams {
  double touch_merge_gap = 0.3;  // seconds; contact gaps shorter than this are bridged
  double min_operating = 0.2;    // seconds; shorter merged bouts are spurious
  int hand_presence_debounce = 2;  // frames a visibility change must persist

  void validate() const;
};

struct Segmentation {
  std::vector<OperationUnit> units;
  std::vector<Interval> dropped_bouts;  // closed contact intervals below min_operating
  std::vector<std::string> warnings;
};

/// Closed contact intervals after gap merging, before the min_operating filter.
std::vector<Interval> merged_touch_bouts(const Session& s, double touch_merge_gap);

/// Hand visibility per frame after debouncing. A change of state is accepted
/// only when it persists for `debounce` frames and is dated to its first frame.
std::vector<bool> debounced_hand_visibility(const Session& s, int debounce);

/// Splits a session into operation units. Each unit gets the hotspot nearest
/// its contact points and, when step labels exist, the step covering the
/// majority of its operating period.
Segmentation segment_units(const Session& s, const SegmentationParams& p, std::span<const Hotspot> hotspots = {});

struct PeriodDurations {
  double dur_G = 0.0;
  double dur_H = 0.0;
  double dur_O = 0.0;
  double ratio_G = 0.0;
  double ratio_H = 0.0;
  double ratio_O = 0.0;
};

/// Absolute period lengths and their share of the unit. A zero-length unit
/// reports ratio_O = 1 so the ratios still sum to one.
PeriodDurations period_durations(const OperationUnit& ou);

std::string units_csv(std::span<const OperationUnit> units);

}  // namespace egoskill
