// Copyright 2026 The egoskill Authors
// SPDX-License-Identifier: Apache-2.0

#include "egoskill/segmentation.hpp"

#include "egoskill/hotspot.hpp"
#include "egoskill/text.hpp"

#include <algorithm>
#include <sstream>

namespace egoskill {

void SegmentationParams::validate() const {
  if (touch_merge_gap < 0.0 || min_operating < 0.0 || hand_presence_debounce < 0)
    throw InputError("segmentation parameters must be non-negative");
}

std::vector<Interval> merged_touch_bouts(const Session& s, double touch_merge_gap) {
  std::vector<Interval> bouts;
  bool in_run = false;
  for (const auto& f : s.frames) {
    if (f.touching) {
      if (in_run) {
        bouts.back().end = f.t;
      } else if (!bouts.empty() && f.t - bouts.back().end < touch_merge_gap) {
        bouts.back().end = f.t;
      } else {
        bouts.push_back({f.t, f.t});
      }
      in_run = true;
    } else {
      in_run = false;
    }
  }
  return bouts;
}

std::vector<bool> debounced_hand_visibility(const Session& s, int debounce) {
  const std::size_t n = s.frames.size();
  std::vector<bool> out(n, false);
  if (n == 0) return out;
  const auto min_run = static_cast<std::size_t>(std::max(debounce, 1));

  bool state = s.frames[0].hand.has_value();
  std::size_t i = 0;
  while (i < n) {
    bool raw = s.frames[i].hand.has_value();
    std::size_t j = i;
    while (j < n && s.frames[j].hand.has_value() == raw) ++j;
    if (raw != state && j - i >= min_run) state = raw;
    std::fill(out.begin() + static_cast<std::ptrdiff_t>(i), out.begin() + static_cast<std::ptrdiff_t>(j), state);
    i = j;
  }
  return out;
}

namespace {

std::optional<std::string> majority_step(const Interval& operating, const std::vector<StepLabel>& labels) {
  const double dur = operating.length();
  const StepLabel* best = nullptr;
  double best_overlap = -1.0;
  for (const auto& l : labels) {
    if (dur <= 0.0) {
      if (operating.start >= l.start_t && operating.start <= l.end_t) return l.step_id;
      continue;
    }
    double overlap = std::min(operating.end, l.end_t) - std::max(operating.start, l.start_t);
    if (overlap > 0.5 * dur && overlap > best_overlap) {
      best = &l;
      best_overlap = overlap;
    }
  }
  if (best) return best->step_id;
  return std::nullopt;
}

}  // namespace

Segmentation segment_units(const Session& s, const SegmentationParams& p, std::span<const Hotspot> hotspots) {
  p.validate();
  Segmentation seg;
  if (s.frames.empty()) {
    seg.warnings.emplace_back("session has no frames");
    return seg;
  }

  std::vector<Interval> kept;
  for (const auto& b : merged_touch_bouts(s, p.touch_merge_gap)) {
    if (b.length() < p.min_operating) {
      seg.dropped_bouts.push_back(b);
      seg.warnings.push_back("dropped contact bout [" + format_double(b.start) + ", " + format_double(b.end) +
                             "] shorter than min_operating");
    } else {
      kept.push_back(b);
    }
  }
  if (kept.empty()) {
    seg.warnings.emplace_back("no touches: session yields no operation units");
    return seg;
  }

  const auto vis = debounced_hand_visibility(s, p.hand_presence_debounce);
  const auto& frames = s.frames;
  const auto touches = extract_touches(s);

  std::size_t i = 0;  // frame cursor, monotone across units
  double prev_end = frames.front().t;
  for (std::size_t k = 0; k < kept.size(); ++k) {
    const Interval& bout = kept[k];
    while (i < frames.size() && frames[i].t < prev_end) ++i;

    // Pure gazing ends when the hand comes into sight after the previous
    // contact; if it never left, there is no gazing at all.
    double appear = bout.start;
    bool seen_absent = !vis[i];
    bool found = false;
    for (std::size_t j = i; j < frames.size() && frames[j].t <= bout.start; ++j) {
      if (!vis[j]) {
        seen_absent = true;
      } else if (seen_absent) {
        appear = frames[j].t;
        found = true;
        break;
      }
    }
    if (!found && !seen_absent) appear = prev_end;

    OperationUnit ou;
    ou.index = static_cast<int>(k);
    ou.gazing = {prev_end, appear};
    ou.approaching = {appear, bout.start};
    ou.operating = bout;

    std::vector<Touch> ou_touches;
    for (const auto& t : touches)
      if (t.t >= bout.start && t.t <= bout.end) ou_touches.push_back(t);
    ou.hotspot_id = assign_operating_hotspot(ou_touches, hotspots);
    if (!ou.hotspot_id) seg.warnings.push_back("unit " + std::to_string(k) + ": no hotspot assigned");
    if (!s.step_labels.empty()) ou.step_id = majority_step(ou.operating, s.step_labels);

    seg.units.push_back(std::move(ou));
    prev_end = bout.end;
  }
  return seg;
}

PeriodDurations period_durations(const OperationUnit& ou) {
  PeriodDurations d;
  d.dur_G = ou.gazing.length();
  d.dur_H = ou.approaching.length();
  d.dur_O = ou.operating.length();
  const double total = d.dur_G + d.dur_H + d.dur_O;
  if (total > 0.0) {
    d.ratio_G = d.dur_G / total;
    d.ratio_H = d.dur_H / total;
    d.ratio_O = d.dur_O / total;
  } else {
    d.ratio_O = 1.0;
  }
  return d;
}

std::string units_csv(std::span<const OperationUnit> units) {
  std::ostringstream out;
  out << "ou_index,g_start,g_end,h_start,h_end,o_start,o_end,hotspot_id,step_id\n";
  for (const auto& u : units) {
    out << u.index << ',' << format_double(u.gazing.start) << ',' << format_double(u.gazing.end) << ','
        << format_double(u.approaching.start) << ',' << format_double(u.approaching.end) << ','
        << format_double(u.operating.start) << ',' << format_double(u.operating.end) << ','
        << (u.hotspot_id ? std::to_string(*u.hotspot_id) : "") << ',' << u.step_id.value_or("") << '\n';
  }
  return out.str();
}

}  // namespace egoskill
