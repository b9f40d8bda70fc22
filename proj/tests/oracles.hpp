// Copyright 2026 The egoskill Authors
// SPDX-License-Identifier: Apache-2.0

// Independent reference implementations used as test oracles, plus small
// session builders. Written for clarity, not speed.

#pragma once

#include "egoskill/hotspot.hpp"
#include "egoskill/session_model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace oracle {

using egoskill::FrameRecord;
using egoskill::Point2;
using egoskill::Session;

/// Encodes diff signs as a '+', '-', '0' string, erases the zeros and counts
/// the "+-" and "-+" substrings.
inline int sign_changes(const std::vector<double>& d, double eps) {
  std::string s;
  for (std::size_t i = 1; i < d.size(); ++i) {
    const double v = d[i] - d[i - 1];
    s += v > eps ? '+' : (v < -eps ? '-' : '0');
  }
  s.erase(std::remove(s.begin(), s.end(), '0'), s.end());
  int count = 0;
  for (std::size_t pos = 0; pos + 1 < s.size(); ++pos)
    if (s.substr(pos, 2) == "+-" || s.substr(pos, 2) == "-+") ++count;
  return count;
}

/// Clusters as sets of input indices, via an explicit adjacency matrix and
/// breadth-first search.
inline std::set<std::set<std::size_t>> clusters(const std::vector<egoskill::Touch>& touches, double eps, double gap,
                                                std::size_t min_points) {
  const std::size_t n = touches.size();
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      adj[i][j] = (touches[i].position - touches[j].position).norm() <= eps &&
                  std::abs(touches[i].t - touches[j].t) <= gap;
  std::vector<bool> seen(n, false);
  std::set<std::set<std::size_t>> out;
  for (std::size_t s = 0; s < n; ++s) {
    if (seen[s]) continue;
    std::set<std::size_t> comp;
    std::vector<std::size_t> queue{s};
    seen[s] = true;
    for (std::size_t q = 0; q < queue.size(); ++q) {
      const auto u = queue[q];
      comp.insert(u);
      for (std::size_t v = 0; v < n; ++v)
        if (adj[u][v] && !seen[v]) {
          seen[v] = true;
          queue.push_back(v);
        }
    }
    if (comp.size() >= min_points) out.insert(comp);
  }
  return out;
}

struct RefUnit {
  double g0, g1, h0, h1, o0, o1;
};

struct RefSegmentation {
  std::vector<RefUnit> units;
  std::vector<std::pair<double, double>> dropped;
};

/// Frame-by-frame walk of the period definitions: operating runs with short
/// gaps bridged and short runs dropped, hand visibility held until a change
/// lasts `debounce` frames, gazing until the hand shows up again.
inline RefSegmentation segment(const Session& s, double merge_gap, double min_operating, int debounce) {
  RefSegmentation out;
  const auto& f = s.frames;
  const std::size_t n = f.size();
  if (n == 0) return out;

  // Contact bouts as frame-index ranges.
  std::vector<std::pair<std::size_t, std::size_t>> bouts;
  std::optional<std::size_t> last_touch;
  for (std::size_t i = 0; i < n; ++i) {
    if (!f[i].touching) continue;
    const bool joins = last_touch && (*last_touch + 1 == i || f[i].t - f[*last_touch].t < merge_gap);
    if (joins) bouts.back().second = i;
    else bouts.emplace_back(i, i);
    last_touch = i;
  }
  std::vector<std::pair<std::size_t, std::size_t>> kept;
  for (const auto& b : bouts) {
    if (f[b.second].t - f[b.first].t < min_operating) out.dropped.emplace_back(f[b.first].t, f[b.second].t);
    else kept.push_back(b);
  }

  // Debounced visibility.
  std::vector<bool> vis(n);
  bool state = f[0].hand.has_value();
  for (std::size_t i = 0; i < n;) {
    std::size_t run = 0;
    const bool raw = f[i].hand.has_value();
    while (i + run < n && f[i + run].hand.has_value() == raw) ++run;
    if (raw != state && run >= static_cast<std::size_t>(std::max(debounce, 1))) state = raw;
    for (std::size_t k = 0; k < run; ++k) vis[i + k] = state;
    i += run;
  }

  std::size_t from = 0;  // first frame of the current unit
  for (const auto& b : kept) {
    std::optional<std::size_t> hidden;
    std::optional<std::size_t> appear;
    for (std::size_t i = from; i <= b.first; ++i) {
      if (!vis[i] && !hidden) hidden = i;
      if (vis[i] && hidden && !appear) appear = i;
    }
    const double g0 = f[from].t;
    double a = f[b.first].t;
    if (appear) a = f[*appear].t;
    else if (!hidden) a = g0;
    out.units.push_back({g0, a, a, f[b.first].t, f[b.first].t, f[b.second].t});
    from = b.second;
  }
  return out;
}

/// Session at `rate` from per-frame (hand present, touching) flags; positions
/// are arbitrary but valid.
inline Session flags_session(const std::vector<std::pair<bool, bool>>& flags, double rate = 30.0) {
  Session s;
  s.id = "flags";
  s.operator_id = "op";
  s.sample_rate_hz = rate;
  for (std::size_t i = 0; i < flags.size(); ++i) {
    FrameRecord fr;
    fr.t = static_cast<double>(i) / rate;
    fr.attention = Point2(static_cast<double>(i % 7), 1.0);
    if (flags[i].first || flags[i].second) fr.hand = Point2(2.0, 3.0);
    fr.touching = flags[i].second;
    s.frames.push_back(fr);
  }
  return s;
}

}  // namespace oracle
