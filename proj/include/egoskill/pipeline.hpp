// Copyright 2026 The egoskill Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "egoskill/config.hpp"
#include "egoskill/features.hpp"
#include "egoskill/hotspot.hpp"
#include "egoskill/segmentation.hpp"

#include <vector>

namespace egoskill {

struct SessionAnalysis {
  double spatial_eps = 0.0;
  ClusteringResult clusters;
  Segmentation segmentation;
  std::vector<FeatureVector> features;  // one per unit, in unit order
};

/// Hotspots, units and per-unit features of one validated session.
SessionAnalysis analyze_session(const Session& s, const RunConfig& cfg);

/// The hotspot a unit was assigned, or null.
const Hotspot* unit_hotspot(const SessionAnalysis& a, const OperationUnit& ou);

}  // namespace egoskill
