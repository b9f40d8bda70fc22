// Copyright 2026 The egoskill Authors
// SPDX-License-Identifier: Apache-2.0

#include "egoskill/pipeline.hpp"

namespace egoskill {

SessionAnalysis analyze_session(const Session& s, const RunConfig& cfg) {
  SessionAnalysis a;
  ClusterParams cp = cfg.cluster;
  cp.spatial_eps = a.spatial_eps = cfg.effective_eps(s);
  a.clusters = cluster_touches(extract_touches(s), cp);
  a.segmentation = segment_units(s, cfg.segmentation, a.clusters.hotspots);
  for (const auto& ou : a.segmentation.units)
    a.features.push_back(feature_vector(s, ou, unit_hotspot(a, ou), cfg.features));
  return a;
}

const Hotspot* unit_hotspot(const SessionAnalysis& a, const OperationUnit& ou) {
  if (!ou.hotspot_id) return nullptr;
  for (const auto& h : a.clusters.hotspots)
    if (h.id == *ou.hotspot_id) return &h;
  return nullptr;
}

}  // namespace egoskill
