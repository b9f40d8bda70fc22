// Copyright 2026 The egoskill Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "egoskill/session_model.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace egoskill {

struct ClusterParams {
  double spatial_eps = 1.0;        // scene units
  double temporal_gap_max = 3.0;   // seconds
  std::size_t min_points = 3;

  void validate() const;
};

/// Default spatial_eps as a fraction of the scene diagonal.
inline constexpr double kDefaultEpsDiagFraction = 0.05;

struct Touch {
  double t = 0.0;
  Point2 position = Point2::Zero();
};

struct ClusteringResult {
  std::vector<Hotspot> hotspots;           // ordered by first_t, ids 0..n-1
  std::vector<std::size_t> noise_indices;  // input indices of unclustered touches
};

struct TouchDistribution {
  Point2 centroid = Point2::Zero();
  Point2 bias_vector = Point2::Zero();  // centroid - mean attention point
  Eigen::Matrix2d covariance = Eigen::Matrix2d::Zero();
  Point2 mean_attention = Point2::Zero();
  std::vector<Point2> points;
};

/// One entry per touching frame, positioned at the hand point.
std::vector<Touch> extract_touches(const Session& s);

/// Diagonal of the bounding box of every attention and hand point.
double scene_diagonal(const Session& s);

/// Connected components of the graph where two touches are adjacent iff they
/// are within spatial_eps in space and temporal_gap_max in time. Components
/// smaller than min_points are noise. Input order does not affect membership.
ClusteringResult cluster_touches(std::span<const Touch> touches, const ClusterParams& p);

/// Hotspot whose centroid is nearest the mean of the touches; lower id wins
/// ties. Empty when there are no hotspots or no touches.
std::optional<int> assign_operating_hotspot(std::span<const Touch> ou_touches, std::span<const Hotspot> hotspots);

/// Pooled touch statistics across sessions. Throws InputError on zero touches.
TouchDistribution touch_distribution(std::span<const Session> sessions);

std::string hotspots_csv(std::span<const Hotspot> hotspots);
std::string touch_distribution_json(const TouchDistribution& d);

}  // namespace egoskill
