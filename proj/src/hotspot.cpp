// Copyright 2026 The egoskill Authors
// SPDX-License-Identifier: Apache-2.0

#include "egoskill/hotspot.hpp"

#include "egoskill/text.hpp"

#include <json.hpp>

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>
#include <tuple>

namespace egoskill {

namespace {

struct DisjointSet {
  std::vector<std::size_t> parent;

  explicit DisjointSet(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }

  std::size_t find(std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

void ClusterParams::validate() const {
  if (!(spatial_eps > 0.0) || !(temporal_gap_max > 0.0) || min_points == 0)
    throw InputError("cluster parameters must be strictly positive");
}

std::vector<Touch> extract_touches(const Session& s) {
  std::vector<Touch> out;
  for (const auto& f : s.frames)
    if (f.touching && f.hand) out.push_back({f.t, *f.hand});
  return out;
}

double scene_diagonal(const Session& s) {
  Eigen::Vector2d lo = Eigen::Vector2d::Constant(std::numeric_limits<double>::infinity());
  Eigen::Vector2d hi = -lo;
  for (const auto& f : s.frames) {
    lo = lo.cwiseMin(f.attention);
    hi = hi.cwiseMax(f.attention);
    if (f.hand) {
      lo = lo.cwiseMin(*f.hand);
      hi = hi.cwiseMax(*f.hand);
    }
  }
  if (s.frames.empty()) return 0.0;
  return (hi - lo).norm();
}

ClusteringResult cluster_touches(std::span<const Touch> touches, const ClusterParams& p) {
  p.validate();
  const std::size_t n = touches.size();
  ClusteringResult result;
  if (n == 0) return result;

  // Sweep in canonical (t, x, y) order so the temporal window bounds the
  // neighbor search regardless of input order.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto key = [&](std::size_t i) {
    return std::make_tuple(touches[i].t, touches[i].position.x(), touches[i].position.y());
  };
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return key(a) < key(b); });

  const double eps2 = p.spatial_eps * p.spatial_eps;
  DisjointSet ds(n);
  for (std::size_t a = 0; a < n; ++a) {
    const auto& ta = touches[order[a]];
    for (std::size_t b = a + 1; b < n; ++b) {
      const auto& tb = touches[order[b]];
      if (tb.t - ta.t > p.temporal_gap_max) break;
      if ((tb.position - ta.position).squaredNorm() <= eps2) ds.unite(a, b);
    }
  }

  // Group by root; roots are canonical positions so groups come out ordered
  // by their earliest member.
  std::vector<std::vector<std::size_t>> groups(n);
  for (std::size_t a = 0; a < n; ++a) groups[ds.find(a)].push_back(a);

  for (const auto& g : groups) {
    if (g.empty()) continue;
    if (g.size() < p.min_points) {
      for (auto a : g) result.noise_indices.push_back(order[a]);
      continue;
    }
    Hotspot h;
    h.id = static_cast<int>(result.hotspots.size());
    h.touch_count = g.size();
    h.first_t = touches[order[g.front()]].t;
    h.last_t = touches[order[g.back()]].t;
    Point2 sum = Point2::Zero();
    for (auto a : g) {
      sum += touches[order[a]].position;
      h.member_touch_indices.push_back(order[a]);
    }
    h.centroid = sum / static_cast<double>(g.size());
    std::sort(h.member_touch_indices.begin(), h.member_touch_indices.end());
    result.hotspots.push_back(std::move(h));
  }
  std::sort(result.noise_indices.begin(), result.noise_indices.end());
  return result;
}

std::optional<int> assign_operating_hotspot(std::span<const Touch> ou_touches, std::span<const Hotspot> hotspots) {
  if (hotspots.empty() || ou_touches.empty()) return std::nullopt;
  Point2 mean = Point2::Zero();
  for (const auto& t : ou_touches) mean += t.position;
  mean /= static_cast<double>(ou_touches.size());

  const Hotspot* best = nullptr;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (const auto& h : hotspots) {
    double d2 = (h.centroid - mean).squaredNorm();
    if (d2 < best_d2 || (d2 == best_d2 && best && h.id < best->id)) {
      best = &h;
      best_d2 = d2;
    }
  }
  return best->id;
}

TouchDistribution touch_distribution(std::span<const Session> sessions) {
  TouchDistribution d;
  Point2 attention_sum = Point2::Zero();
  std::size_t attention_n = 0;
  for (const auto& s : sessions) {
    for (const auto& f : s.frames) {
      attention_sum += f.attention;
      ++attention_n;
      if (f.touching && f.hand) d.points.push_back(*f.hand);
    }
  }
  if (d.points.empty()) throw InputError("touch distribution needs at least one touch");

  const auto n = static_cast<double>(d.points.size());
  Eigen::Matrix2Xd pts(2, static_cast<Eigen::Index>(d.points.size()));
  for (std::size_t i = 0; i < d.points.size(); ++i) pts.col(static_cast<Eigen::Index>(i)) = d.points[i];
  d.centroid = pts.rowwise().mean();
  Eigen::Matrix2Xd centered = pts.colwise() - d.centroid;
  d.covariance = (centered * centered.transpose()) / n;
  d.mean_attention = attention_sum / static_cast<double>(attention_n);
  d.bias_vector = d.centroid - d.mean_attention;
  return d;
}

std::string hotspots_csv(std::span<const Hotspot> hotspots) {
  std::ostringstream out;
  out << "id,cx,cy,count,first_t,last_t\n";
  for (const auto& h : hotspots) {
    out << h.id << ',' << format_double(h.centroid.x()) << ',' << format_double(h.centroid.y()) << ','
        << h.touch_count << ',' << format_double(h.first_t) << ',' << format_double(h.last_t) << '\n';
  }
  return out.str();
}

std::string touch_distribution_json(const TouchDistribution& d) {
  nlohmann::ordered_json j;
  j["centroid"] = {d.centroid.x(), d.centroid.y()};
  j["bias"] = {d.bias_vector.x(), d.bias_vector.y()};
  j["mean_attention"] = {d.mean_attention.x(), d.mean_attention.y()};
  j["covariance"] = {{d.covariance(0, 0), d.covariance(0, 1)}, {d.covariance(1, 0), d.covariance(1, 1)}};
  auto pts = nlohmann::ordered_json::array();
  for (const auto& p : d.points) pts.push_back({p.x(), p.y()});
  j["points"] = pts;
  return j.dump(2) + "\n";
}

}  // namespace egoskill
