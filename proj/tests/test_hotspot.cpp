// Copyright 2026 The egoskill Authors
// SPDX-License-Identifier: Apache-2.0

#include "egoskill/hotspot.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace egoskill;

namespace {

std::vector<Touch> group(Point2 at, double t0, int n, double spread = 1.0) {
  std::vector<Touch> out;
  for (int i = 0; i < n; ++i) out.push_back({t0 + 0.1 * i, at + Point2(spread * (i % 3), spread * (i % 2))});
  return out;
}

std::set<std::set<std::size_t>> memberships(const ClusteringResult& r) {
  std::set<std::set<std::size_t>> out;
  for (const auto& h : r.hotspots) out.insert({h.member_touch_indices.begin(), h.member_touch_indices.end()});
  return out;
}

std::vector<Touch> random_touches(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> pos(0.0, 100.0);
  std::uniform_real_distribution<double> dt(0.0, 2.0);
  std::vector<Touch> out;
  double t = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    t += dt(rng);
    out.push_back({t, Point2(pos(rng), pos(rng))});
  }
  return out;
}

}  // namespace

TEST_CASE("extract_touches keeps touching frames at the hand point") {
  CHECK(extract_touches(fixture::timeline({{1.0, true, false}})).empty());

  auto s = fixture::timeline({{0.5, true, true}}, 10.0, [](double) { return Point2(0, 0); },
                             [](double t) { return Point2(t * 10.0, 2.0); });
  auto touches = extract_touches(s);
  REQUIRE(touches.size() == 5);
  CHECK(touches[3].position == Point2(3.0, 2.0));

  auto alt = fixture::timeline({{0.1, true, true}, {0.1, true, false}, {0.1, true, true}, {0.1, true, false}});
  auto at = extract_touches(alt);
  REQUIRE(at.size() == 2);
  CHECK(at[0].t == 0.0);
  CHECK(at[1].t == doctest::Approx(0.2));
}

TEST_CASE("two spatial groups") {
  auto touches = group({0, 0}, 0.0, 10);
  auto b = group({100, 0}, 1.0, 10);
  touches.insert(touches.end(), b.begin(), b.end());
  std::sort(touches.begin(), touches.end(), [](auto& x, auto& y) { return x.t < y.t; });
  ClusterParams p{10.0, 3.0, 3};
  auto r = cluster_touches(touches, p);
  CHECK(r.hotspots.size() == 2);
  CHECK(memberships(r) == oracle::clusters(touches, 10.0, 3.0, 3));
  CHECK(r.hotspots[0].first_t <= r.hotspots[1].first_t);
  CHECK(r.hotspots[0].id == 0);
  CHECK(r.hotspots[1].id == 1);
}

TEST_CASE("isolated touch is noise") {
  std::vector<Touch> one{{0.0, {5, 5}}};
  auto r = cluster_touches(one, ClusterParams{10.0, 3.0, 3});
  CHECK(r.hotspots.empty());
  CHECK(r.noise_indices == std::vector<std::size_t>{0});
  CHECK(cluster_touches(std::vector<Touch>{}, ClusterParams{10.0, 3.0, 3}).hotspots.empty());
}

TEST_CASE("co-located groups split by the temporal gap") {
  auto touches = group({0, 0}, 0.0, 10);
  auto late = group({0, 0}, 20.0, 10);
  touches.insert(touches.end(), late.begin(), late.end());
  auto r = cluster_touches(touches, ClusterParams{10.0, 3.0, 3});
  CHECK(r.hotspots.size() == 2);
  CHECK(memberships(r) == oracle::clusters(touches, 10.0, 3.0, 3));
}

TEST_CASE("centroid, counts and csv") {
  std::vector<Touch> t{{0.0, {0, 0}}, {0.1, {2, 0}}, {0.2, {1, 3}}};
  auto r = cluster_touches(t, ClusterParams{5.0, 1.0, 3});
  REQUIRE(r.hotspots.size() == 1);
  CHECK(r.hotspots[0].centroid.isApprox(Point2(1, 1)));
  CHECK(r.hotspots[0].touch_count == 3);
  CHECK(r.hotspots[0].last_t == doctest::Approx(0.2));
  CHECK(hotspots_csv(r.hotspots) == "id,cx,cy,count,first_t,last_t\n0,1,1,3,0,0.2\n");
}

TEST_CASE("invalid parameters are rejected") {
  std::vector<Touch> t{{0.0, {0, 0}}};
  CHECK_THROWS_AS(cluster_touches(t, ClusterParams{0.0, 1.0, 3}), InputError);
  CHECK_THROWS_AS(cluster_touches(t, ClusterParams{1.0, -1.0, 3}), InputError);
  CHECK_THROWS_AS(cluster_touches(t, ClusterParams{1.0, 1.0, 0}), InputError);
}

TEST_CASE("clustering properties on random inputs") {
  std::mt19937_64 rng(7);
  for (int c = 0; c < 40; ++c) {
    auto touches = random_touches(rng, 1 + rng() % 120);
    const ClusterParams p{5.0 + static_cast<double>(rng() % 20), 1.0 + static_cast<double>(rng() % 4), 1 + rng() % 4};
    auto r = cluster_touches(touches, p);

    // Every touch is in exactly one cluster or is noise; no cluster is small.
    std::vector<int> seen(touches.size(), 0);
    for (const auto& h : r.hotspots) {
      CHECK(h.member_touch_indices.size() >= p.min_points);
      for (auto i : h.member_touch_indices) ++seen[i];
    }
    for (auto i : r.noise_indices) ++seen[i];
    CHECK(std::all_of(seen.begin(), seen.end(), [](int k) { return k == 1; }));

    // Shuffling the input changes nothing but the indices.
    std::vector<std::size_t> perm(touches.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Touch> shuffled;
    for (auto i : perm) shuffled.push_back(touches[i]);
    auto rs = cluster_touches(shuffled, p);
    std::set<std::set<std::size_t>> mapped;
    for (const auto& h : rs.hotspots) {
      std::set<std::size_t> m;
      for (auto i : h.member_touch_indices) m.insert(perm[i]);
      mapped.insert(m);
    }
    CHECK(mapped == memberships(r));
    REQUIRE(rs.hotspots.size() == r.hotspots.size());
    for (std::size_t k = 0; k < r.hotspots.size(); ++k) {
      CHECK(rs.hotspots[k].first_t == r.hotspots[k].first_t);
      CHECK(rs.hotspots[k].centroid.isApprox(r.hotspots[k].centroid));
    }

    // Growing eps never adds clusters when every component is kept.
    ClusterParams loose = p;
    loose.min_points = 1;
    ClusterParams looser = loose;
    looser.spatial_eps *= 2.0;
    CHECK(cluster_touches(touches, looser).hotspots.size() <= cluster_touches(touches, loose).hotspots.size());
  }
}

TEST_CASE("operating hotspot assignment") {
  std::vector<Hotspot> hs(4);
  for (int i = 0; i < 4; ++i) {
    hs[static_cast<std::size_t>(i)].id = i;
    hs[static_cast<std::size_t>(i)].centroid = Point2(10.0 * i, 0.0);
  }
  std::vector<Touch> near2{{0.0, {19, 1}}, {0.1, {21, -1}}};
  CHECK(assign_operating_hotspot(near2, hs) == 2);
  std::vector<Touch> between{{0.0, {20, 0}}};  // equidistant from 1 and 3
  CHECK(assign_operating_hotspot(between, std::vector<Hotspot>{hs[1], hs[3]}) == 1);
  CHECK_FALSE(assign_operating_hotspot(near2, std::vector<Hotspot>{}).has_value());
}

TEST_CASE("touch distribution moments") {
  auto at_point = fixture::timeline({{0.3, true, true}}, 10.0, [](double) { return Point2(2, 2); },
                                    [](double) { return Point2(2, 2); });
  auto d0 = touch_distribution(std::vector<Session>{at_point});
  CHECK(d0.bias_vector.isZero());

  auto pm = fixture::timeline({{0.2, true, true}}, 10.0, [](double) { return Point2(0, 0); },
                              [](double t) { return t < 0.05 ? Point2(-1, 0) : Point2(1, 0); });
  auto d1 = touch_distribution(std::vector<Session>{pm});
  CHECK(d1.centroid.isZero());
  CHECK(d1.covariance(0, 0) == doctest::Approx(1.0));
  CHECK(d1.covariance(1, 1) == doctest::Approx(0.0));
  CHECK(d1.covariance(0, 1) == d1.covariance(1, 0));

  auto single = fixture::timeline({{0.1, true, true}}, 10.0, [](double) { return Point2(0, 0); },
                                  [](double) { return Point2(3, 4); });
  CHECK(touch_distribution(std::vector<Session>{single}).bias_vector == Point2(3, 4));

  CHECK_THROWS_AS(touch_distribution(std::vector<Session>{fixture::timeline({{1.0, true, false}})}), InputError);
  CHECK(touch_distribution_json(d1).find("covariance") != std::string::npos);
}

TEST_CASE("scene diagonal spans attention and hand points") {
  auto s = fixture::timeline({{0.2, true, false}}, 10.0, [](double t) { return t < 0.05 ? Point2(0, 0) : Point2(3, 0); },
                             [](double) { return Point2(0, 4); });
  CHECK(scene_diagonal(s) == doctest::Approx(5.0));
}
