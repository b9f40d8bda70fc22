// Copyright 2026 The egoskill Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "egoskill/session_model.hpp"

#include <cmath>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace fixture {

using egoskill::FrameRecord;
using egoskill::Point2;
using egoskill::Session;

struct Span {
  double seconds;
  bool hand;
  bool touch;
};

/// Frames at `rate` covering consecutive spans; attention and hand come from
/// the callbacks, evaluated at each frame time.
inline Session timeline(const std::vector<Span>& spans, double rate = 10.0,
                        std::function<Point2(double)> attention = [](double) { return Point2(0.0, 0.0); },
                        std::function<Point2(double)> hand = [](double) { return Point2(1.0, 1.0); }) {
  Session s;
  s.id = "s";
  s.operator_id = "op";
  s.coord_frame = "scene";
  s.sample_rate_hz = rate;
  int i = 0;
  for (const auto& sp : spans) {
    const int n = static_cast<int>(std::lround(sp.seconds * rate));
    for (int k = 0; k < n; ++k, ++i) {
      FrameRecord f;
      f.t = i / rate;
      f.attention = attention(f.t);
      if (sp.hand || sp.touch) f.hand = hand(f.t);
      f.touching = sp.touch;
      s.frames.push_back(f);
    }
  }
  return s;
}

inline std::vector<double> random_series(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  std::bernoulli_distribution repeat(0.2);
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i > 0 && repeat(rng) ? v[i - 1] : u(rng);
  return v;
}

/// Scratch directory removed on destruction.
struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& tag) {
    path = std::filesystem::temp_directory_path() /
           ("egoskill_" + tag + "_" + std::to_string(std::random_device{}()));
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
};

}  // namespace fixture
