// Copyright 2026 The egoskill Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "egoskill/features.hpp"
#include "egoskill/hotspot.hpp"
#include "egoskill/segmentation.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace egoskill {

enum class LogLevel { error, warn, info, debug };

struct RunConfig {
  std::vector<std::string> inputs;  // as given on the command line
  ClusterParams cluster{0.0};       // spatial_eps 0 derives it from the scene
  double spatial_eps_diag_fraction = kDefaultEpsDiagFraction;
  SegmentationParams segmentation;
  FeatureParams features;
  double expected_rate_hz = 0.0;    // 0 uses each session's own rate
  std::uint64_t seed = 0;
  LogLevel log_level = LogLevel::info;

  void validate() const;
  /// spatial_eps for one session, resolving the automatic default.
  double effective_eps(const Session& s) const;
};

/// Sections hotspot, segmentation, features, ingest plus seed and log_level.
/// Unknown keys throw InputError.
RunConfig parse_run_config(const nlohmann::json& j);

/// Applies `section.key=value` (or `key=value` for top-level keys). The value
/// is read as JSON when it parses, as a string otherwise.
void apply_override(nlohmann::json& j, std::string_view assignment);

/// Config file (optional) plus overrides, validated.
RunConfig load_run_config(const std::optional<std::filesystem::path>& path, const std::vector<std::string>& overrides);

nlohmann::ordered_json run_config_json(const RunConfig& c);

std::string_view to_string(LogLevel l);
LogLevel parse_log_level(std::string_view s);

}  // namespace egoskill
