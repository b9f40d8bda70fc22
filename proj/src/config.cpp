// Copyright 2026 The egoskill Authors
// SPDX-License-Identifier: Apache-2.0

#include "egoskill/config.hpp"

#include "egoskill/text.hpp"

#include <set>

namespace egoskill {

namespace {

using json = nlohmann::json;

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
  if (!j.is_object()) throw InputError("config: " + where + " must be an object");
  for (const auto& [k, v] : j.items())
    if (!known.count(k)) throw InputError("config: unknown key \"" + (where.empty() ? k : where + "." + k) + "\"");
}

template <typename T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    throw InputError("config: bad value for \"" + where + "." + key + "\"");
  }
}

}  // namespace

std::string_view to_string(LogLevel l) {
  switch (l) {
    case LogLevel::error: return "error";
    case LogLevel::warn: return "warn";
    case LogLevel::info: return "info";
    case LogLevel::debug: return "debug";
  }
  return "info";
}

LogLevel parse_log_level(std::string_view s) {
  for (auto l : {LogLevel::error, LogLevel::warn, LogLevel::info, LogLevel::debug})
    if (to_string(l) == s) return l;
  throw InputError("config: unknown log_level \"" + std::string(s) + "\"");
}

void RunConfig::validate() const {
  if (cluster.spatial_eps < 0.0) throw InputError("config: hotspot.spatial_eps must be >= 0");
  if (!(spatial_eps_diag_fraction > 0.0)) throw InputError("config: hotspot.spatial_eps_diag_fraction must be positive");
  ClusterParams probe = cluster;
  probe.spatial_eps = 1.0;
  probe.validate();
  segmentation.validate();
  features.validate();
  if (expected_rate_hz < 0.0) throw InputError("config: ingest.expected_rate_hz must be >= 0");
}

double RunConfig::effective_eps(const Session& s) const {
  if (cluster.spatial_eps > 0.0) return cluster.spatial_eps;
  const double eps = spatial_eps_diag_fraction * scene_diagonal(s);
  return eps > 0.0 ? eps : spatial_eps_diag_fraction;
}

RunConfig parse_run_config(const json& j) {
  RunConfig c;
  if (j.is_null()) return c;
  reject_unknown(j, {"inputs", "hotspot", "segmentation", "features", "ingest", "seed", "log_level"}, "");
  read(j, "inputs", c.inputs, "");
  read(j, "seed", c.seed, "");
  if (j.contains("log_level")) {
    std::string level;
    read(j, "log_level", level, "");
    c.log_level = parse_log_level(level);
  }
  if (auto it = j.find("hotspot"); it != j.end()) {
    reject_unknown(*it, {"spatial_eps", "spatial_eps_diag_fraction", "temporal_gap_max", "min_points"}, "hotspot");
    read(*it, "spatial_eps", c.cluster.spatial_eps, "hotspot");
    read(*it, "spatial_eps_diag_fraction", c.spatial_eps_diag_fraction, "hotspot");
    read(*it, "temporal_gap_max", c.cluster.temporal_gap_max, "hotspot");
    read(*it, "min_points", c.cluster.min_points, "hotspot");
  }
  if (auto it = j.find("segmentation"); it != j.end()) {
    reject_unknown(*it, {"touch_merge_gap", "min_operating", "hand_presence_debounce"}, "segmentation");
    read(*it, "touch_merge_gap", c.segmentation.touch_merge_gap, "segmentation");
    read(*it, "min_operating", c.segmentation.min_operating, "segmentation");
    read(*it, "hand_presence_debounce", c.segmentation.hand_presence_debounce, "segmentation");
  }
  if (auto it = j.find("features"); it != j.end()) {
    reject_unknown(*it,
                   {"sign_deadband", "lag_threshold", "min_operating_for_R", "early_shift_min_ratio", "search_min_rate"},
                   "features");
    read(*it, "sign_deadband", c.features.sign_deadband, "features");
    read(*it, "lag_threshold", c.features.lag_threshold, "features");
    read(*it, "min_operating_for_R", c.features.min_operating_for_R, "features");
    read(*it, "early_shift_min_ratio", c.features.early_shift_min_ratio, "features");
    read(*it, "search_min_rate", c.features.search_min_rate, "features");
  }
  if (auto it = j.find("ingest"); it != j.end()) {
    reject_unknown(*it, {"expected_rate_hz"}, "ingest");
    read(*it, "expected_rate_hz", c.expected_rate_hz, "ingest");
  }
  c.validate();
  return c;
}

void apply_override(json& j, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) throw InputError("override must look like section.key=value");
  const std::string path(trim(assignment.substr(0, eq)));
  const std::string raw(trim(assignment.substr(eq + 1)));
  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;
  if (!j.is_object()) j = json::object();
  const auto dot = path.find('.');
  if (dot == std::string::npos) {
    j[path] = value;
  } else {
    auto& section = j[path.substr(0, dot)];
    if (!section.is_null() && !section.is_object()) throw InputError("config: " + path.substr(0, dot) + " is not a section");
    section[path.substr(dot + 1)] = value;
  }
}

RunConfig load_run_config(const std::optional<std::filesystem::path>& path, const std::vector<std::string>& overrides) {
  json j = json::object();
  if (path) {
    j = json::parse(read_file(*path), nullptr, false);
    if (j.is_discarded()) throw InputError("config: " + path->string() + " is not valid JSON");
  }
  for (const auto& o : overrides) apply_override(j, o);
  return parse_run_config(j);
}

nlohmann::ordered_json run_config_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["inputs"] = c.inputs;
  j["hotspot"] = {{"spatial_eps", c.cluster.spatial_eps},
                  {"spatial_eps_diag_fraction", c.spatial_eps_diag_fraction},
                  {"temporal_gap_max", c.cluster.temporal_gap_max},
                  {"min_points", c.cluster.min_points}};
  j["segmentation"] = {{"touch_merge_gap", c.segmentation.touch_merge_gap},
                       {"min_operating", c.segmentation.min_operating},
                       {"hand_presence_debounce", c.segmentation.hand_presence_debounce}};
  j["features"] = {{"sign_deadband", c.features.sign_deadband},
                   {"lag_threshold", c.features.lag_threshold},
                   {"min_operating_for_R", c.features.min_operating_for_R},
                   {"early_shift_min_ratio", c.features.early_shift_min_ratio},
                   {"search_min_rate", c.features.search_min_rate}};
  j["ingest"] = {{"expected_rate_hz", c.expected_rate_hz}};
  j["seed"] = c.seed;
  j["log_level"] = std::string(to_string(c.log_level));
  return j;
}

}  // namespace egoskill
