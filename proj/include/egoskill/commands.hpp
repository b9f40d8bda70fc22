// Copyright 2026 The egoskill Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace egoskill {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitEmptyInput = 2;
inline constexpr int kExitPartial = 3;

struct CommandOptions {
  std::vector<std::filesystem::path> inputs;
  std::filesystem::path out = ".";
  int jobs = 1;
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> config;
  std::vector<std::string> overrides;  // section.key=value
};

/// Session files named by `inputs`; directories are searched recursively.
/// Sorted, so discovery order never depends on the filesystem.
std::vector<std::filesystem::path> discover_sessions(const std::vector<std::filesystem::path>& inputs);

/// Each command writes its files under opts.out, echoes the effective config
/// and returns an exit code. Diagnostics go to `log`. InputError escapes only
/// for bad configuration.
int cmd_validate(const CommandOptions& opts, std::ostream& log);
int cmd_analyze(const CommandOptions& opts, std::ostream& log);

/// inputs: pair manifest, features directory.
int cmd_compare(const CommandOptions& opts, std::ostream& log);

/// inputs: features directory, ratings.csv.
int cmd_correlate(const CommandOptions& opts, std::ostream& log);

/// inputs: optional synth spec JSON.
int cmd_synth(const CommandOptions& opts, std::ostream& log);

}  // namespace egoskill
