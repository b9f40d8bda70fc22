// Copyright 2026 The egoskill Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace egoskill {

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

/// Empty string for an absent value.
std::string format_optional(const std::optional<double>& v);

/// Strict full-string parse; rejects trailing garbage and non-finite values.
std::optional<double> parse_finite(std::string_view s);

/// Splits one CSV record on commas. Fields are never quoted in our formats.
std::vector<std::string> split_csv(std::string_view line);

std::string_view trim(std::string_view s);

/// Writes through a sibling temp file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

std::string read_file(const std::filesystem::path& path);

}  // namespace egoskill
