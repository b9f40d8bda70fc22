// Copyright 2026 The egoskill Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "egoskill/session_model.hpp"

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace egoskill {

/// JSONL is canonical. The CSV form carries the same fields: a two-line
/// header block (`id,operator,ordinal,rate_hz,coord_frame` + values) followed
/// by `t,ax,ay,hx,hy,touch` and one row per frame, empty hx/hy for no hand.
enum class SessionFormat { jsonl, csv };

struct ValidationStats {
  std::size_t frame_count = 0;
  std::size_t touch_count = 0;
  double hand_visible_fraction = 0.0;
};

struct ValidationReport {
  std::string session_id;
  std::vector<std::pair<std::size_t, std::string>> errors;  // (record index, message)
  std::vector<std::string> warnings;
  ValidationStats stats;

  bool ok() const { return errors.empty(); }
};

/// Parses a session stream. Throws InputError carrying the 1-based line for
/// malformed lines, non-increasing or duplicate timestamps, and contact
/// without a hand.
Session parse_session(std::istream& in, SessionFormat format);

/// Format from extension: `.jsonl`, or `.csv` (conventionally `.session.csv`).
/// Loads the `<stem>.steps.csv` sidecar when present.
Session load_session(const std::filesystem::path& path);

/// Path of the step-label sidecar belonging to a session file.
std::filesystem::path step_sidecar_path(const std::filesystem::path& session_path);

bool is_session_file(const std::filesystem::path& path);

void write_session(std::ostream& out, const Session& s, SessionFormat format);
std::string serialize_session(const Session& s, SessionFormat format);

/// `start_t,end_t,step_id` with header row.
std::vector<StepLabel> parse_step_labels(std::istream& in);
void write_step_labels(std::ostream& out, const std::vector<StepLabel>& labels);

/// `step_id,rater_id,role,score` with header row.
DifficultyRatings parse_ratings(std::istream& in);
void write_ratings(std::ostream& out, const DifficultyRatings& r);

/// Report-only check. Errors for broken invariants, warnings for sampling
/// gaps longer than 2 / expected_rate_hz and for sessions with no hand frames.
ValidationReport validate_session(const Session& s, double expected_rate_hz);

std::string validation_report_json(const ValidationReport& r);

}  // namespace egoskill
