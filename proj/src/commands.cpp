// Copyright 2026 The egoskill Authors
// SPDX-License-Identifier: Apache-2.0

#include "egoskill/commands.hpp"

#include "egoskill/analysis.hpp"
#include "egoskill/config.hpp"
#include "egoskill/features.hpp"
#include "egoskill/hotspot.hpp"
#include "egoskill/ingest.hpp"
#include "egoskill/parallel.hpp"
#include "egoskill/pipeline.hpp"
#include "egoskill/segmentation.hpp"
#include "egoskill/synth.hpp"
#include "egoskill/text.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace egoskill {

namespace fs = std::filesystem;

namespace {

/// Messages are buffered per work item and flushed in input order so the log
/// does not depend on scheduling.
struct Messages {
  std::vector<std::pair<LogLevel, std::string>> lines;
  void add(LogLevel l, std::string m) { lines.emplace_back(l, std::move(m)); }
  void flush(std::ostream& out, LogLevel max) const {
    for (const auto& [l, m] : lines)
      if (l <= max) out << to_string(l) << ": " << m << '\n';
  }
};

RunConfig effective_config(const CommandOptions& opts) {
  RunConfig c = load_run_config(opts.config, opts.overrides);
  if (opts.seed) c.seed = *opts.seed;
  c.inputs.clear();
  for (const auto& p : opts.inputs) c.inputs.push_back(p.generic_string());
  return c;
}

void echo_config(const RunConfig& c, const fs::path& out) {
  write_file_atomic(out / "effective_config.json", run_config_json(c).dump(2) + "\n");
}

std::string where(const fs::path& file, const InputError& e) {
  std::string s = file.generic_string();
  if (e.line()) s += ":" + std::to_string(e.line());
  return s + ": " + e.what();
}

struct LoadedFeatures {
  std::string session_id;
  std::vector<FeatureVector> features;
};

/// features.csv files one level below `dir`, keyed by their directory name.
std::vector<LoadedFeatures> load_feature_dir(const fs::path& dir, int jobs) {
  if (!fs::is_directory(dir)) throw InputError("features directory not found: " + dir.generic_string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_directory() && fs::is_regular_file(entry.path() / "features.csv"))
      files.push_back(entry.path() / "features.csv");
  std::sort(files.begin(), files.end());
  std::vector<LoadedFeatures> out(files.size());
  parallel_for(files.size(), jobs, [&](std::size_t i) {
    out[i].session_id = files[i].parent_path().filename().string();
    try {
      out[i].features = parse_features_csv(read_file(files[i]));
    } catch (const InputError& e) {
      throw InputError(where(files[i], e));
    }
  });
  return out;
}

template <typename T, typename Parse>
T parse_file(const fs::path& path, Parse parse) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.generic_string());
  try {
    return parse(in);
  } catch (const InputError& e) {
    throw InputError(where(path, e));
  }
}

struct SessionOutcome {
  bool ok = false;
  std::optional<Session> session;
  Messages messages;
};

SessionOutcome analyze_one(const fs::path& path, const RunConfig& cfg, const fs::path& out) {
  SessionOutcome r;
  Session s;
  try {
    s = load_session(path);
  } catch (const InputError& e) {
    r.messages.add(LogLevel::error, where(path, e));
    return r;
  }
  const auto report = validate_session(s, cfg.expected_rate_hz);
  for (const auto& w : report.warnings) r.messages.add(LogLevel::warn, s.id + ": " + w);
  if (!report.ok()) {
    for (const auto& [idx, msg] : report.errors)
      r.messages.add(LogLevel::error, s.id + ": record " + std::to_string(idx) + ": " + msg);
    return r;
  }

  SessionAnalysis a;
  try {
    a = analyze_session(s, cfg);
  } catch (const std::exception& e) {
    r.messages.add(LogLevel::error, s.id + ": " + e.what());
    return r;
  }
  for (const auto& w : a.segmentation.warnings) r.messages.add(LogLevel::warn, s.id + ": " + w);
  if (a.segmentation.units.empty()) r.messages.add(LogLevel::warn, s.id + ": no complete operation units");
  if (!a.clusters.noise_indices.empty())
    r.messages.add(LogLevel::debug, s.id + ": " + std::to_string(a.clusters.noise_indices.size()) + " noise touches");

  const fs::path dir = out / s.id;
  fs::remove_all(dir / "traces");  // stale traces from an earlier run
  for (const auto& ou : a.segmentation.units) {
    if (const Hotspot* h = unit_hotspot(a, ou))
      write_file_atomic(dir / "traces" / (s.id + "_" + std::to_string(ou.index) + ".csv"),
                        trace_csv(s, ou, h->centroid));
  }
  write_file_atomic(dir / "features.csv", features_csv(a.features));
  write_file_atomic(dir / "units.csv", units_csv(a.segmentation.units));
  write_file_atomic(dir / "hotspots.csv", hotspots_csv(a.clusters.hotspots));
  write_file_atomic(dir / "validation.json", validation_report_json(report));
  r.ok = true;
  r.session = std::move(s);
  return r;
}

}  // namespace

std::vector<fs::path> discover_sessions(const std::vector<fs::path>& inputs) {
  std::set<fs::path> found;
  for (const auto& in : inputs) {
    if (fs::is_directory(in)) {
      for (const auto& e : fs::recursive_directory_iterator(in))
        if (e.is_regular_file() && is_session_file(e.path())) found.insert(e.path());
    } else if (fs::is_regular_file(in)) {
      found.insert(in);
    } else {
      throw InputError("input not found: " + in.generic_string());
    }
  }
  return {found.begin(), found.end()};
}

int cmd_validate(const CommandOptions& opts, std::ostream& log) {
  const RunConfig cfg = effective_config(opts);
  const auto files = discover_sessions(opts.inputs);
  if (files.empty()) {
    log << "error: no sessions found\n";
    return kExitEmptyInput;
  }
  std::vector<Messages> messages(files.size());
  std::vector<std::optional<ValidationReport>> reports(files.size());
  parallel_for(files.size(), opts.jobs, [&](std::size_t i) {
    try {
      const Session s = load_session(files[i]);
      reports[i] = validate_session(s, cfg.expected_rate_hz);
      for (const auto& [idx, msg] : reports[i]->errors)
        messages[i].add(LogLevel::error, files[i].generic_string() + ": record " + std::to_string(idx) + ": " + msg);
      for (const auto& w : reports[i]->warnings) messages[i].add(LogLevel::warn, files[i].generic_string() + ": " + w);
    } catch (const InputError& e) {
      messages[i].add(LogLevel::error, where(files[i], e));
    }
  });

  bool failed = false;
  auto arr = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < files.size(); ++i) {
    messages[i].flush(log, cfg.log_level);
    nlohmann::ordered_json entry;
    entry["file"] = files[i].generic_string();
    if (reports[i]) {
      entry["report"] = nlohmann::ordered_json::parse(validation_report_json(*reports[i]));
      failed |= !reports[i]->ok();
    } else {
      entry["report"] = nullptr;
      entry["parse_error"] = messages[i].lines.front().second;
      failed = true;
    }
    arr.push_back(entry);
  }
  write_file_atomic(opts.out / "validation.json", arr.dump(2) + "\n");
  echo_config(cfg, opts.out);
  return failed ? kExitInputError : kExitOk;
}

int cmd_analyze(const CommandOptions& opts, std::ostream& log) {
  const RunConfig cfg = effective_config(opts);
  const auto files = discover_sessions(opts.inputs);
  if (files.empty()) {
    log << "error: no sessions found\n";
    return kExitEmptyInput;
  }
  std::vector<SessionOutcome> outcomes(files.size());
  parallel_for(files.size(), opts.jobs, [&](std::size_t i) { outcomes[i] = analyze_one(files[i], cfg, opts.out); });

  std::vector<Session> good;
  std::set<std::string> ids;
  std::size_t n_failed = 0;
  for (std::size_t i = 0; i < files.size(); ++i) {
    auto& o = outcomes[i];
    o.messages.flush(log, cfg.log_level);
    if (o.ok && !ids.insert(o.session->id).second) {
      log << "error: " << files[i].generic_string() << ": duplicate session id " << o.session->id << '\n';
      o.ok = false;
    }
    if (!o.ok) {
      ++n_failed;
      continue;
    }
    good.push_back(std::move(*o.session));
  }

  bool any_touch = false;
  for (const auto& s : good)
    for (const auto& f : s.frames) any_touch |= f.touching;
  if (any_touch) {
    write_file_atomic(opts.out / "touchdist.json", touch_distribution_json(touch_distribution(good)));
  } else if (!good.empty() && cfg.log_level >= LogLevel::warn) {
    log << "warn: no touches in any session; touchdist.json not written\n";
  }
  echo_config(cfg, opts.out);
  if (cfg.log_level >= LogLevel::info)
    log << "info: analyzed " << good.size() << " of " << files.size() << " sessions\n";
  if (n_failed == 0) return kExitOk;
  return good.empty() ? kExitInputError : kExitPartial;
}

int cmd_compare(const CommandOptions& opts, std::ostream& log) {
  const RunConfig cfg = effective_config(opts);
  if (opts.inputs.size() != 2) throw InputError("compare needs a pair manifest and a features directory");
  const auto pairs = parse_file<std::vector<SessionPair>>(opts.inputs[0], [](std::istream& in) {
    return parse_pair_manifest(in);
  });
  if (pairs.empty()) {
    log << "error: pair manifest lists no pairs\n";
    return kExitEmptyInput;
  }
  std::map<std::string, SessionSummary> summaries;
  for (auto& lf : load_feature_dir(opts.inputs[1], opts.jobs)) {
    if (lf.features.empty()) {
      SessionSummary s;
      s.session_id = lf.session_id;
      s.stats.resize(feature_names().size());
      summaries[lf.session_id] = std::move(s);
    } else {
      summaries[lf.session_id] = session_feature_summary(lf.features, lf.session_id);
    }
  }
  const auto report = pairwise_comparison(pairs, summaries);
  for (const auto& m : report.log)
    if (cfg.log_level >= LogLevel::debug) log << "debug: " << m << '\n';
  write_file_atomic(opts.out / "comparison.csv", comparison_csv(report));
  write_file_atomic(opts.out / "comparison.json", comparison_json(report));
  echo_config(cfg, opts.out);
  return kExitOk;
}

int cmd_correlate(const CommandOptions& opts, std::ostream& log) {
  const RunConfig cfg = effective_config(opts);
  if (opts.inputs.size() != 2) throw InputError("correlate needs a features directory and a ratings file");
  const auto loaded = load_feature_dir(opts.inputs[0], opts.jobs);
  const auto ratings = parse_file<DifficultyRatings>(opts.inputs[1], [](std::istream& in) { return parse_ratings(in); });
  std::vector<FeatureVector> all;
  for (const auto& lf : loaded) all.insert(all.end(), lf.features.begin(), lf.features.end());
  if (all.empty() || ratings.ratings.empty()) {
    log << "error: no labeled operation units or no ratings\n";
    return kExitEmptyInput;
  }
  std::set<std::string> rated;
  for (const auto& r : ratings.ratings) rated.insert(r.step_id);
  const std::vector<std::string> expected(rated.begin(), rated.end());
  const auto agg = step_aggregate(all, expected);
  auto report = difficulty_correlation(agg.steps, ratings);
  report.log.insert(report.log.begin(), agg.log.begin(), agg.log.end());
  for (const auto& m : report.log)
    if (cfg.log_level >= LogLevel::info) log << "info: " << m << '\n';
  write_file_atomic(opts.out / "correlation.csv", correlation_csv(report));
  write_file_atomic(opts.out / "correlation.json", correlation_json(report));
  echo_config(cfg, opts.out);
  return kExitOk;
}

int cmd_synth(const CommandOptions& opts, std::ostream& log) {
  const RunConfig cfg = effective_config(opts);
  if (opts.inputs.size() > 1) throw InputError("synth takes at most one spec file");
  CohortSpec spec;
  nlohmann::json j = nlohmann::json::object();
  if (!opts.inputs.empty()) {
    j = nlohmann::json::parse(read_file(opts.inputs[0]), nullptr, false);
    if (j.is_discarded()) throw InputError(opts.inputs[0].generic_string() + ": not valid JSON");
  }
  if (opts.seed) j["seed"] = *opts.seed;
  spec = parse_cohort_spec(j);
  const auto data = generate_cohort(spec, opts.jobs);
  write_cohort(data, spec, opts.out);
  echo_config(cfg, opts.out);
  if (cfg.log_level >= LogLevel::info)
    log << "info: wrote " << data.sessions.size() << " sessions to " << opts.out.generic_string() << '\n';
  return kExitOk;
}

}  // namespace egoskill
