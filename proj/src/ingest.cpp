// Copyright 2026 The egoskill Authors
// SPDX-License-Identifier: Apache-2.0

#include "egoskill/ingest.hpp"

#include "egoskill/text.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace egoskill {

namespace {

using ordered_json = nlohmann::ordered_json;

double json_number(const nlohmann::json& obj, const char* key, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end()) throw InputError(std::string("missing field \"") + key + "\"", line);
  if (!it->is_number()) throw InputError(std::string("field \"") + key + "\" must be a number", line);
  double v = it->get<double>();
  if (!std::isfinite(v)) throw InputError(std::string("field \"") + key + "\" is not finite", line);
  return v;
}

std::string json_string(const nlohmann::json& obj, const char* key, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string())
    throw InputError(std::string("missing or non-string field \"") + key + "\"", line);
  return it->get<std::string>();
}

void check_rate(double rate, std::size_t line) {
  if (!(rate > 0.0)) throw InputError("rate_hz must be positive", line);
}

// Enforces the per-frame invariants against the previously accepted frame.
void append_frame(Session& s, FrameRecord f, std::size_t line) {
  if (f.t < 0.0) throw InputError("negative timestamp", line);
  if (f.touching && !f.hand) throw InputError("contact without hand", line);
  if (!s.frames.empty()) {
    double prev = s.frames.back().t;
    if (f.t == prev) throw InputError("duplicate timestamp " + format_double(f.t), line);
    if (f.t < prev) throw InputError("non-monotonic timestamp " + format_double(f.t), line);
  }
  s.frames.push_back(std::move(f));
}

Session parse_jsonl(std::istream& in) {
  Session s;
  bool have_header = false;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    auto line = trim(raw);
    if (line.empty()) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw InputError(std::string("malformed JSON: ") + e.what(), line_no);
    }
    if (!obj.is_object()) throw InputError("expected a JSON object", line_no);

    if (!have_header) {
      s.id = json_string(obj, "id", line_no);
      s.operator_id = json_string(obj, "operator", line_no);
      s.ordinal = parse_ordinal(json_string(obj, "ordinal", line_no));
      s.sample_rate_hz = json_number(obj, "rate_hz", line_no);
      check_rate(s.sample_rate_hz, line_no);
      s.coord_frame = json_string(obj, "coord_frame", line_no);
      have_header = true;
      continue;
    }

    FrameRecord f;
    f.t = json_number(obj, "t", line_no);
    f.attention = Point2(json_number(obj, "ax", line_no), json_number(obj, "ay", line_no));
    auto hx = obj.find("hx");
    auto hy = obj.find("hy");
    if (hx == obj.end() || hy == obj.end()) throw InputError("missing field \"hx\"/\"hy\"", line_no);
    if (hx->is_null() != hy->is_null()) throw InputError("hx and hy must both be null or both numbers", line_no);
    if (!hx->is_null()) f.hand = Point2(json_number(obj, "hx", line_no), json_number(obj, "hy", line_no));
    auto touch = obj.find("touch");
    if (touch == obj.end() || !touch->is_boolean()) throw InputError("field \"touch\" must be a boolean", line_no);
    f.touching = touch->get<bool>();
    append_frame(s, std::move(f), line_no);
  }
  if (!have_header) throw InputError("missing session header");
  if (s.frames.empty()) throw InputError("session has no frames");
  return s;
}

bool parse_bool(std::string_view v, std::size_t line) {
  v = trim(v);
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw InputError("touch must be true/false", line);
}

double csv_number(std::string_view v, const char* name, std::size_t line) {
  auto d = parse_finite(v);
  if (!d) throw InputError(std::string("field \"") + name + "\" is not a finite number", line);
  return *d;
}

Session parse_csv(std::istream& in) {
  Session s;
  std::string raw;
  std::size_t line_no = 0;
  int stage = 0;  // 0 header names, 1 header values, 2 frame header, 3 frames
  while (std::getline(in, raw)) {
    ++line_no;
    if (trim(raw).empty()) continue;
    auto cells = split_csv(raw);
    switch (stage) {
      case 0:
        if (cells != std::vector<std::string>{"id", "operator", "ordinal", "rate_hz", "coord_frame"})
          throw InputError("expected header id,operator,ordinal,rate_hz,coord_frame", line_no);
        stage = 1;
        break;
      case 1:
        if (cells.size() != 5) throw InputError("session header needs 5 fields", line_no);
        s.id = cells[0];
        s.operator_id = cells[1];
        s.ordinal = parse_ordinal(cells[2]);
        s.sample_rate_hz = csv_number(cells[3], "rate_hz", line_no);
        check_rate(s.sample_rate_hz, line_no);
        s.coord_frame = cells[4];
        stage = 2;
        break;
      case 2:
        if (cells != std::vector<std::string>{"t", "ax", "ay", "hx", "hy", "touch"})
          throw InputError("expected frame header t,ax,ay,hx,hy,touch", line_no);
        stage = 3;
        break;
      default: {
        if (cells.size() != 6) throw InputError("frame row needs 6 fields", line_no);
        FrameRecord f;
        f.t = csv_number(cells[0], "t", line_no);
        f.attention = Point2(csv_number(cells[1], "ax", line_no), csv_number(cells[2], "ay", line_no));
        bool hx_empty = trim(cells[3]).empty();
        bool hy_empty = trim(cells[4]).empty();
        if (hx_empty != hy_empty) throw InputError("hx and hy must both be empty or both numbers", line_no);
        if (!hx_empty) f.hand = Point2(csv_number(cells[3], "hx", line_no), csv_number(cells[4], "hy", line_no));
        f.touching = parse_bool(cells[5], line_no);
        append_frame(s, std::move(f), line_no);
      }
    }
  }
  if (stage < 2) throw InputError("missing session header");
  if (s.frames.empty()) throw InputError("session has no frames");
  return s;
}

void check_identifier(const std::string& v, const char* what) {
  if (v.find_first_of(",\n\r") != std::string::npos)
    throw InputError(std::string(what) + " must not contain commas or newlines: \"" + v + "\"");
}

}  // namespace

Session parse_session(std::istream& in, SessionFormat format) {
  return format == SessionFormat::jsonl ? parse_jsonl(in) : parse_csv(in);
}

bool is_session_file(const std::filesystem::path& path) {
  auto name = path.filename().string();
  auto ends_with = [&](std::string_view suffix) {
    return name.size() > suffix.size() && name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0;
  };
  return ends_with(".jsonl") || ends_with(".session.csv");
}

std::filesystem::path step_sidecar_path(const std::filesystem::path& session_path) {
  auto name = session_path.filename().string();
  for (std::string_view suffix : {".session.csv", ".jsonl", ".csv"}) {
    if (name.size() > suffix.size() && name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0) {
      name.resize(name.size() - suffix.size());
      break;
    }
  }
  return session_path.parent_path() / (name + ".steps.csv");
}

Session load_session(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  auto format = path.extension() == ".jsonl" ? SessionFormat::jsonl : SessionFormat::csv;
  Session s = parse_session(in, format);
  auto sidecar = step_sidecar_path(path);
  if (std::filesystem::exists(sidecar)) {
    std::ifstream steps(sidecar, std::ios::binary);
    s.step_labels = parse_step_labels(steps);
  }
  return s;
}

void write_session(std::ostream& out, const Session& s, SessionFormat format) {
  if (format == SessionFormat::jsonl) {
    ordered_json header;
    header["id"] = s.id;
    header["operator"] = s.operator_id;
    header["ordinal"] = std::string(to_string(s.ordinal));
    header["rate_hz"] = s.sample_rate_hz;
    header["coord_frame"] = s.coord_frame;
    out << header.dump() << '\n';
    for (const auto& f : s.frames) {
      out << "{\"t\":" << format_double(f.t) << ",\"ax\":" << format_double(f.attention.x())
          << ",\"ay\":" << format_double(f.attention.y()) << ",\"hx\":"
          << (f.hand ? format_double(f.hand->x()) : "null") << ",\"hy\":"
          << (f.hand ? format_double(f.hand->y()) : "null") << ",\"touch\":" << (f.touching ? "true" : "false")
          << "}\n";
    }
    return;
  }
  check_identifier(s.id, "session id");
  check_identifier(s.operator_id, "operator id");
  check_identifier(s.coord_frame, "coord_frame");
  out << "id,operator,ordinal,rate_hz,coord_frame\n"
      << s.id << ',' << s.operator_id << ',' << to_string(s.ordinal) << ',' << format_double(s.sample_rate_hz) << ','
      << s.coord_frame << '\n'
      << "t,ax,ay,hx,hy,touch\n";
  for (const auto& f : s.frames) {
    out << format_double(f.t) << ',' << format_double(f.attention.x()) << ',' << format_double(f.attention.y()) << ','
        << (f.hand ? format_double(f.hand->x()) : "") << ',' << (f.hand ? format_double(f.hand->y()) : "") << ','
        << (f.touching ? "true" : "false") << '\n';
  }
}

std::string serialize_session(const Session& s, SessionFormat format) {
  std::ostringstream out;
  write_session(out, s, format);
  return out.str();
}

std::vector<StepLabel> parse_step_labels(std::istream& in) {
  std::vector<StepLabel> labels;
  std::string raw;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(in, raw)) {
    ++line_no;
    if (trim(raw).empty()) continue;
    auto cells = split_csv(raw);
    if (!header) {
      if (cells != std::vector<std::string>{"start_t", "end_t", "step_id"})
        throw InputError("expected header start_t,end_t,step_id", line_no);
      header = true;
      continue;
    }
    if (cells.size() != 3) throw InputError("step label row needs 3 fields", line_no);
    StepLabel l;
    l.start_t = csv_number(cells[0], "start_t", line_no);
    l.end_t = csv_number(cells[1], "end_t", line_no);
    l.step_id = std::string(trim(cells[2]));
    if (l.step_id.empty()) throw InputError("empty step_id", line_no);
    if (l.end_t < l.start_t) throw InputError("step label ends before it starts", line_no);
    labels.push_back(std::move(l));
  }
  return labels;
}

void write_step_labels(std::ostream& out, const std::vector<StepLabel>& labels) {
  out << "start_t,end_t,step_id\n";
  for (const auto& l : labels) {
    check_identifier(l.step_id, "step_id");
    out << format_double(l.start_t) << ',' << format_double(l.end_t) << ',' << l.step_id << '\n';
  }
}

DifficultyRatings parse_ratings(std::istream& in) {
  DifficultyRatings r;
  std::string raw;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(in, raw)) {
    ++line_no;
    if (trim(raw).empty()) continue;
    auto cells = split_csv(raw);
    if (!header) {
      if (cells != std::vector<std::string>{"step_id", "rater_id", "role", "score"})
        throw InputError("expected header step_id,rater_id,role,score", line_no);
      header = true;
      continue;
    }
    if (cells.size() != 4) throw InputError("rating row needs 4 fields", line_no);
    Rating rating;
    rating.step_id = std::string(trim(cells[0]));
    rating.rater_id = std::string(trim(cells[1]));
    try {
      rating.role = parse_rater_role(trim(cells[2]));
    } catch (const InputError& e) {
      throw InputError(e.what(), line_no);
    }
    auto score = parse_finite(cells[3]);
    if (!score || *score != std::floor(*score)) throw InputError("score must be an integer", line_no);
    if (*score < -5 || *score > 5) throw InputError("score outside [-5, 5]", line_no);
    rating.score = static_cast<int>(*score);
    r.ratings.push_back(std::move(rating));
  }
  return r;
}

void write_ratings(std::ostream& out, const DifficultyRatings& r) {
  out << "step_id,rater_id,role,score\n";
  for (const auto& x : r.ratings) {
    check_identifier(x.step_id, "step_id");
    check_identifier(x.rater_id, "rater_id");
    out << x.step_id << ',' << x.rater_id << ',' << to_string(x.role) << ',' << x.score << '\n';
  }
}

ValidationReport validate_session(const Session& s, double expected_rate_hz) {
  ValidationReport rep;
  rep.session_id = s.id;
  if (!(expected_rate_hz > 0.0)) expected_rate_hz = s.sample_rate_hz;

  if (!(s.sample_rate_hz > 0.0)) rep.errors.emplace_back(0, "sample rate must be positive");
  if (s.frames.empty()) rep.errors.emplace_back(0, "session has no frames");

  const double gap_limit = 2.0 / expected_rate_hz;
  std::size_t hand_frames = 0;
  for (std::size_t i = 0; i < s.frames.size(); ++i) {
    const auto& f = s.frames[i];
    if (!std::isfinite(f.t) || !f.attention.allFinite() || (f.hand && !f.hand->allFinite()))
      rep.errors.emplace_back(i, "non-finite value");
    if (f.t < 0.0) rep.errors.emplace_back(i, "negative timestamp");
    if (f.touching && !f.hand) rep.errors.emplace_back(i, "contact without hand");
    if (f.hand) ++hand_frames;
    if (f.touching) ++rep.stats.touch_count;
    if (i > 0) {
      double dt = f.t - s.frames[i - 1].t;
      if (dt <= 0.0) {
        rep.errors.emplace_back(i, dt == 0.0 ? "duplicate timestamp" : "non-monotonic timestamp");
      } else if (dt > gap_limit) {
        rep.warnings.push_back("sampling gap of " + format_double(dt) + " s before record " + std::to_string(i));
      }
    }
  }

  auto labels = s.step_labels;
  std::sort(labels.begin(), labels.end(), [](const auto& a, const auto& b) { return a.start_t < b.start_t; });
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i].end_t < labels[i].start_t)
      rep.errors.emplace_back(0, "step " + labels[i].step_id + " ends before it starts");
    if (i > 0 && labels[i].start_t < labels[i - 1].end_t)
      rep.errors.emplace_back(0, "steps " + labels[i - 1].step_id + " and " + labels[i].step_id + " overlap");
  }

  rep.stats.frame_count = s.frames.size();
  rep.stats.hand_visible_fraction =
      s.frames.empty() ? 0.0 : static_cast<double>(hand_frames) / static_cast<double>(s.frames.size());
  if (!s.frames.empty() && hand_frames == 0) rep.warnings.emplace_back("no hand frames");
  return rep;
}

std::string validation_report_json(const ValidationReport& r) {
  ordered_json j;
  j["session_id"] = r.session_id;
  j["ok"] = r.ok();
  auto errors = ordered_json::array();
  for (const auto& [idx, msg] : r.errors) errors.push_back({{"record", idx}, {"message", msg}});
  j["errors"] = errors;
  j["warnings"] = r.warnings;
  j["stats"] = {{"frame_count", r.stats.frame_count},
                {"touch_count", r.stats.touch_count},
                {"hand_visible_fraction", r.stats.hand_visible_fraction}};
  return j.dump(2) + "\n";
}

}  // namespace egoskill
