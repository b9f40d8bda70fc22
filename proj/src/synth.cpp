// Copyright 2026 The egoskill Authors
// SPDX-License-Identifier: Apache-2.0

#include "egoskill/synth.hpp"

#include "egoskill/ingest.hpp"
#include "egoskill/parallel.hpp"
#include "egoskill/text.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>

namespace egoskill {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr double kLagThreshold = 0.2;  // matches the analysis default
constexpr int kDriftWaves = 4;
constexpr double kDriftMinHz = 0.05;
constexpr double kDriftMaxHz = 0.25;

const std::set<std::string> kPlanKeys = {"dur_G", "dur_H", "dur_O", "gaze_turns", "early_shift_R", "lag"};

/// Smooth head-motion-like drift: a few slow sinusoids per axis whose summed
/// variance is sigma^2.
class DriftNoise {
 public:
  DriftNoise(double sigma, std::mt19937_64& rng) : sigma_(sigma) {
    if (sigma <= 0.0) return;
    std::uniform_real_distribution<double> freq(kDriftMinHz, kDriftMaxHz);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    const double amp = sigma * std::sqrt(2.0 / kDriftWaves);
    for (auto& axis : waves_)
      for (int w = 0; w < kDriftWaves; ++w) axis.push_back({amp, freq(rng), phase(rng)});
  }

  Point2 at(double t) const {
    if (sigma_ <= 0.0) return Point2::Zero();
    Point2 p = Point2::Zero();
    for (int a = 0; a < 2; ++a)
      for (const auto& w : waves_[static_cast<std::size_t>(a)])
        p[a] += w.amp * std::sin(2.0 * std::numbers::pi * w.freq * t + w.phase);
    return p;
  }

 private:
  struct Wave {
    double amp;
    double freq;
    double phase;
  };
  double sigma_;
  std::array<std::vector<Wave>, 2> waves_;
};

Point2 random_direction(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  const double a = angle(rng);
  return {std::cos(a), std::sin(a)};
}

/// Frame-level plan of one unit.
struct UnitPlan {
  Point2 hotspot = Point2::Zero();
  std::string step_id;
  int n_gaze = 0;
  int n_approach = 0;
  int n_operate = 0;
  int gaze_turns = 0;
  int lag_frames = 0;
  int exit_frames = 0;
  double speed = 0.0;  // units/s
  Point2 start_direction = Point2::UnitX();
  Point2 hand_direction = Point2::UnitY();
  Point2 exit_direction = Point2::UnitX();
  GazePattern label_pattern = GazePattern::shift;
};

/// Linear interpolation through (index, value) knots over [0, m).
std::vector<double> piecewise_linear(const std::vector<std::pair<int, double>>& knots, int m) {
  std::vector<double> out(static_cast<std::size_t>(m), 0.0);
  for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
    const auto [i0, v0] = knots[k];
    const auto [i1, v1] = knots[k + 1];
    for (int i = i0; i <= i1 && i < m; ++i) {
      const double u = i1 == i0 ? 1.0 : static_cast<double>(i - i0) / static_cast<double>(i1 - i0);
      out[static_cast<std::size_t>(i)] = v0 + (v1 - v0) * u;
    }
  }
  return out;
}

class SessionBuilder {
 public:
  SessionBuilder(Session& s, double noise_sigma, std::mt19937_64& rng)
      : s_(s), dt_(1.0 / s.sample_rate_hz), attention_noise_(noise_sigma, rng), hand_noise_(noise_sigma, rng) {}

  OuTruth append(UnitPlan plan) {
    const bool has_prev = last_attention_.has_value();
    const int off = has_prev ? 1 : 0;
    const int nG = plan.n_gaze;
    const int nH = plan.n_approach;
    const int nO = plan.n_operate;
    const Point2 h = plan.hotspot;

    // Attention leaves from where it last was, along one ray from the hotspot.
    double d_first = 0.0;
    Point2 u = plan.start_direction;
    if (has_prev) {
      const Point2 rel = *last_attention_ - h;
      d_first = rel.norm();
      if (d_first > 0.0) u = rel / d_first;
    }

    const int lag_frames = std::clamp(plan.lag_frames, 0, nH - 2);
    const int ramp = std::max(1, nH - 1 - lag_frames);
    double d_mid = plan.speed * ramp * dt_;
    if (has_prev) d_mid = std::min(d_mid, 0.5 * d_first);

    // Gazing samples (the previous unit's last frame included) zigzag with
    // exactly `turns` reversals, or fall monotonically when turns == 0.
    const int m = nG + off;
    const int max_turns = std::max(0, (m - 1) / 3 - 1);
    const int turns = std::clamp(plan.gaze_turns, 0, max_turns);
    const int min_seg = (m - 1) / (turns + 1);
    const double amp = plan.speed * min_seg * dt_;
    const double lo = d_mid;
    const double hi = d_mid + amp;
    if (!has_prev) d_first = turns > 0 ? hi + amp : d_mid + 0.5 * plan.speed * nG * dt_;

    std::vector<std::pair<int, double>> knots{{0, d_first}};
    for (int j = 1; j <= turns + 1; ++j) {
      const int b = static_cast<int>(std::lround(static_cast<double>(j) * (m - 1) / (turns + 1)));
      knots.emplace_back(b, j % 2 == 1 ? lo : hi);
    }
    const auto gaze_d = piecewise_linear(knots, m);

    std::vector<double> approach_d(static_cast<std::size_t>(nH));
    for (int j = 0; j < nH; ++j)
      approach_d[static_cast<std::size_t>(j)] = j >= ramp ? 0.0 : d_mid * (1.0 - static_cast<double>(j) / ramp);

    // Plan the hand's threshold crossing `lag_frames` after the attention's.
    std::vector<double> window(gaze_d);
    window.insert(window.end(), approach_d.begin(), approach_d.end());
    const double w_min = *std::min_element(window.begin(), window.end());
    const double w_max = *std::max_element(window.begin(), window.end()) - w_min;
    const double level = kLagThreshold * w_max;
    int ia = static_cast<int>(window.size()) - 1;
    while (ia > 0 && window[static_cast<std::size_t>(ia - 1)] - w_min < level) --ia;
    const int first_h = m;
    int ih = std::clamp(ia + lag_frames, first_h + 1, first_h + nH - 1);
    const int jc = ih - first_h;  // hand crossing, local to the approach period

    std::vector<std::pair<int, double>> hand_knots{{0, w_max}};
    if (jc - 1 > 0) hand_knots.emplace_back(jc - 1, 1.05 * level);
    if (jc < nH - 1) {
      hand_knots.emplace_back(jc, 0.95 * level);
      hand_knots.emplace_back(nH - 1, 0.0);
    } else {
      hand_knots.emplace_back(jc, 0.0);
    }
    const auto hand_d = piecewise_linear(hand_knots, nH);

    const int exit_frames = std::clamp(plan.exit_frames, 0, nO - 1);
    const int exit_start = nO - 1 - exit_frames;
    const double exit_step = plan.speed * dt_;

    for (int i = 0; i < nG; ++i) emit(h + gaze_d[static_cast<std::size_t>(i + off)] * u, std::nullopt, false);
    for (int j = 0; j < nH; ++j)
      emit(h + approach_d[static_cast<std::size_t>(j)] * u, h + hand_d[static_cast<std::size_t>(j)] * plan.hand_direction,
           false);
    Point2 last = h;
    for (int j = 0; j < nO; ++j) {
      last = j > exit_start ? Point2(h + exit_step * (j - exit_start) * plan.exit_direction) : h;
      emit(last, h, true);
    }
    last_attention_ = last;

    OuTruth t;
    t.gaze_turns = turns;
    t.dur_G = (nG + off) * dt_;
    t.dur_H = nH * dt_;
    t.dur_O = (nO - 1) * dt_;
    t.gaze_pattern = plan.label_pattern;
    t.shift_kind = exit_frames > 0 ? ShiftKind::early : ShiftKind::non_early;
    t.early_shift_R = nO > 1 ? static_cast<double>(exit_frames) / (nO - 1) : 0.0;
    t.lag = (ih - ia) * dt_;
    t.hotspot = h;
    t.step_id = plan.step_id;
    return t;
  }

  int frame_count() const { return static_cast<int>(s_.frames.size()); }
  double time_of(int index) const { return index / s_.sample_rate_hz; }

 private:
  void emit(const Point2& attention, std::optional<Point2> hand, bool touching) {
    FrameRecord f;
    f.t = time_of(frame_count());
    f.attention = attention + attention_noise_.at(f.t);
    if (hand) f.hand = *hand + hand_noise_.at(f.t);
    f.touching = touching;
    s_.frames.push_back(std::move(f));
  }

  Session& s_;
  double dt_;
  DriftNoise attention_noise_;
  DriftNoise hand_noise_;
  std::optional<Point2> last_attention_;
};

int frames_for(double seconds, double rate) { return static_cast<int>(std::lround(seconds * rate)); }

double plan_value(const CohortSpec& c, const std::string& key, double base, double difficulty) {
  auto slope = c.slopes.find(key);
  return base + (slope == c.slopes.end() ? 0.0 : slope->second * difficulty);
}

double delta_factor(const CohortSpec& c, const std::string& key, Ordinal ordinal) {
  if (ordinal == Ordinal::earlier) return 1.0;
  auto it = c.deltas_pct.find(key);
  return it == c.deltas_pct.end() ? 1.0 : 1.0 + it->second / 100.0;
}

/// Rounds non-negative reals to integers whose sum is the rounded real sum,
/// giving leftovers to the largest remainders (lowest index on ties).
std::vector<int> largest_remainder(const std::vector<double>& v) {
  const double total = std::accumulate(v.begin(), v.end(), 0.0);
  const auto target = static_cast<long>(std::lround(total));
  std::vector<int> out(v.size());
  long assigned = 0;
  std::vector<std::pair<double, std::size_t>> rem;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = static_cast<int>(std::floor(v[i]));
    assigned += out[i];
    rem.emplace_back(v[i] - std::floor(v[i]), i);
  }
  std::stable_sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t k = 0; assigned < target && k < rem.size(); ++k, ++assigned) ++out[rem[k].second];
  return out;
}

std::vector<StepSpec> default_steps(const CohortSpec& c) {
  auto rng = derived_rng(c.seed, "steps");
  std::uniform_real_distribution<double> difficulty(-4.0, 4.0);
  std::vector<StepSpec> steps;
  const int cols = 5;
  for (std::size_t j = 0; j < c.n_steps; ++j) {
    StepSpec s;
    char id[16];
    std::snprintf(id, sizeof id, "step%02zu", j + 1);
    s.id = id;
    s.difficulty = difficulty(rng);
    const auto col = static_cast<double>(static_cast<int>(j) % cols);
    const auto row = static_cast<double>(static_cast<int>(j) / cols);
    s.hotspot = Point2(80.0 + 120.0 * col, 90.0 + 150.0 * row);
    steps.push_back(std::move(s));
  }
  return steps;
}

Point2 perpendicular(const Point2& v) {
  const double n = v.norm();
  if (n == 0.0) return Point2::UnitX();
  return Point2(-v.y(), v.x()) / n;
}

Session generate_session(const CohortSpec& c, const std::vector<StepSpec>& steps, const std::string& operator_id,
                         Ordinal ordinal, std::vector<OuTruth>& truth) {
  Session s;
  s.operator_id = operator_id;
  s.ordinal = ordinal;
  s.id = operator_id + "-" + std::string(to_string(ordinal));
  s.coord_frame = "synthetic-scene";
  s.sample_rate_hz = c.sample_rate_hz;

  auto op_rng = derived_rng(c.seed, "operator:" + operator_id);
  std::uniform_real_distribution<double> spread(1.0 - c.operator_spread, 1.0 + c.operator_spread);
  const double op_factor = spread(op_rng);

  auto rng = derived_rng(c.seed, "session:" + s.id);
  std::uniform_real_distribution<double> jitter(1.0 - c.unit_jitter, 1.0 + c.unit_jitter);
  const double rate = c.sample_rate_hz;

  struct Draft {
    double g, h, o, turns, r;
  };
  std::vector<Draft> drafts;
  for (const auto& st : steps) {
    const double d = st.difficulty;
    Draft dr;
    dr.g = std::max(0.5, plan_value(c, "dur_G", c.base_dur_G, d) * op_factor * jitter(rng) *
                             delta_factor(c, "dur_G", ordinal));
    dr.h = std::max(0.4, plan_value(c, "dur_H", c.base_dur_H, d) * op_factor * jitter(rng) *
                             delta_factor(c, "dur_H", ordinal));
    dr.o = std::max(0.3, plan_value(c, "dur_O", c.base_dur_O, d) * op_factor * jitter(rng) *
                             delta_factor(c, "dur_O", ordinal));
    dr.turns = std::max(0.0, plan_value(c, "gaze_turns", c.base_gaze_turns, d) * jitter(rng) *
                                 delta_factor(c, "gaze_turns", ordinal));
    dr.r = std::clamp(plan_value(c, "early_shift_R", c.base_early_shift_R, d) * jitter(rng) *
                          delta_factor(c, "early_shift_R", ordinal),
                      0.0, 0.9);
    drafts.push_back(dr);
  }
  std::vector<double> turn_reals;
  for (const auto& d : drafts) turn_reals.push_back(d.turns);
  const auto turns = largest_remainder(turn_reals);

  SessionBuilder builder(s, c.noise_sigma, rng);
  for (std::size_t j = 0; j < steps.size(); ++j) {
    const auto& st = steps[j];
    const auto& dr = drafts[j];
    const bool first = j == 0;
    const double label_start = builder.time_of(builder.frame_count());

    UnitPlan p;
    p.hotspot = st.hotspot;
    p.step_id = st.id;
    p.n_gaze = std::max(2, frames_for(dr.g, rate) - (first ? 0 : 1));
    p.n_approach = std::max(3, frames_for(dr.h, rate));
    p.n_operate = std::max(2, frames_for(dr.o, rate) + 1);
    p.gaze_turns = turns[j];
    p.speed = c.approach_speed;
    const double lag = plan_value(c, "lag", c.base_lag, st.difficulty) * delta_factor(c, "lag", ordinal);
    p.lag_frames = frames_for(lag, rate);
    p.exit_frames = frames_for(dr.r * (p.n_operate - 1), 1.0);
    p.start_direction = random_direction(rng);
    p.hand_direction = random_direction(rng);
    p.exit_direction = j + 1 < steps.size() ? perpendicular(steps[j + 1].hotspot - st.hotspot) : random_direction(rng);
    p.label_pattern = p.gaze_turns > 0 ? GazePattern::search : GazePattern::shift;

    truth.push_back(builder.append(p));
    s.step_labels.push_back({label_start, builder.time_of(builder.frame_count() - 1), st.id});
  }
  return s;
}

template <typename T>
void read_key(const nlohmann::json& j, const char* key, T& out) {
  if (auto it = j.find(key); it != j.end()) {
    try {
      out = it->get<T>();
    } catch (const nlohmann::json::exception&) {
      throw InputError(std::string("synth spec: bad type for \"") + key + "\"");
    }
  }
}

}  // namespace

std::mt19937_64 derived_rng(std::uint64_t seed, const std::string& label) {
  std::vector<std::uint32_t> words{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  for (unsigned char ch : label) words.push_back(ch);
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

double recommended_deadband(double noise_sigma) { return noise_sigma > 0.0 ? noise_sigma / 3.0 : 0.0; }

void ArchetypeSpec::validate() const {
  if (!(dur_G > 0.0 && dur_H > 0.0 && dur_O > 0.0)) throw InputError("archetype durations must be positive");
  if (noise_sigma < 0.0) throw InputError("noise sigma must be >= 0");
  if (hotspots.empty()) throw InputError("archetype needs at least one hotspot");
  if (!(sample_rate_hz > 0.0)) throw InputError("sample rate must be positive");
  if (!(approach_speed > 0.0)) throw InputError("approach speed must be positive");
  if (lag < 0.0) throw InputError("lag must be >= 0");
}

SyntheticTrace generate_ou_trace(const ArchetypeSpec& a, std::uint64_t seed) {
  a.validate();
  SyntheticTrace out;
  Session& s = out.session;
  s.id = "archetype-" + std::to_string(seed);
  s.operator_id = "synthetic";
  s.coord_frame = "synthetic-scene";
  s.sample_rate_hz = a.sample_rate_hz;

  auto rng = derived_rng(seed, "archetype");
  const double rate = a.sample_rate_hz;
  UnitPlan p;
  p.hotspot = a.hotspots.front();
  p.n_gaze = std::max(2, frames_for(a.dur_G, rate));
  p.n_approach = std::max(3, frames_for(a.dur_H, rate));
  p.n_operate = std::max(2, frames_for(a.dur_O, rate) + 1);
  p.gaze_turns =
      a.gaze_pattern == GazePattern::search ? std::max(1, static_cast<int>(std::lround(2.0 * a.oscillation_hz * a.dur_G))) : 0;
  p.lag_frames = frames_for(a.lag, rate);
  p.exit_frames =
      a.shift_kind == ShiftKind::early ? std::max(1, frames_for(a.early_shift_R * (p.n_operate - 1), 1.0)) : 0;
  p.speed = a.approach_speed;
  p.start_direction = random_direction(rng);
  p.hand_direction = random_direction(rng);
  p.exit_direction = random_direction(rng);
  p.label_pattern = a.gaze_pattern;

  SessionBuilder builder(s, a.noise_sigma, rng);
  out.truth = builder.append(p);
  return out;
}

void CohortSpec::validate() const {
  if (n_pairs == 0) throw InputError("synth spec: n_pairs must be positive");
  if (!(sample_rate_hz > 0.0)) throw InputError("synth spec: sample_rate_hz must be positive");
  if (noise_sigma < 0.0) throw InputError("synth spec: noise_sigma must be >= 0");
  if (steps.empty() && n_steps == 0) throw InputError("synth spec: needs at least one step");
  if (!(base_dur_G > 0.0 && base_dur_H > 0.0 && base_dur_O > 0.0)) throw InputError("synth spec: durations must be positive");
  if (!(approach_speed > 0.0)) throw InputError("synth spec: approach_speed must be positive");
  for (const auto* m : {&slopes, &deltas_pct})
    for (const auto& [k, v] : *m)
      if (!kPlanKeys.count(k)) throw InputError("synth spec: unknown feature key \"" + k + "\"");
  for (const auto& [k, v] : deltas_pct)
    if (v <= -100.0) throw InputError("synth spec: delta for " + k + " must exceed -100%");
  std::set<std::string> ids;
  for (const auto& s : steps) {
    if (s.id.empty() || !ids.insert(s.id).second) throw InputError("synth spec: step ids must be unique and non-empty");
    if (s.difficulty < -5.0 || s.difficulty > 5.0) throw InputError("synth spec: difficulty outside [-5, 5]");
  }
}

CohortSpec parse_cohort_spec(const nlohmann::json& j) {
  static const std::set<std::string> known = {
      "n_pairs",        "seed",          "sample_rate_hz",  "noise_sigma",      "n_steps",
      "steps",          "base_dur_G",    "base_dur_H",      "base_dur_O",       "base_gaze_turns",
      "base_early_shift_R", "base_lag",  "approach_speed",  "slopes",           "deltas_pct",
      "operator_spread", "unit_jitter",  "n_expert_raters", "n_beginner_raters", "rating_noise"};
  if (!j.is_object()) throw InputError("synth spec must be a JSON object");
  for (const auto& [k, v] : j.items())
    if (!known.count(k)) throw InputError("synth spec: unknown key \"" + k + "\"");

  CohortSpec c;
  read_key(j, "n_pairs", c.n_pairs);
  read_key(j, "seed", c.seed);
  read_key(j, "sample_rate_hz", c.sample_rate_hz);
  read_key(j, "noise_sigma", c.noise_sigma);
  read_key(j, "n_steps", c.n_steps);
  read_key(j, "base_dur_G", c.base_dur_G);
  read_key(j, "base_dur_H", c.base_dur_H);
  read_key(j, "base_dur_O", c.base_dur_O);
  read_key(j, "base_gaze_turns", c.base_gaze_turns);
  read_key(j, "base_early_shift_R", c.base_early_shift_R);
  read_key(j, "base_lag", c.base_lag);
  read_key(j, "approach_speed", c.approach_speed);
  read_key(j, "operator_spread", c.operator_spread);
  read_key(j, "unit_jitter", c.unit_jitter);
  read_key(j, "n_expert_raters", c.n_expert_raters);
  read_key(j, "n_beginner_raters", c.n_beginner_raters);
  read_key(j, "rating_noise", c.rating_noise);
  if (j.contains("slopes")) {
    c.slopes.clear();
    read_key(j, "slopes", c.slopes);
  }
  read_key(j, "deltas_pct", c.deltas_pct);
  if (auto it = j.find("steps"); it != j.end()) {
    if (!it->is_array()) throw InputError("synth spec: steps must be an array");
    for (const auto& sj : *it) {
      for (const auto& [k, v] : sj.items())
        if (k != "id" && k != "difficulty" && k != "hotspot") throw InputError("synth spec: unknown step key \"" + k + "\"");
      StepSpec s;
      read_key(sj, "id", s.id);
      read_key(sj, "difficulty", s.difficulty);
      std::vector<double> xy;
      read_key(sj, "hotspot", xy);
      if (xy.size() != 2) throw InputError("synth spec: step hotspot must be [x, y]");
      s.hotspot = Point2(xy[0], xy[1]);
      c.steps.push_back(std::move(s));
    }
  }
  c.validate();
  return c;
}

ordered_json cohort_spec_json(const CohortSpec& c) {
  ordered_json j;
  j["n_pairs"] = c.n_pairs;
  j["seed"] = c.seed;
  j["sample_rate_hz"] = c.sample_rate_hz;
  j["noise_sigma"] = c.noise_sigma;
  j["n_steps"] = c.n_steps;
  auto steps = ordered_json::array();
  for (const auto& s : c.steps)
    steps.push_back({{"id", s.id}, {"difficulty", s.difficulty}, {"hotspot", {s.hotspot.x(), s.hotspot.y()}}});
  j["steps"] = steps;
  j["base_dur_G"] = c.base_dur_G;
  j["base_dur_H"] = c.base_dur_H;
  j["base_dur_O"] = c.base_dur_O;
  j["base_gaze_turns"] = c.base_gaze_turns;
  j["base_early_shift_R"] = c.base_early_shift_R;
  j["base_lag"] = c.base_lag;
  j["approach_speed"] = c.approach_speed;
  j["slopes"] = c.slopes;
  j["deltas_pct"] = c.deltas_pct;
  j["operator_spread"] = c.operator_spread;
  j["unit_jitter"] = c.unit_jitter;
  j["n_expert_raters"] = c.n_expert_raters;
  j["n_beginner_raters"] = c.n_beginner_raters;
  j["rating_noise"] = c.rating_noise;
  return j;
}

CohortData generate_cohort(const CohortSpec& c, int jobs) {
  c.validate();
  CohortData data;
  data.steps = c.steps.empty() ? default_steps(c) : c.steps;
  data.recommended_deadband = recommended_deadband(c.noise_sigma);

  std::vector<std::string> operators;
  for (std::size_t p = 0; p < c.n_pairs; ++p) {
    char id[16];
    std::snprintf(id, sizeof id, "op%02zu", p + 1);
    operators.emplace_back(id);
  }

  const std::size_t n_sessions = 2 * operators.size();
  std::vector<Session> sessions(n_sessions);
  std::vector<std::vector<OuTruth>> truths(n_sessions);
  parallel_for(n_sessions, jobs, [&](std::size_t i) {
    const auto ordinal = i % 2 == 0 ? Ordinal::earlier : Ordinal::later;
    sessions[i] = generate_session(c, data.steps, operators[i / 2], ordinal, truths[i]);
  });
  for (std::size_t i = 0; i < n_sessions; ++i) data.truth[sessions[i].id] = std::move(truths[i]);
  for (std::size_t p = 0; p < operators.size(); ++p)
    data.pairs.push_back({operators[p], sessions[2 * p].id, sessions[2 * p + 1].id});
  data.sessions = std::move(sessions);

  auto rng = derived_rng(c.seed, "ratings");
  std::normal_distribution<double> noise(0.0, c.rating_noise);
  for (const auto& st : data.steps) {
    for (std::size_t r = 0; r < c.n_expert_raters + c.n_beginner_raters; ++r) {
      const bool expert = r < c.n_expert_raters;
      Rating rating;
      rating.step_id = st.id;
      rating.rater_id = expert ? "expert" + std::to_string(r + 1) : "beginner" + std::to_string(r + 1 - c.n_expert_raters);
      rating.role = expert ? RaterRole::expert : RaterRole::beginner;
      rating.score = static_cast<int>(std::clamp(std::lround(-st.difficulty + noise(rng)), -5L, 5L));
      data.ratings.ratings.push_back(std::move(rating));
    }
  }
  return data;
}

void write_cohort(const CohortData& data, const CohortSpec& spec, const std::filesystem::path& dir) {
  for (const auto& s : data.sessions) {
    write_file_atomic(dir / "sessions" / (s.id + ".jsonl"), serialize_session(s, SessionFormat::jsonl));
    std::ostringstream steps;
    write_step_labels(steps, s.step_labels);
    write_file_atomic(dir / "sessions" / (s.id + ".steps.csv"), steps.str());
  }
  std::ostringstream pairs;
  write_pair_manifest(pairs, data.pairs);
  write_file_atomic(dir / "pairs.csv", pairs.str());
  std::ostringstream ratings;
  write_ratings(ratings, data.ratings);
  write_file_atomic(dir / "ratings.csv", ratings.str());

  ordered_json truth;
  auto echoed = cohort_spec_json(spec);
  echoed["steps"] = ordered_json::array();
  for (const auto& s : data.steps)
    echoed["steps"].push_back({{"id", s.id}, {"difficulty", s.difficulty}, {"hotspot", {s.hotspot.x(), s.hotspot.y()}}});
  truth["spec"] = echoed;
  auto sessions = ordered_json::object();
  for (const auto& [id, units] : data.truth) {
    auto arr = ordered_json::array();
    for (const auto& u : units) {
      arr.push_back({{"step_id", u.step_id},
                     {"gaze_pattern", std::string(to_string(u.gaze_pattern))},
                     {"shift_kind", std::string(to_string(u.shift_kind))},
                     {"dur_G", u.dur_G},
                     {"dur_H", u.dur_H},
                     {"dur_O", u.dur_O},
                     {"gaze_turns", u.gaze_turns},
                     {"early_shift_R", u.early_shift_R},
                     {"lag", u.lag},
                     {"hotspot", {u.hotspot.x(), u.hotspot.y()}}});
    }
    sessions[id] = arr;
  }
  truth["sessions"] = sessions;
  write_file_atomic(dir / "truth.json", truth.dump(2) + "\n");

  ordered_json cfg;
  cfg["features"] = {{"sign_deadband", data.recommended_deadband}};
  write_file_atomic(dir / "analysis_config.json", cfg.dump(2) + "\n");
}

}  // namespace egoskill
