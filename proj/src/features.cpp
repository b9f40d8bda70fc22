// Copyright 2026 The egoskill Authors
// SPDX-License-Identifier: Apache-2.0

#include "egoskill/features.hpp"

#include "egoskill/segmentation.hpp"
#include "egoskill/stats.hpp"
#include "egoskill/text.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace egoskill {

namespace {

// Boundary slack for durations that are sums of frame intervals.
constexpr double kTimeSlack = 1e-9;

bool in_period(double t, const OperationUnit& ou, PeriodSelect period) {
  switch (period) {
    case PeriodSelect::gazing: return t >= ou.gazing.start && t < ou.gazing.end;
    case PeriodSelect::approaching: return t >= ou.approaching.start && t < ou.approaching.end;
    case PeriodSelect::operating: return t >= ou.operating.start && t <= ou.operating.end;
    case PeriodSelect::approach: return t >= ou.gazing.start && t < ou.operating.start;
    case PeriodSelect::unit: return t >= ou.gazing.start && t <= ou.operating.end;
  }
  return false;
}

DistanceSeries make_series(const std::vector<double>& t, const std::vector<double>& v, DistanceKind kind) {
  DistanceSeries d;
  d.kind = kind;
  d.times = Eigen::Map<const Series>(t.data(), static_cast<Eigen::Index>(t.size()));
  d.values = Eigen::Map<const Series>(v.data(), static_cast<Eigen::Index>(v.size()));
  return d;
}

std::vector<Sign> signs_of_diff(const Series& values, double deadband) {
  std::vector<Sign> out;
  for (Eigen::Index i = 0; i + 1 < values.size(); ++i) out.push_back(sign_of(values[i + 1] - values[i], deadband));
  return out;
}

std::optional<double> as_opt(const std::optional<int>& v) {
  if (!v) return std::nullopt;
  return static_cast<double>(*v);
}

std::optional<int> as_count(const std::optional<double>& v) {
  if (!v) return std::nullopt;
  return static_cast<int>(std::lround(*v));
}

}  // namespace

void FeatureParams::validate() const {
  if (sign_deadband < 0.0) throw InputError("sign_deadband must be >= 0");
  if (!(lag_threshold > 0.0 && lag_threshold < 1.0)) throw InputError("lag_threshold must lie in (0, 1)");
  if (min_operating_for_R != 1.0) throw InputError("min_operating_for_R is fixed at 1.0 s");
  if (early_shift_min_ratio < 0.0 || early_shift_min_ratio > 1.0)
    throw InputError("early_shift_min_ratio must lie in [0, 1]");
  if (search_min_rate < 0.0) throw InputError("search_min_rate must be >= 0");
}

DistanceSeries build_distance_series(const Session& s, const OperationUnit& ou, const Point2& hotspot,
                                     DistanceKind kind, PeriodSelect period) {
  std::vector<double> t;
  std::vector<double> v;
  for (const auto& f : s.frames) {
    if (f.t > ou.operating.end) break;
    if (!in_period(f.t, ou, period)) continue;
    switch (kind) {
      case DistanceKind::AO:
        v.push_back((f.attention - hotspot).norm());
        break;
      case DistanceKind::HO:
        if (!f.hand) continue;
        v.push_back(f.touching ? 0.0 : (*f.hand - hotspot).norm());
        break;
      case DistanceKind::AH:
        if (!f.hand) continue;
        v.push_back((f.attention - *f.hand).norm());
        break;
    }
    t.push_back(f.t);
  }
  return make_series(t, v, kind);
}

DistanceSeries compensate_offset(const DistanceSeries& d) {
  if (d.empty()) throw InputError("compensate_offset: empty series");
  DistanceSeries out = d;
  out.values = (d.values.array() - d.values.minCoeff()).matrix();
  return out;
}

Sign sign_of(double v, double deadband) {
  if (v > deadband) return Sign::plus;
  if (v < -deadband) return Sign::minus;
  return Sign::zero;
}

int count_sign_changes(std::span<const Sign> signs) {
  int changes = 0;
  Sign last = Sign::zero;
  for (Sign s : signs) {
    if (s == Sign::zero) continue;
    if (last != Sign::zero && s != last) ++changes;
    last = s;
  }
  return changes;
}

KinematicsSummary kinematics(const DistanceSeries& d_star, double deadband, double sample_rate_hz) {
  KinematicsSummary k;
  if (d_star.empty()) return k;
  k.mean = d_star.values.mean();
  k.variance = population_variance(d_star.values);
  const Eigen::Index n = d_star.size();
  if (n < 2) return k;
  k.speed = d_star.values.tail(n - 1) - d_star.values.head(n - 1);
  k.signs = signs_of_diff(d_star.values, deadband);
  k.sign_change_count = count_sign_changes(k.signs);
  k.mean_abs_speed = k.speed.cwiseAbs().mean() * sample_rate_hz;
  return k;
}

double trailing_increase_duration(const DistanceSeries& d, double deadband) {
  const Eigen::Index n = d.size();
  if (n < 2) return 0.0;
  Eigen::Index start = n - 1;
  while (start > 0 && sign_of(d.values[start] - d.values[start - 1], deadband) == Sign::plus) --start;
  return d.times[n - 1] - d.times[start];
}

std::optional<double> early_shift_ratio(const DistanceSeries& d_ao_operating, double dur_O, double deadband,
                                        double min_operating) {
  if (dur_O + kTimeSlack < min_operating || !(dur_O > 0.0)) return std::nullopt;
  const double p1 = trailing_increase_duration(d_ao_operating, deadband);
  return std::clamp(p1 / dur_O, 0.0, 1.0);
}

ShiftKind classify_shift_kind(std::optional<double> R, double r_min) {
  if (!R) return ShiftKind::undefined;
  return *R >= r_min ? ShiftKind::early : ShiftKind::non_early;
}

GazePattern classify_gaze_pattern(const DistanceSeries& d_ao_gazing, double deadband, double f_min,
                                  std::optional<double> period_duration) {
  const Eigen::Index n = d_ao_gazing.size();
  if (n < 3) return GazePattern::shift;
  const double span = period_duration.value_or(d_ao_gazing.times[n - 1] - d_ao_gazing.times[0]);
  if (!(span > 0.0)) return GazePattern::shift;
  const int f = count_sign_changes(signs_of_diff(d_ao_gazing.values, deadband));
  return static_cast<double>(f) / span >= f_min ? GazePattern::search : GazePattern::shift;
}

std::optional<double> attention_hand_correlation(const DistanceSeries& d_ao, const DistanceSeries& d_ho) {
  // Both series come from the same frames, so co-timed means equal timestamps.
  std::vector<double> a;
  std::vector<double> h;
  Eigen::Index i = 0;
  Eigen::Index j = 0;
  while (i < d_ao.size() && j < d_ho.size()) {
    if (d_ao.times[i] < d_ho.times[j]) {
      ++i;
    } else if (d_ho.times[j] < d_ao.times[i]) {
      ++j;
    } else {
      a.push_back(d_ao.values[i++]);
      h.push_back(d_ho.values[j++]);
    }
  }
  if (a.size() < 3) return std::nullopt;
  const Eigen::Map<const Series> av(a.data(), static_cast<Eigen::Index>(a.size()));
  const Eigen::Map<const Series> hv(h.data(), static_cast<Eigen::Index>(h.size()));
  return pearson(av, hv);
}

std::optional<double> sustained_approach_time(const DistanceSeries& d_star, double threshold) {
  const Eigen::Index n = d_star.size();
  if (n == 0) return std::nullopt;
  const double level = threshold * d_star.values.maxCoeff();
  if (!(level > 0.0)) return std::nullopt;
  Eigen::Index last_above = -1;
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    if (d_star.values[i] >= level) {
      last_above = i;
      break;
    }
  }
  if (last_above == n - 1) return std::nullopt;
  return d_star.times[last_above + 1];
}

std::optional<double> attention_lead_lag(const DistanceSeries& d_ao_star, const DistanceSeries& d_ho_star,
                                         double threshold) {
  auto ta = sustained_approach_time(d_ao_star, threshold);
  auto th = sustained_approach_time(d_ho_star, threshold);
  if (!ta || !th) return std::nullopt;
  return *th - *ta;
}

FeatureVector feature_vector(const Session& s, const OperationUnit& ou, const Hotspot* hotspot,
                             const FeatureParams& p) {
  FeatureVector fv;
  fv.ou_index = ou.index;
  fv.step_id = ou.step_id;
  fv.hotspot_id = ou.hotspot_id;

  const auto d = period_durations(ou);
  fv.dur_G = d.dur_G;
  fv.dur_H = d.dur_H;
  fv.dur_O = d.dur_O;
  fv.ratio_G = d.ratio_G;
  fv.ratio_H = d.ratio_H;
  fv.ratio_O = d.ratio_O;

  auto& why = fv.undefined_reasons;
  if (!hotspot) {
    for (const auto& name : feature_names())
      if (name.rfind("dur_", 0) != 0 && name.rfind("ratio_", 0) != 0) why.push_back(name + ":no_hotspot");
    why.emplace_back("gaze_pattern:no_hotspot");
    why.emplace_back("shift_kind:no_hotspot");
    return fv;
  }
  const Point2& o = hotspot->centroid;
  const double rate = s.sample_rate_hz;

  auto period_kinematics = [&](PeriodSelect period, const char* tag, PeriodKinematics& out) {
    auto series = build_distance_series(s, ou, o, DistanceKind::AO, period);
    if (series.empty()) {
      for (const char* f : {"f_", "speed_", "var_"}) why.push_back(std::string(f) + tag + ":empty_period");
      return series;
    }
    auto k = kinematics(compensate_offset(series), p.sign_deadband, rate);
    out.variance = k.variance;
    out.sign_changes = k.sign_change_count;
    out.mean_abs_speed = k.mean_abs_speed;
    if (!k.defined())
      for (const char* f : {"f_", "speed_"}) why.push_back(std::string(f) + tag + ":too_few_samples");
    return series;
  };

  auto ao_g = period_kinematics(PeriodSelect::gazing, "G", fv.kin_G);
  period_kinematics(PeriodSelect::approaching, "H", fv.kin_H);
  auto ao_o = period_kinematics(PeriodSelect::operating, "O", fv.kin_O);

  if (!ao_o.empty()) {
    fv.mean_d_AO_operating = compensate_offset(ao_o).values.mean();
  } else {
    why.emplace_back("mean_d_AO_O:empty_period");
  }

  fv.corr_AO_HO = attention_hand_correlation(build_distance_series(s, ou, o, DistanceKind::AO, PeriodSelect::unit),
                                             build_distance_series(s, ou, o, DistanceKind::HO, PeriodSelect::unit));
  if (!fv.corr_AO_HO) why.emplace_back("corr_AO_HO:insufficient_or_constant");

  auto ao_app = build_distance_series(s, ou, o, DistanceKind::AO, PeriodSelect::approach);
  auto ho_app = build_distance_series(s, ou, o, DistanceKind::HO, PeriodSelect::approach);
  if (!ao_app.empty() && !ho_app.empty()) {
    fv.attention_lead_lag =
        attention_lead_lag(compensate_offset(ao_app), compensate_offset(ho_app), p.lag_threshold);
  }
  if (!fv.attention_lead_lag) why.emplace_back("lag_AH:no_crossing");

  if (!ao_o.empty()) fv.early_shift_ratio = early_shift_ratio(ao_o, fv.dur_O, p.sign_deadband, p.min_operating_for_R);
  if (!fv.early_shift_ratio) why.emplace_back(fv.dur_O + kTimeSlack < p.min_operating_for_R ? "early_shift_R:short_operating"
                                                                                  : "early_shift_R:empty_period");

  fv.gaze_pattern = classify_gaze_pattern(ao_g, p.sign_deadband, p.search_min_rate,
                                          ao_g.size() >= 3 ? std::optional<double>(fv.dur_G) : std::nullopt);
  fv.shift_kind = classify_shift_kind(fv.early_shift_ratio, p.early_shift_min_ratio);
  if (fv.shift_kind == ShiftKind::undefined) why.emplace_back("shift_kind:R_undefined");
  return fv;
}

const std::vector<std::string>& feature_names() {
  static const std::vector<std::string> names = {
      "dur_G", "dur_H",   "dur_O",   "ratio_G", "ratio_H",    "ratio_O", "mean_d_AO_O",
      "f_G",   "speed_G", "var_G",   "f_H",     "speed_H",    "var_H",   "f_O",
      "speed_O", "var_O", "corr_AO_HO", "lag_AH", "early_shift_R"};
  return names;
}

std::vector<std::optional<double>> feature_values(const FeatureVector& fv) {
  return {fv.dur_G,
          fv.dur_H,
          fv.dur_O,
          fv.ratio_G,
          fv.ratio_H,
          fv.ratio_O,
          fv.mean_d_AO_operating,
          as_opt(fv.kin_G.sign_changes),
          fv.kin_G.mean_abs_speed,
          fv.kin_G.variance,
          as_opt(fv.kin_H.sign_changes),
          fv.kin_H.mean_abs_speed,
          fv.kin_H.variance,
          as_opt(fv.kin_O.sign_changes),
          fv.kin_O.mean_abs_speed,
          fv.kin_O.variance,
          fv.corr_AO_HO,
          fv.attention_lead_lag,
          fv.early_shift_ratio};
}

std::string features_csv(std::span<const FeatureVector> features) {
  std::ostringstream out;
  out << "ou_index,step_id,hotspot_id";
  for (const auto& n : feature_names()) out << ',' << n;
  out << ",gaze_pattern,shift_kind,reason\n";
  for (const auto& fv : features) {
    out << fv.ou_index << ',' << fv.step_id.value_or("") << ','
        << (fv.hotspot_id ? std::to_string(*fv.hotspot_id) : "");
    for (const auto& v : feature_values(fv)) out << ',' << format_optional(v);
    out << ',' << (fv.gaze_pattern ? std::string(to_string(*fv.gaze_pattern)) : "") << ','
        << (fv.shift_kind == ShiftKind::undefined ? "" : std::string(to_string(fv.shift_kind))) << ',';
    for (std::size_t i = 0; i < fv.undefined_reasons.size(); ++i)
      out << (i ? ";" : "") << fv.undefined_reasons[i];
    out << '\n';
  }
  return out.str();
}

std::vector<FeatureVector> parse_features_csv(std::string_view text) {
  std::vector<FeatureVector> out;
  const auto& names = feature_names();
  const std::size_t n_cols = 3 + names.size() + 3;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(in, raw)) {
    ++line_no;
    if (trim(raw).empty()) continue;
    auto cells = split_csv(raw);
    if (cells.size() != n_cols) throw InputError("features.csv row has wrong column count", line_no);
    if (!header) {
      if (cells[0] != "ou_index" || cells[3] != names.front()) throw InputError("not a features.csv header", line_no);
      header = true;
      continue;
    }
    FeatureVector fv;
    auto idx = parse_finite(cells[0]);
    if (!idx) throw InputError("bad ou_index", line_no);
    fv.ou_index = static_cast<int>(*idx);
    if (!cells[1].empty()) fv.step_id = cells[1];
    if (!cells[2].empty()) {
      auto h = parse_finite(cells[2]);
      if (!h) throw InputError("bad hotspot_id", line_no);
      fv.hotspot_id = static_cast<int>(*h);
    }
    std::vector<std::optional<double>> v(names.size());
    for (std::size_t c = 0; c < names.size(); ++c) {
      const auto& cell = cells[3 + c];
      if (cell.empty()) continue;
      v[c] = parse_finite(cell);
      if (!v[c]) throw InputError("bad value for " + names[c], line_no);
    }
    auto req = [&](std::size_t c) {
      if (!v[c]) throw InputError("missing " + names[c], line_no);
      return *v[c];
    };
    fv.dur_G = req(0);
    fv.dur_H = req(1);
    fv.dur_O = req(2);
    fv.ratio_G = req(3);
    fv.ratio_H = req(4);
    fv.ratio_O = req(5);
    fv.mean_d_AO_operating = v[6];
    fv.kin_G = {as_count(v[7]), v[8], v[9]};
    fv.kin_H = {as_count(v[10]), v[11], v[12]};
    fv.kin_O = {as_count(v[13]), v[14], v[15]};
    fv.corr_AO_HO = v[16];
    fv.attention_lead_lag = v[17];
    fv.early_shift_ratio = v[18];
    const auto& gp = cells[3 + names.size()];
    if (gp == "search") fv.gaze_pattern = GazePattern::search;
    else if (gp == "shift") fv.gaze_pattern = GazePattern::shift;
    else if (!gp.empty()) throw InputError("bad gaze_pattern", line_no);
    const auto& sk = cells[4 + names.size()];
    if (sk == "early") fv.shift_kind = ShiftKind::early;
    else if (sk == "non-early") fv.shift_kind = ShiftKind::non_early;
    else if (!sk.empty()) throw InputError("bad shift_kind", line_no);
    const auto& reasons = cells[5 + names.size()];
    std::size_t pos = 0;
    while (pos < reasons.size()) {
      auto semi = reasons.find(';', pos);
      if (semi == std::string::npos) semi = reasons.size();
      fv.undefined_reasons.push_back(reasons.substr(pos, semi - pos));
      pos = semi + 1;
    }
    out.push_back(std::move(fv));
  }
  if (!header) throw InputError("features.csv is empty");
  return out;
}

std::string trace_csv(const Session& s, const OperationUnit& ou, const Point2& hotspot) {
  std::ostringstream out;
  out << "t,d_ao,d_ho,d_ah\n";
  for (const auto& f : s.frames) {
    if (f.t > ou.operating.end) break;
    if (f.t < ou.gazing.start) continue;
    out << format_double(f.t) << ',' << format_double((f.attention - hotspot).norm()) << ',';
    if (f.hand) {
      out << format_double(f.touching ? 0.0 : (*f.hand - hotspot).norm()) << ','
          << format_double((f.attention - *f.hand).norm());
    } else {
      out << ',';
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace egoskill
