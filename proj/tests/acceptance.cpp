// Copyright 2026 The egoskill Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
// failure.

#include "egoskill/analysis.hpp"
#include "egoskill/commands.hpp"
#include "egoskill/features.hpp"
#include "egoskill/hotspot.hpp"
#include "egoskill/ingest.hpp"
#include "egoskill/pipeline.hpp"
#include "egoskill/segmentation.hpp"
#include "egoskill/synth.hpp"
#include "egoskill/text.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

using namespace egoskill;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double v, int precision = 4) {
  std::ostringstream o;
  o.precision(precision);
  o << v;
  return o.str();
}

DistanceSeries make_series(const std::vector<double>& v, double rate) {
  DistanceSeries d;
  d.values = Eigen::Map<const Series>(v.data(), static_cast<Eigen::Index>(v.size()));
  d.times.resize(d.values.size());
  for (Eigen::Index i = 0; i < d.times.size(); ++i) d.times[i] = static_cast<double>(i) / rate;
  return d;
}

Outcome offset_invariants() {
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<std::size_t> len(1, 2000);
  std::vector<std::vector<double>> inputs;
  for (int c = 0; c < 1000; ++c) inputs.push_back(fixture::random_series(rng, len(rng)));
  int bad = 0;
  const auto t0 = Clock::now();
  for (const auto& v : inputs) {
    const auto d = compensate_offset(make_series(v, 30.0));
    if (d.values.minCoeff() != 0.0 || (d.values.array() < 0.0).any()) ++bad;
  }
  const double t = seconds_since(t0);
  return {bad == 0 && t < 1.0, std::to_string(bad) + " violations in 1000 series, " + fmt(t) + " s"};
}

Outcome sign_change_oracle() {
  std::mt19937_64 rng(202);
  std::uniform_int_distribution<std::size_t> len(2, 10000);
  std::uniform_real_distribution<double> step(-0.2, 0.2);
  std::bernoulli_distribution hold(0.1);
  int mismatches = 0;
  int comparisons = 0;
  const auto t0 = Clock::now();
  for (int c = 0; c < 1000; ++c) {
    // Small steps so every deadband sees values on both sides of it.
    const std::size_t n = len(rng);
    std::vector<double> v(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) v[i] = hold(rng) ? v[i - 1] : v[i - 1] + step(rng);
    for (double eps : {0.0, 0.01, 0.1}) {
      const auto k = kinematics(make_series(v, 30.0), eps, 30.0);
      ++comparisons;
      if (!k.sign_change_count || *k.sign_change_count != oracle::sign_changes(v, eps)) ++mismatches;
    }
  }
  const double t = seconds_since(t0);
  return {mismatches == 0 && t < 10.0,
          std::to_string(mismatches) + " mismatches in " + std::to_string(comparisons) + " comparisons, " + fmt(t) + " s"};
}

Outcome early_shift_contract() {
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> dur(0.2, 4.0);
  int out_of_range = 0;
  int wrong_definedness = 0;
  for (int c = 0; c < 1000; ++c) {
    const double d = dur(rng);
    const auto n = static_cast<std::size_t>(std::max(2.0, d * 30.0 + 1.0));
    auto R = early_shift_ratio(make_series(fixture::random_series(rng, n), 30.0), d, 0.0);
    if (R.has_value() != (d >= 1.0)) ++wrong_definedness;
    if (R && (*R < 0.0 || *R > 1.0)) ++out_of_range;
  }

  // Boundary through the whole pipeline: operating periods of exactly
  // 0.999 s (1000 Hz) and 1.0 s (30 Hz).
  auto boundary = [](double rate, int operate_frames) {
    auto s = fixture::timeline({{1.0, false, false}, {0.5, true, false}, {operate_frames / rate, true, true}}, rate,
                               [](double t) { return Point2(10.0 - t, 0.0); });
    const auto a = analyze_session(s, RunConfig{});
    return std::pair{a.features.at(0).dur_O, a.features.at(0).early_shift_ratio.has_value()};
  };
  const auto [d_short, def_short] = boundary(1000.0, 1000);
  const auto [d_one, def_one] = boundary(30.0, 31);
  const bool direct = !early_shift_ratio(make_series({0, 1, 2}, 2.0), 0.999, 0.0) &&
                      early_shift_ratio(make_series({0, 1, 2}, 2.0), 1.0, 0.0).has_value();

  // Planned R recovered within one sample interval.
  int recovered = 0;
  int total = 0;
  double worst = 0.0;
  for (int c = 0; c < 100; ++c) {
    ArchetypeSpec a;
    a.shift_kind = ShiftKind::early;
    a.early_shift_R = 0.1 + 0.08 * (c % 11);
    a.dur_O = 1.0 + 0.05 * (c % 21);
    const auto tr = generate_ou_trace(a, 3000 + static_cast<std::uint64_t>(c));
    const auto fv = analyze_session(tr.session, RunConfig{}).features.at(0);
    ++total;
    if (!fv.early_shift_ratio) continue;
    const double err_s = std::abs(*fv.early_shift_ratio - a.early_shift_R) * fv.dur_O;
    worst = std::max(worst, err_s);
    if (err_s <= 1.0 / a.sample_rate_hz + 1e-9) ++recovered;
  }
  const bool pass = out_of_range == 0 && wrong_definedness == 0 && !def_short && def_one && direct &&
                    recovered == total;
  return {pass, "range violations " + std::to_string(out_of_range) + ", definedness errors " +
                    std::to_string(wrong_definedness) + ", dur_O " + fmt(d_short, 6) + " s " +
                    (def_short ? "defined" : "undefined") + ", dur_O " + fmt(d_one, 6) + " s " +
                    (def_one ? "defined" : "undefined") + ", planned R recovered " + std::to_string(recovered) + "/" +
                    std::to_string(total) + " (worst " + fmt(worst * 1000.0, 3) + " ms)"};
}

Outcome segmentation_reference() {
  std::mt19937_64 rng(404);
  int mismatched = 0;
  std::size_t touching = 0;
  std::size_t in_one_operating = 0;
  std::size_t in_dropped = 0;
  std::size_t misplaced = 0;
  for (int c = 0; c < 200; ++c) {
    std::uniform_real_distribution<double> p_flip(0.03, 0.3);
    std::bernoulli_distribution hand_flip(p_flip(rng));
    std::bernoulli_distribution touch_flip(p_flip(rng));
    std::vector<std::pair<bool, bool>> flags;
    bool hand = false;
    bool touch = false;
    const int n = 100 + static_cast<int>(rng() % 500);
    for (int i = 0; i < n; ++i) {
      if (hand_flip(rng)) hand = !hand;
      if (touch_flip(rng)) touch = !touch;
      flags.emplace_back(hand, touch && hand);
    }
    const double rate = c % 2 ? 30.0 : 25.0;
    const auto s = oracle::flags_session(flags, rate);
    const SegmentationParams p{0.05 + 0.1 * static_cast<double>(rng() % 5),
                               std::array{0.0, 0.15, 0.25, 0.45}[rng() % 4], static_cast<int>(rng() % 4)};
    const auto seg = segment_units(s, p);
    const auto ref = oracle::segment(s, p.touch_merge_gap, p.min_operating, p.hand_presence_debounce);

    bool same = seg.units.size() == ref.units.size() && seg.dropped_bouts.size() == ref.dropped.size();
    for (std::size_t k = 0; same && k < ref.units.size(); ++k) {
      const auto& u = seg.units[k];
      const auto& r = ref.units[k];
      same = u.gazing == Interval{r.g0, r.g1} && u.approaching == Interval{r.h0, r.h1} &&
             u.operating == Interval{r.o0, r.o1};
    }
    for (std::size_t k = 0; same && k < ref.dropped.size(); ++k)
      same = seg.dropped_bouts[k] == Interval{ref.dropped[k].first, ref.dropped[k].second};
    if (!same) ++mismatched;

    for (const auto& f : s.frames) {
      if (!f.touching) continue;
      ++touching;
      int hits = 0;
      for (const auto& u : seg.units) hits += f.t >= u.operating.start && f.t <= u.operating.end;
      int dropped = 0;
      for (const auto& b : seg.dropped_bouts) dropped += f.t >= b.start && f.t <= b.end;
      if (hits == 1 && dropped == 0) ++in_one_operating;
      else if (hits == 0 && dropped == 1) ++in_dropped;
      else ++misplaced;
    }
  }
  return {mismatched == 0 && misplaced == 0,
          std::to_string(mismatched) + " of 200 traces differ from the reference; " + std::to_string(touching) +
              " touching frames: " + std::to_string(in_one_operating) + " in exactly one operating period, " +
              std::to_string(in_dropped) + " in logged dropped bouts, " + std::to_string(misplaced) + " misplaced"};
}

Outcome clustering_oracle() {
  std::mt19937_64 rng(505);
  int mismatches = 0;
  std::size_t largest = 0;
  for (int c = 0; c < 100; ++c) {
    const std::size_t n = 1 + rng() % 200;
    largest = std::max(largest, n);
    std::uniform_real_distribution<double> scene(0.0, 200.0);
    std::normal_distribution<double> blob(0.0, 6.0);
    std::uniform_real_distribution<double> dt(0.0, 1.5);
    std::vector<Point2> centers;
    for (int k = 0; k < 1 + static_cast<int>(rng() % 6); ++k) centers.emplace_back(scene(rng), scene(rng));
    std::vector<Touch> touches;
    double t = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      t += dt(rng);
      Point2 p = rng() % 5 == 0 ? Point2(scene(rng), scene(rng))
                                : Point2(centers[rng() % centers.size()] + Point2(blob(rng), blob(rng)));
      touches.push_back({t, p});
    }
    const ClusterParams p{2.0 + static_cast<double>(rng() % 15), 0.5 + static_cast<double>(rng() % 4),
                          1 + rng() % 5};
    const auto got = cluster_touches(touches, p);
    std::set<std::set<std::size_t>> members;
    bool ordered = true;
    for (std::size_t k = 0; k < got.hotspots.size(); ++k) {
      const auto& h = got.hotspots[k];
      members.insert({h.member_touch_indices.begin(), h.member_touch_indices.end()});
      ordered &= h.id == static_cast<int>(k) && (k == 0 || got.hotspots[k - 1].first_t <= h.first_t);
      Point2 mean = Point2::Zero();
      for (auto i : h.member_touch_indices) mean += touches[i].position;
      mean /= static_cast<double>(h.member_touch_indices.size());
      ordered &= (mean - h.centroid).norm() <= 1e-9 * (1.0 + mean.norm());
    }
    if (members != oracle::clusters(touches, p.spatial_eps, p.temporal_gap_max, p.min_points) || !ordered)
      ++mismatches;
  }
  return {mismatches == 0,
          std::to_string(mismatches) + " mismatches in 100 cases (up to " + std::to_string(largest) + " touches)"};
}

Outcome lag_recovery() {
  const double rate = 30.0;
  const double dt = 1.0 / rate;
  std::mt19937_64 rng(606);
  std::uniform_real_distribution<double> dist(60.0, 300.0);
  std::uniform_real_distribution<double> speed(80.0, 400.0);
  std::uniform_real_distribution<double> angle(0.0, 6.283185307179586);
  int recovered = 0;
  int total = 0;
  double worst = 0.0;
  std::map<double, double> worst_by_delta;
  for (double delta : {0.0, 0.1, 0.2, 0.5}) {
    const int k = static_cast<int>(std::lround(delta * rate));
    for (int c = 0; c < 25; ++c) {
      // Attention glides onto the hotspot; the hand retraces the same path k
      // frames later and touches once it arrives.
      const double D = dist(rng);
      const double v = speed(rng);
      const double a = angle(rng);
      const Point2 hot(320.0, 240.0);
      const Point2 dir(std::cos(a), std::sin(a));
      const int arrive = static_cast<int>(std::ceil(D / (v * dt)));
      const int touch_from = arrive + k;
      const int n = touch_from + 45;
      auto attention_at = [&](int i) { return Point2(hot + std::max(0.0, D - v * dt * i) * dir); };
      Session s;
      s.id = "lag";
      s.operator_id = "op";
      s.sample_rate_hz = rate;
      for (int i = 0; i < n; ++i) {
        FrameRecord f;
        f.t = i / rate;
        f.attention = attention_at(i);
        f.hand = attention_at(std::max(0, i - k));
        f.touching = i >= touch_from;
        s.frames.push_back(f);
      }
      const auto an = analyze_session(s, RunConfig{});
      ++total;
      if (an.features.size() != 1 || !an.features[0].attention_lead_lag) continue;
      const double err = std::abs(*an.features[0].attention_lead_lag - delta);
      worst = std::max(worst, err);
      worst_by_delta[delta] = std::max(worst_by_delta[delta], err);
      if (err <= dt + 1e-9) ++recovered;
    }
  }
  std::string by;
  for (const auto& [d, e] : worst_by_delta) by += " " + fmt(d) + "s:" + fmt(e * 1000.0, 3) + "ms";
  return {recovered == total, std::to_string(recovered) + "/" + std::to_string(total) +
                                  " delayed copies within one sample; worst error by delay" + by};
}

struct CohortRun {
  fs::path root;
  double seconds = 0.0;
  std::map<std::string, std::optional<double>> deltas;
  std::map<std::string, std::optional<double>> r_vs_difficulty;
};

std::map<std::string, std::vector<std::string>> read_csv_rows(const fs::path& p) {
  std::map<std::string, std::vector<std::string>> rows;
  std::istringstream in(read_file(p));
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    auto cells = split_csv(line);
    if (!cells.empty()) rows[cells[0]] = cells;
  }
  return rows;
}

CohortRun run_cohort(const fs::path& root, int jobs) {
  CohortRun run;
  run.root = root;
  std::ostringstream log;
  const auto t0 = Clock::now();
  write_file_atomic(root / "synth.json",
                    R"({"n_pairs": 20, "noise_sigma": 4, "deltas_pct": )"
                    R"({"dur_G": -45, "dur_H": -32, "dur_O": -20, "gaze_turns": -12.1, "early_shift_R": 6.1}})");
  auto opts = [&](std::vector<fs::path> in, const char* out) {
    CommandOptions o;
    o.inputs = std::move(in);
    o.out = root / out;
    o.jobs = jobs;
    return o;
  };
  if (cmd_synth(opts({root / "synth.json"}, "cohort"), log) != kExitOk) throw std::runtime_error("synth failed");
  auto an = opts({root / "cohort" / "sessions"}, "analysis");
  an.config = root / "cohort" / "analysis_config.json";
  if (cmd_analyze(an, log) != kExitOk) throw std::runtime_error("analyze failed: " + log.str());
  if (cmd_compare(opts({root / "cohort" / "pairs.csv", root / "analysis"}, "compare"), log) != kExitOk)
    throw std::runtime_error("compare failed");
  if (cmd_correlate(opts({root / "analysis", root / "cohort" / "ratings.csv"}, "correlate"), log) != kExitOk)
    throw std::runtime_error("correlate failed");
  run.seconds = seconds_since(t0);
  for (const auto& [name, cells] : read_csv_rows(root / "compare" / "comparison.csv"))
    run.deltas[name] = parse_finite(cells.at(1));
  for (const auto& [name, cells] : read_csv_rows(root / "correlate" / "correlation.csv"))
    run.r_vs_difficulty[name] = parse_finite(cells.at(1));
  return run;
}

Outcome cohort_recovery(const CohortRun& run) {
  const std::vector<std::pair<std::string, double>> targets{
      {"dur_G", -45.0}, {"dur_H", -32.0}, {"dur_O", -20.0}, {"f_G", -12.1}, {"early_shift_R", 6.1}};
  bool pass = run.seconds < 30.0;
  std::string detail;
  for (const auto& [name, target] : targets) {
    const auto got = run.deltas.at(name);
    const bool ok = got && std::abs(*got - target) <= 5.0;
    pass &= ok;
    detail += name + " " + (got ? fmt(*got) : "undefined") + "% (target " + fmt(target) + ") ";
  }
  return {pass, detail + "in " + fmt(run.seconds) + " s"};
}

Outcome correlation_recovery(const CohortRun& run) {
  const auto dur_H = run.r_vs_difficulty.at("dur_H");
  const auto null = run.r_vs_difficulty.at("dur_O");
  const bool pass = dur_H && *dur_H >= 0.9 && null && std::abs(*null) < 0.3;
  return {pass, "r(dur_H) = " + (dur_H ? fmt(*dur_H) : "undefined") + ", null feature r(dur_O) = " +
                    (null ? fmt(*null) : "undefined") + " over 15 steps, seed " +
                    std::to_string(CohortSpec{}.seed)};
}

Outcome determinism(const fs::path& root) {
  // Every run uses the same working directory so that the inputs, including
  // the paths echoed in effective_config.json, are identical.
  std::vector<fs::path> snapshots;
  const std::vector<int> jobs{1, 4, 8, 1};
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    run_cohort(root / "work", jobs[i]);
    snapshots.push_back(root / ("jobs" + std::to_string(jobs[i]) + "_" + std::to_string(i)));
    fs::rename(root / "work", snapshots.back());
  }
  std::size_t files = 0;
  std::size_t differing = 0;
  const auto& base = snapshots.front();
  for (const auto& e : fs::recursive_directory_iterator(base)) {
    if (!e.is_regular_file()) continue;
    const auto rel = fs::relative(e.path(), base);
    ++files;
    const auto want = read_file(e.path());
    for (std::size_t i = 1; i < snapshots.size(); ++i) {
      const auto other = snapshots[i] / rel;
      if (!fs::exists(other) || read_file(other) != want) {
        ++differing;
        break;
      }
    }
  }
  for (std::size_t i = 1; i < snapshots.size(); ++i) {
    std::size_t n = 0;
    for (const auto& e : fs::recursive_directory_iterator(snapshots[i])) n += e.is_regular_file();
    if (n != files) ++differing;
  }
  return {differing == 0 && files > 0, std::to_string(files) + " files compared across --jobs 1, 4, 8, 1; " +
                                           std::to_string(differing) + " differ"};
}

Outcome pattern_classification() {
  auto accuracy = [](double sigma, std::uint64_t seed0, int& correct) {
    correct = 0;
    for (int c = 0; c < 200; ++c) {
      ArchetypeSpec a;
      a.gaze_pattern = c % 2 ? GazePattern::search : GazePattern::shift;
      a.shift_kind = (c / 2) % 2 ? ShiftKind::early : ShiftKind::non_early;
      a.dur_G = 1.5 + 0.1 * (c % 16);
      a.dur_H = 0.8 + 0.1 * (c % 5);
      a.dur_O = 1.5 + 0.1 * (c % 13);
      a.oscillation_hz = 1.0 + 0.25 * (c % 5);
      a.early_shift_R = 0.2 + 0.05 * (c % 7);
      a.noise_sigma = sigma;
      const auto tr = generate_ou_trace(a, seed0 + static_cast<std::uint64_t>(c));
      RunConfig cfg;
      cfg.features.sign_deadband = recommended_deadband(sigma);
      const auto an = analyze_session(tr.session, cfg);
      if (an.features.size() != 1) continue;
      const auto& fv = an.features[0];
      if (fv.gaze_pattern == a.gaze_pattern && fv.shift_kind == a.shift_kind) ++correct;
    }
  };
  const ArchetypeSpec ref;
  const double sigma = 0.02 * ref.scene_size.norm();
  int clean = 0;
  int noisy = 0;
  accuracy(0.0, 7000, clean);
  accuracy(sigma, 9000, noisy);
  return {clean == 200 && noisy >= 190,
          "noise-free " + std::to_string(clean) + "/200, sigma " + fmt(sigma) + " " + std::to_string(noisy) + "/200"};
}

}  // namespace

int main() {
  fixture::TempDir scratch("acceptance");
  std::optional<CohortRun> cohort;
  auto cohort_once = [&]() -> const CohortRun& {
    if (!cohort) cohort = run_cohort(scratch.path / "cohort", 1);
    return *cohort;
  };

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"offset compensation invariants", offset_invariants},
      {"sign-change frequency matches enumerator", sign_change_oracle},
      {"early-shift ratio contract", early_shift_contract},
      {"segmentation matches reference", segmentation_reference},
      {"clustering matches connected components", clustering_oracle},
      {"attention-hand lag recovery", lag_recovery},
      {"cohort delta recovery", [&] { return cohort_recovery(cohort_once()); }},
      {"difficulty correlation recovery", [&] { return correlation_recovery(cohort_once()); }},
      {"determinism across job counts", [&] { return determinism(scratch.path / "determinism"); }},
      {"archetype pattern classification", pattern_classification},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << (i + 1) << ". " << criteria[i].first << ": " << o.detail
              << std::endl;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failed == 0 ? 0 : 1;
}
