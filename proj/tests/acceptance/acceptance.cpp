// SPDX-License-Identifier: Apache-2.0
// One PASS/FAIL line per acceptance criterion. Exit status is the number of failures.
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sofar/deploy.hpp"
#include "sofar/dynamics.hpp"
#include "sofar/field.hpp"
#include "sofar/pipeline.hpp"
#include "sofar/ray.hpp"
#include "sofar/scenario.hpp"
#include "support.hpp"

using namespace sofar;
namespace fs = std::filesystem;
using sofar::test::kDeg;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("threw: ") + e.what()};
  }
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = limit_s <= 0.0 || dt < limit_s;
  const bool pass = o.pass && in_time;
  if (!pass) ++failures;
  char timing[96];
  if (limit_s > 0.0)
    std::snprintf(timing, sizeof timing, "%.2f s, limit %.0f s", dt, limit_s);
  else
    std::snprintf(timing, sizeof timing, "%.2f s", dt);
  std::printf("[%s] %2d %-28s %s (%s)%s\n", pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), timing,
              in_time ? "" : " over time limit");
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Depth above `from` where c = target, by bisection.
double turning_depth(const ssp::SoundSpeedProfile& p, double target, double lo, double hi) {
  for (int i = 0; i < 200; ++i) {
    const double m = 0.5 * (lo + hi);
    if ((p.speed(lo) - target) * (p.speed(m) - target) <= 0.0)
      hi = m;
    else
      lo = m;
  }
  return 0.5 * (lo + hi);
}

Outcome munk_sanity() {
  const auto p = test::munk();
  const auto axis = ssp::channel_axis_depth(p);
  const double rel = std::abs(p.speed(2100.0) - 1500.0) / 1500.0;
  const double g = std::abs(p.gradient(2100.0));
  return {std::abs(axis.depth - 2100.0) <= 0.01 && rel <= 1e-9 && g < 1e-12,
          fmt("axis %.4f m, |c(2100)-c0|/c0 %.1e, |dc/dz| %.1e", axis.depth, rel, g)};
}

Outcome span_ratio_sweep() {
  const auto p = test::munk();
  std::vector<double> hs;
  for (int h = 100; h <= 2000; h += 100) hs.push_back(h);
  const auto rep = deploy::verify_theorem1(p, hs);
  double min_ratio = INFINITY, worst_identity = 0.0;
  for (const auto& s : rep.samples) {
    min_ratio = std::min(min_ratio, s.ratio);
    worst_identity = std::max(worst_identity, std::abs(s.ratio - (1.0 + s.xi)));
  }
  return {rep.samples.size() == hs.size() && min_ratio > 1.0 + 1e-6 && worst_identity < 1e-6,
          fmt("min ratio %.6f at h=%g, max |ratio-(1+xi)| %.1e", min_ratio, rep.h_at_min, worst_identity)};
}

Outcome tracer_vs_quadrature() {
  const auto p = test::munk();
  const double src = 200.0;
  ray::TraceConfig cfg;
  cfg.max_range = 300e3;
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> angle(-4.0, 4.0);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double th = angle(rng) * kDeg;
    const auto path = ray::trace_ray(p, src, th, cfg);
    const auto hit = path.first(ray::EventKind::Absorbed);
    if (!hit) return {false, fmt("ray at %.3f deg never reached the seabed", th / kDeg)};
    const double traced = path.states[hit->state_index].r;
    double quad;
    if (th >= 0.0) {
      quad = ray::horizontal_span(p, src, p.z_max(), th, src);
    } else {
      const double zt = turning_depth(p, p.speed(src) / std::cos(th), 0.0, src);
      quad = ray::horizontal_span(p, src, zt, th, src) + ray::horizontal_span(p, zt, p.z_max(), th, src);
    }
    worst = std::max(worst, std::abs(traced - quad) / quad);
  }
  return {worst <= 1e-3, fmt("20 angles in [-4, 4] deg, max relative gap %.2e", worst)};
}

Outcome shallow_optimum() {
  const auto p = ssp::bilinear_profile();
  const auto r = deploy::optimize_ris_depth(p, 60.0, 120.0, deploy::Method::GoldenSection);
  return {std::abs(r.z_ris - 120.0) <= 0.5 && std::abs(r.reach - 1019.0) <= 10.0,
          fmt("z* %.3f m, reach %.2f m, theta %.3f deg", r.z_ris, r.reach, r.theta_reflect / kDeg)};
}

Outcome multihop() {
  const auto p = ssp::bilinear_profile();
  const auto deep = deploy::multihop_plan(p, 60.0, 120.0, 120.0, 10e3);
  const auto shallow = deploy::multihop_plan(p, 60.0, 120.0, 60.01, 10e3);
  const auto off = [](std::size_t n, int want) { return std::abs(static_cast<int>(n) - want); };
  return {off(deep.unit_count, 10) <= 1 && off(shallow.unit_count, 20) <= 1,
          fmt("%zu units at 120 m (hop %.1f m), %zu units at 60.01 m (hop %.1f m)", deep.unit_count,
              deep.per_hop_reach, shallow.unit_count, shallow.per_hop_reach)};
}

Outcome rotation_budget() {
  const auto det = dynamics::rotation_error_budget(0.001, 0.01, 0.0, 5.0, 10.0);
  const auto full = dynamics::rotation_error_budget(0.001, 0.01, 0.005, 5.0, 10.0, 1.0);
  return {std::abs(det.total - 0.105) < 1e-12 && std::abs(full.total - 0.121) <= 0.002,
          fmt("deterministic %.6f deg, full %.5f deg", det.total, full.total)};
}

Outcome correction(const cli::Scenario& s) {
  const dynamics::EnsembleSummary* disp = nullptr;
  const dynamics::EnsembleSummary* rot = nullptr;
  std::vector<dynamics::EnsembleSummary> runs;
  runs.reserve(s.dynamics.size());
  std::size_t min_trials = SIZE_MAX;
  for (const auto& c : s.dynamics) {
    runs.push_back(dynamics::run_ensemble(c.trajectory, c.gyro, c.array, c.theta, c.alpha_out, c.options, c.trials,
                                          s.seed));
    min_trials = std::min(min_trials, c.trials);
    if (c.name == "displacement") disp = &runs.back();
    if (c.name == "rotation") rot = &runs.back();
  }
  if (!disp || !rot) return {false, "scenario lacks the displacement/rotation cases"};
  return {disp->mean_reduction >= 99.0 && std::abs(rot->mean_reduction - 80.0) <= 10.0 && min_trials >= 100,
          fmt("displacement %.2f%%, rotation %.1f%% (std %.1f) over %zu trials", disp->mean_reduction,
              rot->mean_reduction, rot->std_reduction, min_trials)};
}

Outcome coverage(const cli::Scenario& s, const cli::FieldOutcome& f) {
  bool mono = true, low = true, order = true;
  double prev = 0.0;
  std::string direct_s, with_s;
  for (double t : s.thresholds) {
    const double d = field::coverage_proportion(f.direct, t, s.window);
    const double w = field::coverage_proportion(f.with_ris, t, s.window);
    mono = mono && d >= prev;
    low = low && d < 0.3;
    order = order && w >= d;
    prev = d;
    direct_s += fmt("%s%.3f", direct_s.empty() ? "" : " ", d);
    with_s += fmt("%s%.3f", with_s.empty() ? "" : " ", w);
  }
  const bool lo_range = s.thresholds.front() <= 100.0 && s.thresholds.back() >= 150.0;
  const double top = field::coverage_proportion(f.with_ris, s.thresholds.back(), s.window);
  return {lo_range && mono && low && order && top >= 0.95,
          fmt("direct [%s], with RIS [%s] at %g..%g dB", direct_s.c_str(), with_s.c_str(), s.thresholds.front(),
              s.thresholds.back())};
}

Outcome units_flatness(const cli::Scenario& s, const cli::FieldOutcome& f) {
  const auto units = cli::units_by_depth(s, f.direct);
  const std::vector<double> want{500.0, 1000.0, 1500.0, 2100.0};
  std::vector<double> got;
  std::size_t lo = SIZE_MAX, hi = 0;
  std::string list;
  for (const auto& u : units) {
    got.push_back(u.depth);
    lo = std::min(lo, u.units);
    hi = std::max(hi, u.units);
    list += fmt("%s%g m: %zu", list.empty() ? "" : ", ", u.depth, u.units);
  }
  const double ratio = static_cast<double>(hi) / static_cast<double>(lo);
  return {got == want && s.deep->array_side == 20 && ratio <= 2.0, fmt("%s (max/min %.2f)", list.c_str(), ratio)};
}

Outcome determinism() {
  const auto root = fs::temp_directory_path() / ("sofar_accept_" + std::to_string(::getpid()));
  std::size_t files = 0, mismatched = 0;
  for (const char* name : {"deepsea_munk.json", "shallowsea_bilinear.json"}) {
    const auto s = cli::load_scenario(test::scenario_path(name));
    const auto a = root / name / "a";
    const auto b = root / name / "b";
    fs::create_directories(a);
    fs::create_directories(b);
    cli::run_command(cli::Command::Report, s, a);
    cli::run_command(cli::Command::Report, s, b);
    for (const auto& e : fs::recursive_directory_iterator(a)) {
      if (!e.is_regular_file()) continue;
      ++files;
      if (slurp(e.path()) != slurp(b / fs::relative(e.path(), a))) ++mismatched;
    }
  }
  fs::remove_all(root);
  return {files > 0 && mismatched == 0, fmt("%zu files over both bundled scenarios, %zu differ", files, mismatched)};
}

}  // namespace

int main() {
  const auto deep = cli::load_scenario(test::scenario_path("deepsea_munk.json"));

  criterion(1, "munk sanity", 1.0, munk_sanity);
  criterion(2, "span ratio above one", 10.0, span_ratio_sweep);
  criterion(3, "tracer vs quadrature", 30.0, tracer_vs_quadrature);
  criterion(4, "shallow optimum depth", 5.0, shallow_optimum);
  criterion(5, "multi-hop unit counts", 0.0, multihop);
  criterion(6, "rotation error budget", 0.0, rotation_budget);
  criterion(7, "correction rmse", 60.0, [&] { return correction(deep); });

  cli::FieldOutcome fields;
  criterion(8, "deep coverage ordering", 300.0, [&] {
    fields = cli::compute_fields(deep);
    return coverage(deep, fields);
  });
  criterion(9, "required units flatness", 0.0, [&] {
    if (fields.direct.tl.empty()) fields = cli::compute_fields(deep);
    return units_flatness(deep, fields);
  });
  criterion(10, "determinism", 0.0, determinism);

  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
