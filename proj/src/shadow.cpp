// SPDX-License-Identifier: Apache-2.0
#include "sofar/shadow.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

#include "sofar/error.hpp"

namespace sofar::shadow {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

struct DepthCell {
  double z = 0.0;
  double thickness = 0.0;
};

std::vector<DepthCell> depth_cells(double z_lo, double z_hi, double dz) {
  std::vector<DepthCell> cells;
  for (double top = z_lo; top < z_hi - 1e-9; top += dz) {
    const double bottom = std::min(top + dz, z_hi);
    cells.push_back({0.5 * (top + bottom), bottom - top});
  }
  return cells;
}

struct CellBounds {
  bool reached = false;
  double r_min = 0.0;
  double r_max = 0.0;
};

CellBounds bounds_at(const ssp::SoundSpeedProfile& profile, double source_depth, const AngularBounds& bounds,
                     double z) {
  try {
    auto [lo, hi] = deep_coverage_bounds(profile, source_depth, bounds, z);
    return {true, lo, hi};
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NoPath) throw;
    return {};
  }
}

void check_report_inputs(const ssp::SoundSpeedProfile& profile, const AngularBounds& bounds,
                         const field::Region& window, double dz) {
  bounds.validate();
  window.validate();
  if (!(dz > 0.0)) throw Error(ErrorKind::InvalidArgument, "dz must be positive");
  const auto fbr = first_bending_region(profile);
  if (window.r_min < fbr.r_min || window.r_max > fbr.r_max || window.z_min < fbr.z_min ||
      window.z_max > fbr.z_max) {
    std::ostringstream msg;
    msg << "window exceeds the first bending region [0, " << fbr.r_max << "] m x [0, " << fbr.z_max << "] m";
    throw Error(ErrorKind::ModelAssumption, msg.str());
  }
}

ShadowReport assemble(const field::Region& window, const std::vector<DepthCell>& cells,
                      const std::vector<CellBounds>& per_cell) {
  ShadowReport rep;
  rep.window = window;
  rep.s_total = window.area();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto& b = per_cell[i];
    if (!b.reached) continue;
    rep.z.push_back(cells[i].z);
    rep.r_min_of_z.push_back(b.r_min);
    rep.r_max_of_z.push_back(b.r_max);
    const double width = std::min(b.r_max, window.r_max) - std::max(b.r_min, window.r_min);
    if (width > 0.0) rep.s_coverage += width * cells[i].thickness;
  }
  rep.s_shadow = rep.s_total - rep.s_coverage;
  return rep;
}

}  // namespace

void AngularBounds::validate() const {
  const double lim = std::numbers::pi / 2;
  if (!(theta_min > -lim && theta_min <= theta_max && theta_max < lim)) {
    throw Error(ErrorKind::InvalidArgument, "angular bounds need -pi/2 < theta_min <= theta_max < pi/2");
  }
}

std::pair<double, double> deep_coverage_bounds(const ssp::SoundSpeedProfile& profile, double source_depth,
                                               const AngularBounds& bounds, double z) {
  bounds.validate();
  if (!bounds.downward() && !bounds.upward()) {
    throw Error(ErrorKind::InvalidArgument, "deep coverage bounds need a one-sided fan");
  }
  if (z == source_depth) return {0.0, 0.0};
  const bool below = z > source_depth;
  // A fan of horizontal rays (0, 0) is both; it heads wherever its depth is.
  if ((below && !bounds.downward()) || (!below && !bounds.upward())) {
    throw Error(ErrorKind::NoPath, "depth lies on the other side of the source from the fan");
  }
  const double shallow = std::min(std::abs(bounds.theta_min), std::abs(bounds.theta_max));
  const double steep = std::max(std::abs(bounds.theta_min), std::abs(bounds.theta_max));
  const double r_max = ray::horizontal_span(profile, source_depth, z, shallow, source_depth);
  const double r_min = steep == shallow ? r_max : ray::horizontal_span(profile, source_depth, z, steep, source_depth);
  return {r_min, r_max};
}

field::Region first_bending_region(const ssp::SoundSpeedProfile& profile) {
  const auto axis = ssp::channel_axis_depth(profile);
  const double c_s = profile.speed(0.0);
  const double th = std::acos(std::min(1.0, axis.speed / c_s));
  const double r_h = ray::horizontal_span(profile, 0.0, axis.depth, th, axis.depth);
  return {0.0, 2.0 * r_h, 0.0, profile.z_max()};
}

ShadowReport deep_shadow_report_serial(const ssp::SoundSpeedProfile& profile, double source_depth,
                                       const AngularBounds& bounds, const field::Region& window, double dz) {
  check_report_inputs(profile, bounds, window, dz);
  const auto cells = depth_cells(window.z_min, window.z_max, dz);
  std::vector<CellBounds> per_cell;
  per_cell.reserve(cells.size());
  for (const auto& c : cells) per_cell.push_back(bounds_at(profile, source_depth, bounds, c.z));
  return assemble(window, cells, per_cell);
}

ShadowReport deep_shadow_report(const ssp::SoundSpeedProfile& profile, double source_depth,
                                const AngularBounds& bounds, const field::Region& window, double dz,
                                Parallelism par) {
  check_report_inputs(profile, bounds, window, dz);
  const auto cells = depth_cells(window.z_min, window.z_max, dz);
  std::vector<CellBounds> per_cell(cells.size());
  std::vector<std::optional<Error>> failures(cells.size());
  const auto n = static_cast<long>(cells.size());

#pragma omp parallel for schedule(dynamic, 4) num_threads(par.resolve())
  for (long i = 0; i < n; ++i) {
    try {
      per_cell[i] = bounds_at(profile, source_depth, bounds, cells[i].z);
    } catch (const Error& e) {
      failures[i] = e;
    }
  }
  for (const auto& f : failures) {
    if (f) throw *f;
  }
  return assemble(window, cells, per_cell);
}

double critical_grazing_angle(double c_source, double c_duct) {
  if (!(c_source > 0.0 && c_duct > 0.0)) throw Error(ErrorKind::InvalidArgument, "sound speeds must be positive");
  if (c_source > c_duct) throw Error(ErrorKind::NoDuct, "source speed exceeds the duct speed; nothing is trapped");
  return std::acos(c_source / c_duct);
}

double strip_area(std::span<const double> r_min, double r_max_window, double dz) {
  double s = 0.0;
  for (double r : r_min) s += (r_max_window - std::clamp(r, 0.0, r_max_window)) * dz;
  return s;
}

ShadowReport shallow_shadow_area(const ssp::SoundSpeedProfile& profile, double h, double D, double r_max_window,
                                 double source_depth, double dz) {
  if (!(h > 0.0 && h <= D && std::abs(D - profile.z_max()) < 1e-9)) {
    throw Error(ErrorKind::InvalidArgument, "shallow geometry needs 0 < h <= D = profile depth");
  }
  if (!(r_max_window > 0.0 && dz > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "window range and dz must be positive");
  }
  if (!(source_depth >= 0.0 && source_depth < h)) {
    throw Error(ErrorKind::InvalidArgument, "source must sit inside the duct");
  }

  ShadowReport rep;
  rep.window = {0.0, r_max_window, 0.0, D};
  rep.s_total = D * r_max_window;
  rep.s_coverage = h * r_max_window;
  if (h == D) return rep;

  const double c_h = profile.speed_from(h, -1);
  const double theta_m = critical_grazing_angle(profile.speed(source_depth), c_h);
  ray::TraceConfig cfg;
  cfg.max_range = r_max_window;
  cfg.bottom_absorbs = true;
  cfg.max_arc_step = std::min(cfg.max_arc_step, dz);
  const auto path = ray::trace_ray(profile, source_depth, theta_m + 0.01 * kDeg, cfg);

  const auto cells = depth_cells(h, D, dz);
  std::vector<double> r_min;
  r_min.reserve(cells.size());
  double area = 0.0;
  for (const auto& c : cells) {
    const auto r = ray::first_range_at_depth(path, c.z);
    const double rm = r ? std::min(*r, r_max_window) : r_max_window;
    rep.z.push_back(c.z);
    rep.r_min_of_z.push_back(rm);
    rep.r_max_of_z.push_back(r_max_window);
    area += (r_max_window - rm) * c.thickness;
  }
  rep.s_shadow = area;
  return rep;
}

nlohmann::json to_json(const ShadowReport& report) {
  return {{"s_coverage_m2", report.s_coverage},
          {"s_shadow_m2", report.s_shadow},
          {"s_total_m2", report.s_total},
          {"window", field::to_json(report.window)},
          {"z_m", report.z},
          {"r_min_m", report.r_min_of_z},
          {"r_max_m", report.r_max_of_z}};
}

}  // namespace sofar::shadow
