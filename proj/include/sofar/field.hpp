// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

#include <json.hpp>

#include "sofar/parallel.hpp"
#include "sofar/ray.hpp"

namespace sofar::field {

/// Marker for cells no ray enters.
inline constexpr double NO_RAY = std::numeric_limits<double>::infinity();

struct Region {
  double r_min = 0.0;
  double r_max = 0.0;
  double z_min = 0.0;
  double z_max = 0.0;

  void validate() const;
  double area() const { return (r_max - r_min) * (z_max - z_min); }
  bool contains(double r, double z) const { return r >= r_min && r <= r_max && z >= z_min && z <= z_max; }
};

/// Grid of nr x nz equal cells over the extent; axes hold the cell centres.
struct GridSpec {
  double r_min = 0.0;
  double r_max = 0.0;
  std::size_t nr = 0;
  double z_min = 0.0;
  double z_max = 0.0;
  std::size_t nz = 0;

  void validate() const;
  double dr() const { return (r_max - r_min) / static_cast<double>(nr); }
  double dz() const { return (z_max - z_min) / static_cast<double>(nz); }
};

struct TLGrid {
  std::vector<double> r_axis;  // cell centres, m
  std::vector<double> z_axis;  // cell centres, m
  std::vector<double> tl;      // dB, row-major by depth: tl[iz * nr + ir]

  static TLGrid empty(const GridSpec& spec);

  std::size_t nr() const { return r_axis.size(); }
  std::size_t nz() const { return z_axis.size(); }
  double& at(std::size_t ir, std::size_t iz) { return tl[iz * nr() + ir]; }
  double at(std::size_t ir, std::size_t iz) const { return tl[iz * nr() + ir]; }

  /// Value of the cell containing (r, z), or NO_RAY outside the grid.
  double lookup(double r, double z) const;
};

/// The source level together with the largest transmission loss the link can
/// absorb at that level. detection_level() = SL - tl_threshold stays fixed
/// when the source level changes through with_source_level().
struct LinkBudget {
  double source_level = 0.0;  // dB
  double tl_threshold = 0.0;  // dB
  double frequency = 0.0;     // Hz

  void validate() const;
  double detection_level() const { return source_level - tl_threshold; }
  LinkBudget with_source_level(double sl) const { return {sl, sl - detection_level(), frequency}; }
};

/// Thorp seawater absorption, dB/km, for a frequency in Hz.
double thorp_absorption(double frequency_hz);

/// 20 log10(max(s, 1)) + alpha s / 1000.
double spreading_loss(double s, double alpha_db_per_km);

/// TL = -10 log10(P / P0) and its inverse.
double tl_from_power_ratio(double p_over_p0);
double power_ratio_from_tl(double tl_db);

/// Geometric TL grid: each cell keeps the smallest loss over the rays whose
/// sampled states fall in it. States outside the grid extent are ignored.
TLGrid compute_field(std::span<const ray::RayPath> fan, const GridSpec& spec, double frequency_hz,
                     Parallelism par = {});

/// Serial reference for compute_field.
TLGrid compute_field_serial(std::span<const ray::RayPath> fan, const GridSpec& spec, double frequency_hz);

/// Cell-wise minimum of `direct` and (relay + tl_to_relay - gain_db), the
/// latter clamped at 0 dB. Both grids must share axes.
TLGrid merge_relay(const TLGrid& direct, const TLGrid& relay, double tl_to_relay, double gain_db);

/// Fraction of cells (by centre) inside `region` with TL <= threshold.
double coverage_proportion(const TLGrid& grid, double threshold_db, const Region& region);

void write_csv(std::ostream& out, const TLGrid& grid);
TLGrid read_csv(std::istream& in);

nlohmann::json to_json(const Region& region);
Region region_from_json(const nlohmann::json& j);

/// {region, thresholds, coverage}
nlohmann::json coverage_summary(const TLGrid& grid, const Region& region, std::span<const double> thresholds);

}  // namespace sofar::field
