// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sofar/field.hpp"
#include "sofar/parallel.hpp"
#include "sofar/ray.hpp"
#include "sofar/ssp.hpp"

namespace sofar::shadow {

/// Grazing-angle fan at the source, rad. Deep-sea routines expect a one-sided
/// fan (both ends >= 0 or both <= 0).
struct AngularBounds {
  double theta_min = 0.0;
  double theta_max = 0.0;

  void validate() const;
  bool downward() const { return theta_min >= 0.0 && theta_max >= 0.0; }
  bool upward() const { return theta_min <= 0.0 && theta_max <= 0.0; }
};

struct ShadowReport {
  double s_coverage = 0.0;  // m^2
  double s_shadow = 0.0;    // m^2
  double s_total = 0.0;     // m^2
  field::Region window;
  // Sampled boundary curves; only depths the fan reaches are listed.
  std::vector<double> z;
  std::vector<double> r_min_of_z;
  std::vector<double> r_max_of_z;
};

/// Range interval covered at depth z by the direct fan. The shallower ray
/// sets r_max, the steeper one r_min. Throws NoPath when z lies on the other
/// side of the source from the fan or a bound ray cannot reach it.
std::pair<double, double> deep_coverage_bounds(const ssp::SoundSpeedProfile& profile, double source_depth,
                                               const AngularBounds& bounds, double z);

/// [0, 2 r_H] x [0, z_max], r_H being the horizontal span from the axis to
/// the surface of the surface-tangent ray.
field::Region first_bending_region(const ssp::SoundSpeedProfile& profile);

/// Coverage/shadow areas in `window`, midpoint rule in depth with step dz.
/// Widths are clipped to the window's range limits.
ShadowReport deep_shadow_report(const ssp::SoundSpeedProfile& profile, double source_depth,
                                const AngularBounds& bounds, const field::Region& window, double dz = 10.0,
                                Parallelism par = {});

ShadowReport deep_shadow_report_serial(const ssp::SoundSpeedProfile& profile, double source_depth,
                                       const AngularBounds& bounds, const field::Region& window, double dz = 10.0);

/// arccos(c_source / c_duct). Throws NoDuct when c_source > c_duct.
double critical_grazing_angle(double c_source, double c_duct);

/// Sum over depth cells of (R_max - min(r_min, R_max)) * dz.
double strip_area(std::span<const double> r_min, double r_max_window, double dz);

/// Shadow below a surface duct of thickness h. r_min(z) comes from tracing a
/// ray launched 0.01 deg steeper than the critical angle. Coverage is the
/// duct strip h * R_max; s_total is D * R_max.
ShadowReport shallow_shadow_area(const ssp::SoundSpeedProfile& profile, double h, double D, double r_max_window,
                                 double source_depth, double dz = 1.0);

nlohmann::json to_json(const ShadowReport& report);

}  // namespace sofar::shadow
