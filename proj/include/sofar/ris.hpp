// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "sofar/field.hpp"
#include "sofar/parallel.hpp"
#include "sofar/ray.hpp"
#include "sofar/shadow.hpp"

namespace sofar::ris {

/// Reflect array. With `square` set the array is n_units x n_units elements;
/// otherwise a line of n_units.
struct RisArray {
  std::size_t n_units = 1;
  bool square = false;
  double spacing = 0.075;     // m
  double depth = 0.0;         // m
  double range = 0.0;         // m
  double frequency = 10.0e3;  // Hz

  void validate() const;
  std::size_t total_units() const { return square ? n_units * n_units : n_units; }
};

struct VirtualSource {
  double depth = 0.0;  // m
  double range = 0.0;  // m
  shadow::AngularBounds bounds;
  double gain_db = 0.0;
};

/// 10 log10(N).
double beamforming_gain(std::size_t n_units);

/// 2 pi f / c.
double wavenumber(double frequency_hz, double c);

/// Per-element phase (n - 1) k d (sin(theta_in + beta) - sin(theta_out - beta))
/// for the n_units elements along one side of the array.
std::vector<double> phase_profile(const RisArray& array, double theta_in, double theta_out, double beta,
                                  double c_local);

VirtualSource reflect_as_source(const RisArray& array, const shadow::AngularBounds& bounds);

/// Fan of `count` rays from the virtual source; range_direction picks the side
/// the re-radiated fan heads to.
std::vector<ray::RayPath> trace_virtual_source(const ssp::SoundSpeedProfile& profile, const VirtualSource& source,
                                               std::size_t count, ray::TraceConfig cfg, Parallelism par = {});

/// Smallest unit count whose array gain closes the link:
/// 10 log10(units) >= tl_to_ris + tl_ris_to_target - tl_threshold.
/// With `square`, units = n^2 for the smallest such n. Throws Infeasible
/// beyond max_units.
std::size_t required_units(const field::LinkBudget& budget, double tl_to_ris, double tl_ris_to_target, bool square,
                           std::size_t max_units = 1'000'000);

/// CSV `n,phase_rad`, n counted from 1.
void write_phase_csv(std::ostream& out, const std::vector<double>& phases);
std::vector<double> read_phase_csv(std::istream& in);

}  // namespace sofar::ris
