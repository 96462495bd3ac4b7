// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "sofar/parallel.hpp"
#include "sofar/quadrature.hpp"
#include "sofar/ssp.hpp"

namespace sofar::ray {

/// theta is the grazing angle, positive when the ray heads deeper.
struct RayState {
  double r = 0.0;      // m
  double z = 0.0;      // m
  double theta = 0.0;  // rad
  double s = 0.0;      // m of arclength from the source
};

enum class EventKind { SurfaceReflect, BottomReflect, TurnUp, TurnDown, Absorbed };

struct RayEvent {
  EventKind kind;
  std::size_t state_index;  // index into RayPath::states where the event happened
};

struct RayPath {
  std::vector<RayState> states;
  double snell_const = 0.0;  // cos(theta) / c, s/m
  std::vector<RayEvent> events;

  std::size_t count(EventKind kind) const;
  std::optional<RayEvent> first(EventKind kind) const;
};

struct TraceConfig {
  double max_range = 100e3;    // m of horizontal travel from the origin
  double depth_step = 1.0;     // m; slab thickness for the piecewise-linear c(z)
  int max_bounces = 100;       // surface + bottom reflections before stopping
  bool bottom_absorbs = true;
  double max_arc_step = 10.0;  // m; states are emitted at least this densely
  double turn_tolerance = 1e-3;  // m; bisection tolerance on the turning depth
  double origin_range = 0.0;   // m; range coordinate of the source
  int range_direction = +1;    // +1 rays travel toward larger r, -1 toward smaller
};

/// Throws InvalidArgument on non-positive steps/limits or a bad direction.
void validate(const TraceConfig& cfg);

/// Arc-stepping tracer. Within each slab c(z) is taken as the chord between
/// the slab ends, so the ray is an exact circular arc of curvature
/// -snell_const * g there; turning depths are bisected on the true c(z).
RayPath trace_ray(const ssp::SoundSpeedProfile& profile, double source_depth, double theta0,
                  const TraceConfig& cfg);

/// Largest relative departure of cos(theta)/c(z) from the path's Snell
/// constant over its states.
double snell_deviation(const ssp::SoundSpeedProfile& profile, const RayPath& path);

/// Horizontal distance covered between z_from and z_to by a ray whose grazing
/// angle at z_ref is theta0:
///   r = integral cos(theta0) / sqrt(n(z)^2 - cos^2(theta0)) dz,  n = c(z_ref)/c(z).
/// Turning points may sit at either end; a turning point strictly inside the
/// interval throws NoPath.
double horizontal_span(const ssp::SoundSpeedProfile& profile, double z_from, double z_to, double theta0,
                       double z_ref, const quad::Options& options = {});

/// One independent ray per angle, traced in parallel. Output order follows
/// `angles`.
std::vector<RayPath> trace_fan(const ssp::SoundSpeedProfile& profile, double source_depth,
                               std::span<const double> angles, const TraceConfig& cfg,
                               Parallelism par = {});

/// Serial reference for trace_fan.
std::vector<RayPath> trace_fan_serial(const ssp::SoundSpeedProfile& profile, double source_depth,
                                      std::span<const double> angles, const TraceConfig& cfg);

/// `count` angles evenly spaced over [lo, hi] (a single angle at lo when count == 1).
std::vector<double> linspace(double lo, double hi, std::size_t count);

/// Range at which the path first reaches depth z, interpolated between
/// states; empty if it never does.
std::optional<double> first_range_at_depth(const RayPath& path, double z);

/// CSV with header `s_m,r_m,z_m,theta_rad`, 9 significant digits.
void write_csv(std::ostream& out, const RayPath& path);
std::vector<RayState> read_csv(std::istream& in);

}  // namespace sofar::ray
