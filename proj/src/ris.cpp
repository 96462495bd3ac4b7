// SPDX-License-Identifier: Apache-2.0
#include "sofar/ris.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <string>

#include "sofar/error.hpp"

namespace sofar::ris {

void RisArray::validate() const {
  if (n_units < 1) throw Error(ErrorKind::InvalidArgument, "RIS needs at least one unit");
  if (!(spacing > 0.0)) throw Error(ErrorKind::InvalidArgument, "RIS element spacing must be positive");
  if (!(frequency > 0.0)) throw Error(ErrorKind::InvalidArgument, "RIS frequency must be positive");
}

double beamforming_gain(std::size_t n_units) {
  if (n_units < 1) throw Error(ErrorKind::InvalidArgument, "unit count must be >= 1");
  return 10.0 * std::log10(static_cast<double>(n_units));
}

double wavenumber(double frequency_hz, double c) {
  if (!(frequency_hz > 0.0 && c > 0.0)) throw Error(ErrorKind::InvalidArgument, "frequency and speed must be positive");
  return 2.0 * std::numbers::pi * frequency_hz / c;
}

std::vector<double> phase_profile(const RisArray& array, double theta_in, double theta_out, double beta,
                                  double c_local) {
  array.validate();
  const double lim = std::numbers::pi / 2;
  if (!(std::abs(theta_in) < lim && std::abs(theta_out) < lim)) {
    throw Error(ErrorKind::InvalidArgument, "steering angles must lie in (-pi/2, pi/2)");
  }
  const double step =
      wavenumber(array.frequency, c_local) * array.spacing * (std::sin(theta_in + beta) - std::sin(theta_out - beta));
  std::vector<double> out(array.n_units);
  for (std::size_t n = 0; n < out.size(); ++n) out[n] = static_cast<double>(n) * step;
  return out;
}

VirtualSource reflect_as_source(const RisArray& array, const shadow::AngularBounds& bounds) {
  array.validate();
  bounds.validate();
  return {array.depth, array.range, bounds, beamforming_gain(array.total_units())};
}

std::vector<ray::RayPath> trace_virtual_source(const ssp::SoundSpeedProfile& profile, const VirtualSource& source,
                                               std::size_t count, ray::TraceConfig cfg, Parallelism par) {
  source.bounds.validate();
  cfg.origin_range = source.range;
  const auto angles = ray::linspace(source.bounds.theta_min, source.bounds.theta_max,
                                    source.bounds.theta_min == source.bounds.theta_max ? 1 : count);
  return ray::trace_fan(profile, source.depth, angles, cfg, par);
}

std::size_t required_units(const field::LinkBudget& budget, double tl_to_ris, double tl_ris_to_target, bool square,
                           std::size_t max_units) {
  budget.validate();
  if (!(tl_to_ris >= 0.0 && tl_ris_to_target >= 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "transmission losses must be >= 0");
  }
  const double needed = tl_to_ris + tl_ris_to_target - budget.tl_threshold;
  if (needed <= 0.0) return 1;

  // Gains are compared with a small slack so that e.g. 3.01 dB maps to 2.
  constexpr double slack = 1e-9;
  const double per_side = square ? needed / 2.0 : needed;
  if (per_side / 10.0 > std::log10(static_cast<double>(max_units)) + 1.0) {
    throw Error(ErrorKind::Infeasible, "needed gain of " + std::to_string(needed) + " dB exceeds the unit cap");
  }
  auto n = static_cast<std::size_t>(std::ceil(std::pow(10.0, per_side / 10.0) - 1e-6));
  n = std::max<std::size_t>(n, 1);
  while (n > 1 && 10.0 * std::log10(static_cast<double>(n - 1)) >= per_side - slack) --n;
  while (10.0 * std::log10(static_cast<double>(n)) < per_side - slack) ++n;
  const std::size_t units = square ? n * n : n;
  if (units > max_units) {
    throw Error(ErrorKind::Infeasible,
                "needed gain of " + std::to_string(needed) + " dB requires " + std::to_string(units) + " units");
  }
  return units;
}

void write_phase_csv(std::ostream& out, const std::vector<double>& phases) {
  out << "n,phase_rad\n";
  char buf[64];
  for (std::size_t i = 0; i < phases.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.9g\n", i + 1, phases[i]);
    out << buf;
  }
}

std::vector<double> read_phase_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "n,phase_rad") throw Error(ErrorKind::Parse, "phase CSV: missing header");
  std::vector<double> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::size_t n = 0;
    double ph = 0.0;
    if (std::sscanf(line.c_str(), "%zu,%lf", &n, &ph) != 2 || n != out.size() + 1) {
      throw Error(ErrorKind::Parse, "phase CSV: malformed row " + std::to_string(out.size() + 2));
    }
    out.push_back(ph);
  }
  return out;
}

}  // namespace sofar::ris
