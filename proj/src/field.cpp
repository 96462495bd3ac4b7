// SPDX-License-Identifier: Apache-2.0
#include "sofar/field.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include "sofar/error.hpp"

namespace sofar::field {

void Region::validate() const {
  if (!(r_min < r_max && z_min < z_max)) {
    throw Error(ErrorKind::InvalidArgument, "region needs r_min < r_max and z_min < z_max");
  }
}

void GridSpec::validate() const {
  if (!(r_min < r_max && z_min < z_max) || nr == 0 || nz == 0) {
    throw Error(ErrorKind::InvalidArgument, "grid spec needs a positive extent and at least one cell per axis");
  }
}

TLGrid TLGrid::empty(const GridSpec& spec) {
  spec.validate();
  TLGrid g;
  g.r_axis.resize(spec.nr);
  g.z_axis.resize(spec.nz);
  for (std::size_t i = 0; i < spec.nr; ++i) g.r_axis[i] = spec.r_min + (static_cast<double>(i) + 0.5) * spec.dr();
  for (std::size_t i = 0; i < spec.nz; ++i) g.z_axis[i] = spec.z_min + (static_cast<double>(i) + 0.5) * spec.dz();
  g.tl.assign(spec.nr * spec.nz, NO_RAY);
  return g;
}

namespace {

long cell_index(double lo, double width, std::size_t n, double x) {
  const double f = (x - lo) / width;
  if (!(f >= 0.0) || f > static_cast<double>(n)) return -1;
  return std::min(static_cast<long>(f), static_cast<long>(n) - 1);
}

// Same, recovering the cell width from the centre spacing.
long cell_index(const std::vector<double>& axis, double x) {
  const std::size_t n = axis.size();
  if (n < 2) return -1;
  const double w = axis[1] - axis[0];
  return cell_index(axis.front() - 0.5 * w, w, n, x);
}

void deposit(const ray::RayPath& path, const GridSpec& spec, double alpha, std::vector<double>& tl) {
  const double dr = spec.dr();
  const double dz = spec.dz();
  for (const auto& st : path.states) {
    const long ir = cell_index(spec.r_min, dr, spec.nr, st.r);
    const long iz = cell_index(spec.z_min, dz, spec.nz, st.z);
    if (ir < 0 || iz < 0) continue;
    double& cell = tl[static_cast<std::size_t>(iz) * spec.nr + static_cast<std::size_t>(ir)];
    cell = std::min(cell, spreading_loss(st.s, alpha));
  }
}

void check_inputs(std::span<const ray::RayPath> fan, const GridSpec& spec, double frequency_hz) {
  if (fan.empty()) throw Error(ErrorKind::InvalidArgument, "compute_field needs at least one ray");
  spec.validate();
  if (!(frequency_hz > 0.0)) throw Error(ErrorKind::InvalidArgument, "frequency must be positive");
}

}  // namespace

double TLGrid::lookup(double r, double z) const {
  const long ir = cell_index(r_axis, r);
  const long iz = cell_index(z_axis, z);
  if (ir < 0 || iz < 0) return NO_RAY;
  return at(static_cast<std::size_t>(ir), static_cast<std::size_t>(iz));
}

void LinkBudget::validate() const {
  if (!(frequency > 0.0)) throw Error(ErrorKind::InvalidArgument, "link budget frequency must be positive");
  if (!std::isfinite(source_level) || !std::isfinite(tl_threshold)) {
    throw Error(ErrorKind::InvalidArgument, "link budget levels must be finite");
  }
}

double thorp_absorption(double frequency_hz) {
  if (!(frequency_hz > 0.0)) throw Error(ErrorKind::InvalidArgument, "frequency must be positive");
  const double f2 = (frequency_hz / 1000.0) * (frequency_hz / 1000.0);
  return 0.11 * f2 / (1.0 + f2) + 44.0 * f2 / (4100.0 + f2) + 2.75e-4 * f2 + 0.003;
}

double spreading_loss(double s, double alpha_db_per_km) {
  return 20.0 * std::log10(std::max(s, 1.0)) + alpha_db_per_km * s / 1000.0;
}

double tl_from_power_ratio(double p_over_p0) {
  if (!(p_over_p0 > 0.0)) throw Error(ErrorKind::Domain, "power ratio must be positive");
  return -10.0 * std::log10(p_over_p0);
}

double power_ratio_from_tl(double tl_db) { return std::pow(10.0, -tl_db / 10.0); }

TLGrid compute_field_serial(std::span<const ray::RayPath> fan, const GridSpec& spec, double frequency_hz) {
  check_inputs(fan, spec, frequency_hz);
  const double alpha = thorp_absorption(frequency_hz);
  TLGrid grid = TLGrid::empty(spec);
  for (const auto& path : fan) deposit(path, spec, alpha, grid.tl);
  return grid;
}

TLGrid compute_field(std::span<const ray::RayPath> fan, const GridSpec& spec, double frequency_hz,
                     Parallelism par) {
  check_inputs(fan, spec, frequency_hz);
  const double alpha = thorp_absorption(frequency_hz);
  TLGrid grid = TLGrid::empty(spec);
  const auto n = static_cast<long>(fan.size());

#pragma omp parallel num_threads(par.resolve())
  {
    std::vector<double> local(grid.tl.size(), NO_RAY);
#pragma omp for schedule(dynamic, 4) nowait
    for (long i = 0; i < n; ++i) deposit(fan[static_cast<std::size_t>(i)], spec, alpha, local);
#pragma omp critical(sofar_field_merge)
    for (std::size_t k = 0; k < local.size(); ++k) grid.tl[k] = std::min(grid.tl[k], local[k]);
  }
  return grid;
}

TLGrid merge_relay(const TLGrid& direct, const TLGrid& relay, double tl_to_relay, double gain_db) {
  if (direct.r_axis != relay.r_axis || direct.z_axis != relay.z_axis) {
    throw Error(ErrorKind::InvalidArgument, "relay grid axes differ from the direct grid");
  }
  TLGrid out = direct;
  for (std::size_t k = 0; k < out.tl.size(); ++k) {
    if (std::isinf(relay.tl[k])) continue;
    const double via = std::max(0.0, relay.tl[k] + tl_to_relay - gain_db);
    out.tl[k] = std::min(out.tl[k], via);
  }
  return out;
}

double coverage_proportion(const TLGrid& grid, double threshold_db, const Region& region) {
  region.validate();
  std::size_t total = 0;
  std::size_t covered = 0;
  for (std::size_t iz = 0; iz < grid.nz(); ++iz) {
    const double z = grid.z_axis[iz];
    if (z < region.z_min || z > region.z_max) continue;
    for (std::size_t ir = 0; ir < grid.nr(); ++ir) {
      if (!region.contains(grid.r_axis[ir], z)) continue;
      ++total;
      if (grid.at(ir, iz) <= threshold_db) ++covered;
    }
  }
  if (total == 0) throw Error(ErrorKind::InvalidArgument, "region contains no grid cells");
  return static_cast<double>(covered) / static_cast<double>(total);
}

void write_csv(std::ostream& out, const TLGrid& grid) {
  out << "r_m,z_m,tl_db\n";
  char buf[96];
  for (std::size_t iz = 0; iz < grid.nz(); ++iz) {
    for (std::size_t ir = 0; ir < grid.nr(); ++ir) {
      const double v = grid.at(ir, iz);
      if (std::isinf(v)) {
        std::snprintf(buf, sizeof buf, "%.6g,%.6g,inf\n", grid.r_axis[ir], grid.z_axis[iz]);
      } else {
        std::snprintf(buf, sizeof buf, "%.6g,%.6g,%.6g\n", grid.r_axis[ir], grid.z_axis[iz], v);
      }
      out << buf;
    }
  }
}

TLGrid read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "r_m,z_m,tl_db") throw Error(ErrorKind::Parse, "TL CSV: missing header");
  std::map<double, std::size_t> rs;
  std::map<double, std::size_t> zs;
  struct Row {
    double r, z, tl;
  };
  std::vector<Row> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string a, b, c;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c)) {
      throw Error(ErrorKind::Parse, "TL CSV: malformed line " + std::to_string(lineno));
    }
    try {
      Row row{std::stod(a), std::stod(b), c == "inf" ? NO_RAY : std::stod(c)};
      rows.push_back(row);
      rs.emplace(row.r, 0);
      zs.emplace(row.z, 0);
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::Parse, "TL CSV: bad number on line " + std::to_string(lineno));
    }
  }
  TLGrid g;
  for (auto& [r, idx] : rs) {
    idx = g.r_axis.size();
    g.r_axis.push_back(r);
  }
  for (auto& [z, idx] : zs) {
    idx = g.z_axis.size();
    g.z_axis.push_back(z);
  }
  if (rows.size() != g.r_axis.size() * g.z_axis.size()) throw Error(ErrorKind::Parse, "TL CSV: grid is not full");
  g.tl.assign(rows.size(), NO_RAY);
  for (const auto& row : rows) g.at(rs[row.r], zs[row.z]) = row.tl;
  return g;
}

nlohmann::json to_json(const Region& region) {
  return {{"r_min_m", region.r_min}, {"r_max_m", region.r_max}, {"z_min_m", region.z_min}, {"z_max_m", region.z_max}};
}

Region region_from_json(const nlohmann::json& j) {
  Region r{j.at("r_min_m").get<double>(), j.at("r_max_m").get<double>(), j.at("z_min_m").get<double>(),
           j.at("z_max_m").get<double>()};
  r.validate();
  return r;
}

nlohmann::json coverage_summary(const TLGrid& grid, const Region& region, std::span<const double> thresholds) {
  nlohmann::json cov = nlohmann::json::array();
  for (double t : thresholds) cov.push_back(coverage_proportion(grid, t, region));
  return {{"region", to_json(region)},
          {"thresholds", std::vector<double>(thresholds.begin(), thresholds.end())},
          {"coverage", cov}};
}

}  // namespace sofar::field
