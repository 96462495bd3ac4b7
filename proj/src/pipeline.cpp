// SPDX-License-Identifier: Apache-2.0
#include "sofar/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "sofar/deploy.hpp"
#include "sofar/dynamics.hpp"
#include "sofar/error.hpp"
#include "sofar/ris.hpp"
#include "sofar/shadow.hpp"

namespace sofar::cli {

namespace fs = std::filesystem;

namespace {

constexpr double kRad2Deg = 180.0 / std::numbers::pi;

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + p.string());
  return out;
}

void write_json(const fs::path& p, const nlohmann::json& j) {
  auto out = open_out(p);
  out << j.dump(2) << '\n';
}

std::vector<ray::RayPath> placement_fan(const Scenario& s, const ssp::SoundSpeedProfile& profile,
                                        const RisPlacement& p, Parallelism par) {
  ray::TraceConfig cfg = s.trace;
  cfg.range_direction = p.direction;
  cfg.max_range = p.direction > 0 ? s.grid.r_max - p.array.range : p.array.range - s.grid.r_min;
  if (!(cfg.max_range > 0.0)) throw Error(ErrorKind::InvalidArgument, "RIS '" + p.name + "' faces out of the grid");
  const auto vs = ris::reflect_as_source(p.array, {p.theta_min, p.theta_max});
  return ris::trace_virtual_source(profile, vs, p.rays, cfg, par);
}

bool deep_case(const Scenario& s) { return !s.shallow.has_value(); }

nlohmann::json run_trace(const Scenario& s, const fs::path& out, Parallelism par) {
  const auto profile = s.profile.build();
  const auto angles = ray::linspace(s.source.theta_min, s.source.theta_max, s.export_rays);
  const auto fan = ray::trace_fan(profile, s.source.depth, angles, s.trace, par);
  fs::create_directories(out / "rays");
  nlohmann::json rays = nlohmann::json::array();
  double worst = 0.0;
  for (std::size_t i = 0; i < fan.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "ray_%03zu.csv", i);
    auto f = open_out(out / "rays" / name);
    ray::write_csv(f, fan[i]);
    const double dev = ray::snell_deviation(profile, fan[i]);
    worst = std::max(worst, dev);
    const auto& end = fan[i].states.back();
    rays.push_back({{"file", std::string("rays/") + name},
                    {"theta0_deg", angles[i] * kRad2Deg},
                    {"end_r_m", end.r},
                    {"end_z_m", end.z},
                    {"surface_reflections", fan[i].count(ray::EventKind::SurfaceReflect)},
                    {"absorbed", fan[i].count(ray::EventKind::Absorbed) > 0},
                    {"snell_deviation", dev}});
  }
  nlohmann::json j = {{"source_depth_m", s.source.depth}, {"rays", rays}, {"max_snell_deviation", worst}};
  write_json(out / "trace.json", j);
  return j;
}

nlohmann::json run_field(const Scenario& s, const fs::path& out, Parallelism par) {
  const auto fields = compute_fields(s, par);
  auto dump = [&](const std::string& tag, const field::TLGrid& g) {
    auto f = open_out(out / ("field_" + tag + ".csv"));
    field::write_csv(f, g);
    auto summary = field::coverage_summary(g, s.window, s.thresholds);
    write_json(out / ("coverage_" + tag + ".json"), summary);
    return summary;
  };
  nlohmann::json j;
  j["direct"] = dump("direct", fields.direct);
  if (!s.ris.empty()) {
    j["with_ris"] = dump("with_ris", fields.with_ris);
    for (const auto& [name, g] : fields.per_ris) j["per_ris"][name] = dump("ris_" + name, g);
  }
  return j;
}

nlohmann::json run_shadow(const Scenario& s, const fs::path& out, Parallelism par) {
  const auto profile = s.profile.build();
  nlohmann::json j;
  if (s.shallow) {
    const auto& sh = *s.shallow;
    const auto rep = shadow::shallow_shadow_area(profile, sh.h, sh.D, sh.r_max_window, s.source.depth, sh.dz);
    j = shadow::to_json(rep);
    j["critical_angle_deg"] =
        shadow::critical_grazing_angle(profile.speed(s.source.depth), profile.speed_from(sh.h, -1)) * kRad2Deg;
  } else {
    if (!s.shadow) throw Error(ErrorKind::Validation, "shadow: section required for deep-water scenarios");
    const auto rep = shadow::deep_shadow_report(profile, s.source.depth, {s.shadow->theta_min, s.shadow->theta_max},
                                                s.window, s.shadow->dz, par);
    j = shadow::to_json(rep);
    j["first_bending_region"] = field::to_json(shadow::first_bending_region(profile));
  }
  write_json(out / "shadow.json", j);
  return j;
}

nlohmann::json run_optimize(const Scenario& s, const fs::path& out, Parallelism par) {
  const auto profile = s.profile.build();
  nlohmann::json j;
  if (s.shallow) {
    const auto& sh = *s.shallow;
    deploy::OptimizerOptions opts;
    opts.genetic.seed = s.seed;
    const auto best = deploy::optimize_ris_depth(profile, sh.h, sh.D, sh.method, opts);
    j["placement"] = deploy::to_json(best);
    write_json(out / "placement.json", j["placement"]);
    nlohmann::json relays = nlohmann::json::array();
    for (double z : sh.relay_depths) {
      auto r = deploy::to_json(deploy::multihop_plan(profile, sh.h, sh.D, z, sh.target_range));
      r["z_ris_m"] = z;
      r["target_range_m"] = sh.target_range;
      relays.push_back(r);
    }
    j["relays"] = relays;
    write_json(out / "relays.json", relays);
  } else {
    if (!s.deep) throw Error(ErrorKind::Validation, "deep: section required for deep-water optimize");
    const auto rep = deploy::verify_theorem1(profile, s.deep->h_samples, par);
    j["theorem1"] = deploy::to_json(rep);
    write_json(out / "theorem1.json", j["theorem1"]);
    const auto fields = compute_fields(s, par);
    nlohmann::json units = nlohmann::json::array();
    for (const auto& u : units_by_depth(s, fields.direct, par)) {
      units.push_back({{"depth_m", u.depth},
                       {"ris_range_m", u.ris_range},
                       {"tl_to_ris_db", u.tl_to_ris},
                       {"tl_ris_to_target_db", u.tl_ris_to_target},
                       {"units", u.units},
                       {"arrays", u.arrays},
                       {"array_side", s.deep->array_side}});
    }
    j["units_by_depth"] = units;
    write_json(out / "units.json", units);
  }
  return j;
}

nlohmann::json run_dynamics(const Scenario& s, const fs::path& out, Parallelism par) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& c : s.dynamics) {
    auto traj = c.trajectory;
    traj.seed = s.seed;
    auto gyro = c.gyro;
    gyro.seed = s.seed;
    auto opts = c.options;
    opts.pose_seed = s.seed;
    const auto trace = dynamics::simulate_correction(dynamics::make_trajectory(traj), gyro, c.array, c.theta,
                                                     c.alpha_out, opts);
    {
      auto f = open_out(out / ("dynamics_" + c.name + ".csv"));
      dynamics::write_csv(f, trace);
    }
    const auto ens =
        dynamics::run_ensemble(c.trajectory, c.gyro, c.array, c.theta, c.alpha_out, c.options, c.trials, s.seed, par);
    nlohmann::json cj = {{"trace", dynamics::summary_json(trace)}, {"ensemble", dynamics::to_json(ens)}};
    write_json(out / ("dynamics_" + c.name + ".json"), cj);
    j[c.name] = cj;
  }
  return j;
}

}  // namespace

std::optional<Command> command_from_string(const std::string& s) {
  if (s == "trace") return Command::Trace;
  if (s == "field") return Command::Field;
  if (s == "shadow") return Command::Shadow;
  if (s == "optimize") return Command::Optimize;
  if (s == "dynamics") return Command::Dynamics;
  if (s == "report") return Command::Report;
  return std::nullopt;
}

std::string to_string(Command c) {
  switch (c) {
    case Command::Trace: return "trace";
    case Command::Field: return "field";
    case Command::Shadow: return "shadow";
    case Command::Optimize: return "optimize";
    case Command::Dynamics: return "dynamics";
    case Command::Report: return "report";
  }
  return "unknown";
}

std::vector<ray::RayPath> direct_fan(const Scenario& s, std::size_t rays, Parallelism par) {
  const auto profile = s.profile.build();
  const auto angles = ray::linspace(s.source.theta_min, s.source.theta_max, rays);
  return ray::trace_fan(profile, s.source.depth, angles, s.trace, par);
}

FieldOutcome compute_fields(const Scenario& s, Parallelism par) {
  const auto profile = s.profile.build();
  FieldOutcome out;
  const auto fan = direct_fan(s, s.source.rays, par);
  out.direct = field::compute_field(fan, s.grid, s.source.frequency, par);
  out.with_ris = out.direct;
  for (const auto& p : s.ris) {
    const double tl_in = out.direct.lookup(p.array.range, p.array.depth);
    if (std::isinf(tl_in)) {
      throw Error(ErrorKind::NoPath, "RIS '" + p.name + "' sits in a cell the direct fan never reaches");
    }
    const auto relay = field::compute_field(placement_fan(s, profile, p, par), s.grid, p.array.frequency, par);
    const double gain = ris::beamforming_gain(p.array.total_units());
    out.per_ris.emplace_back(p.name, field::merge_relay(out.direct, relay, tl_in, gain));
    out.with_ris = field::merge_relay(out.with_ris, relay, tl_in, gain);
  }
  return out;
}

std::vector<UnitsAtDepth> units_by_depth(const Scenario& s, const field::TLGrid& direct, Parallelism par) {
  if (!s.deep) throw Error(ErrorKind::Validation, "deep: section required for unit counts");
  const auto& d = *s.deep;
  const auto profile = s.profile.build();
  const double c_s = profile.speed(0.0);
  const field::LinkBudget budget{s.source.source_level, s.thresholds.back(), s.source.frequency};
  const double dz = direct.z_axis.size() > 1 ? direct.z_axis[1] - direct.z_axis[0] : 0.0;

  std::vector<UnitsAtDepth> out;
  for (double z : d.unit_depths) {
    std::size_t iz = 0;
    while (iz + 1 < direct.nz() && direct.z_axis[iz] + 0.5 * dz < z) ++iz;
    std::optional<std::size_t> first, last;
    for (std::size_t ir = 0; ir < direct.nr(); ++ir) {
      if (!std::isinf(direct.at(ir, iz))) {
        if (!first) first = ir;
        last = ir;
      } else if (first) {
        break;
      }
    }
    if (!first) throw Error(ErrorKind::NoPath, "no lit cell at depth " + std::to_string(z) + " m");
    const std::size_t mid = (*first + *last) / 2;

    UnitsAtDepth u;
    u.depth = z;
    u.ris_range = direct.r_axis[mid];
    u.tl_to_ris = direct.at(mid, iz);
    const double c_z = profile.speed(z);
    if (!(c_z < c_s)) throw Error(ErrorKind::ModelAssumption, "RIS depth is not below the surface speed");
    const double th = std::acos(c_z / c_s);

    ray::TraceConfig cfg = s.trace;
    cfg.max_range = s.grid.r_max - u.ris_range;
    const ris::VirtualSource vs{z, u.ris_range, {-th, th}, 0.0};
    const auto relay = field::compute_field(ris::trace_virtual_source(profile, vs, d.rays, cfg, par), s.grid,
                                            s.source.frequency, par);
    u.tl_ris_to_target = relay.lookup(d.target_range, d.target_depth);
    if (std::isinf(u.tl_ris_to_target)) {
      throw Error(ErrorKind::NoPath, "target not reached from a RIS at depth " + std::to_string(z) + " m");
    }
    u.units = ris::required_units(budget, u.tl_to_ris, u.tl_ris_to_target, true);
    const std::size_t per_array = d.array_side * d.array_side;
    u.arrays = (u.units + per_array - 1) / per_array;
    out.push_back(u);
  }
  return out;
}

nlohmann::json run_command(Command c, const Scenario& s, const fs::path& out, Parallelism par) {
  fs::create_directories(out);
  switch (c) {
    case Command::Trace: return run_trace(s, out, par);
    case Command::Field: return run_field(s, out, par);
    case Command::Shadow: return run_shadow(s, out, par);
    case Command::Optimize: return run_optimize(s, out, par);
    case Command::Dynamics: return run_dynamics(s, out, par);
    case Command::Report: {
      nlohmann::json j = {{"scenario", s.name}, {"seed", s.seed}, {"kind", deep_case(s) ? "deep" : "shallow"}};
      j["trace"] = run_trace(s, out, par);
      j["field"] = run_field(s, out, par);
      j["shadow"] = run_shadow(s, out, par);
      j["optimize"] = run_optimize(s, out, par);
      if (!s.dynamics.empty()) j["dynamics"] = run_dynamics(s, out, par);
      write_json(out / "report.json", j);
      return j;
    }
  }
  throw Error(ErrorKind::InvalidArgument, "unknown command");
}

}  // namespace sofar::cli
