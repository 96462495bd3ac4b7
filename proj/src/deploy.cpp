// SPDX-License-Identifier: Apache-2.0
#include "sofar/deploy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "sofar/error.hpp"
#include "sofar/quadrature.hpp"
#include "sofar/ray.hpp"

namespace sofar::deploy {

namespace {

constexpr double kRad2Deg = 180.0 / std::numbers::pi;
constexpr double kTheoremSlack = 1e-9;

void check_deep_geometry(const ssp::SoundSpeedProfile& profile, double h, double H) {
  if (!(h > 0.0 && h < H && H <= profile.z_max())) {
    std::ostringstream msg;
    msg << "need 0 < h < H <= z_max, got h=" << h << " H=" << H;
    throw Error(ErrorKind::ModelAssumption, msg.str());
  }
  const double c_s = profile.speed(0.0);
  const int n = 2000;
  for (int i = 1; i <= n; ++i) {
    const double z = H * i / n;
    if (!(profile.speed(z) < c_s)) {
      std::ostringstream msg;
      msg << "sound speed at " << z << " m is not below the surface speed";
      throw Error(ErrorKind::ModelAssumption, msg.str());
    }
  }
}

}  // namespace

SpanRatioResult deep_span_ratio(const ssp::SoundSpeedProfile& profile, double h, std::optional<double> H_opt) {
  const double H = H_opt ? *H_opt : ssp::channel_axis_depth(profile).depth;
  check_deep_geometry(profile, h, H);

  const double c_s = profile.speed(0.0);
  const double th_h = std::acos(profile.speed(h) / c_s);
  const double th_H = std::acos(profile.speed(H) / c_s);

  SpanRatioResult out;
  out.h = h;
  out.H = H;
  out.r_max_h = ray::horizontal_span(profile, 0.0, h, th_h, h);
  out.r_max_H = ray::horizontal_span(profile, 0.0, H, th_H, H);
  out.ratio = out.r_max_H / out.r_max_h;

  const double inv_cs2 = 1.0 / (c_s * c_s);
  auto g = [&](double z) {
    const double c = profile.speed(z);
    const double q = 1.0 / (c * c) - inv_cs2;
    return q > 0.0 ? 1.0 / std::sqrt(q) : 0.0;
  };
  auto piecewise = [&](double a, double b, bool singular_a) {
    std::vector<double> cuts{a};
    for (double zi : profile.interfaces()) {
      if (zi > a && zi < b) cuts.push_back(zi);
    }
    cuts.push_back(b);
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) s += quad::integrate(g, cuts[i], cuts[i + 1], singular_a && i == 0);
    return s;
  };
  out.xi = piecewise(h, H, false) / piecewise(0.0, h, true);
  return out;
}

namespace {

Theorem1Report summarize(std::vector<SpanRatioResult> samples) {
  Theorem1Report rep;
  rep.samples = std::move(samples);
  if (rep.samples.empty()) {
    rep.warning = "no depth samples; nothing was checked";
    return rep;
  }
  rep.min_ratio = std::numeric_limits<double>::infinity();
  for (const auto& s : rep.samples) {
    if (s.ratio < rep.min_ratio) {
      rep.min_ratio = s.ratio;
      rep.h_at_min = s.h;
    }
    if (!(s.ratio > 1.0 + kTheoremSlack)) {
      rep.holds = false;
      rep.violations.push_back(s.h);
    }
  }
  return rep;
}

}  // namespace

Theorem1Report verify_theorem1_serial(const ssp::SoundSpeedProfile& profile, std::span<const double> h_samples) {
  std::vector<SpanRatioResult> out;
  if (h_samples.empty()) return summarize(std::move(out));
  const double H = ssp::channel_axis_depth(profile).depth;
  for (double h : h_samples) out.push_back(deep_span_ratio(profile, h, H));
  return summarize(std::move(out));
}

Theorem1Report verify_theorem1(const ssp::SoundSpeedProfile& profile, std::span<const double> h_samples,
                               Parallelism par) {
  std::vector<SpanRatioResult> out(h_samples.size());
  if (h_samples.empty()) return summarize(std::move(out));
  const double H = ssp::channel_axis_depth(profile).depth;
  std::vector<std::optional<Error>> failures(h_samples.size());
  const auto n = static_cast<long>(h_samples.size());

#pragma omp parallel for schedule(dynamic, 1) num_threads(par.resolve())
  for (long i = 0; i < n; ++i) {
    try {
      out[i] = deep_span_ratio(profile, h_samples[i], H);
    } catch (const Error& e) {
      failures[i] = e;
    }
  }
  for (const auto& f : failures) {
    if (f) throw *f;
  }
  return summarize(std::move(out));
}

std::string to_string(Method m) {
  switch (m) {
    case Method::GoldenSection: return "golden_section";
    case Method::GridRefine: return "grid_refine";
    case Method::Genetic: return "genetic";
  }
  return "unknown";
}

Method method_from_string(const std::string& s) {
  if (s == "golden_section") return Method::GoldenSection;
  if (s == "grid_refine") return Method::GridRefine;
  if (s == "genetic") return Method::Genetic;
  throw Error(ErrorKind::InvalidArgument, "unknown optimization method '" + s + "'");
}

PlacementResult shallow_reach(const ssp::SoundSpeedProfile& profile, double z_ris, double h, double D) {
  if (!(h > 0.0 && h < D && D <= profile.z_max() + 1e-9)) {
    throw Error(ErrorKind::InvalidArgument, "shallow geometry needs 0 < h < D <= profile depth");
  }
  if (!(z_ris > h && z_ris <= D)) {
    std::ostringstream msg;
    msg << "RIS depth " << z_ris << " m outside (" << h << ", " << D << "]";
    throw Error(ErrorKind::Infeasible, msg.str());
  }
  const double c_h = profile.speed_from(h, -1);
  const double c_z = profile.speed(z_ris);
  const double c_D = profile.speed(D);

  const double cos_r = c_z / c_h;
  if (cos_r > 1.0) {
    std::ostringstream msg;
    msg << "c(" << z_ris << ") = " << c_z << " m/s exceeds the duct speed " << c_h << " m/s";
    throw Error(ErrorKind::Infeasible, msg.str());
  }
  const double cos_d = c_D * cos_r / c_z;
  if (cos_d > 1.0) throw Error(ErrorKind::Infeasible, "seabed speed exceeds the duct speed");

  PlacementResult p;
  p.z_ris = z_ris;
  p.theta_reflect = std::acos(cos_r);
  p.theta_d = std::acos(cos_d);
  const double leg1 = p.theta_reflect == 0.0 ? 0.0 : std::abs(z_ris - h) / std::tan(p.theta_reflect / 2.0);
  const double leg2 = p.theta_d == 0.0 ? 0.0 : std::abs(D - h) / std::tan(p.theta_d / 2.0);
  p.reach = leg1 + leg2;
  return p;
}

PlacementResult optimize_ris_depth(const ssp::SoundSpeedProfile& profile, double h, double D, Method method,
                                   const OptimizerOptions& options) {
  if (!(h > 0.0 && h < D && D <= profile.z_max() + 1e-9)) {
    throw Error(ErrorKind::Infeasible, "no depth interval below the duct");
  }
  auto objective = [&](double z) {
    try {
      return shallow_reach(profile, z, h, D).reach;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Infeasible) throw;
      return -std::numeric_limits<double>::infinity();
    }
  };
  const double lo = h + 1e-6 * std::max(1.0, D);
  const double hi = D;

  optimize::ScalarResult r;
  switch (method) {
    case Method::GoldenSection: r = optimize::golden_section_maximize(objective, lo, hi, options.termination); break;
    case Method::GridRefine:
      r = optimize::grid_refine_maximize(objective, lo, hi, options.termination, options.grid_points);
      break;
    case Method::Genetic: r = optimize::genetic_maximize(objective, lo, hi, options.genetic); break;
  }
  if (!std::isfinite(r.value)) throw Error(ErrorKind::Infeasible, "no feasible RIS depth found");

  PlacementResult p = shallow_reach(profile, r.x, h, D);
  p.method = method;
  p.iterations = r.iterations;
  p.history = std::move(r.history);
  return p;
}

RelayPlan multihop_plan(const ssp::SoundSpeedProfile& profile, double h, double D, double z_ris,
                        double target_range) {
  if (!(target_range >= 0.0)) throw Error(ErrorKind::InvalidArgument, "target range must be >= 0");
  const auto p = shallow_reach(profile, z_ris, h, D);
  if (!(p.reach > 0.0)) throw Error(ErrorKind::Infeasible, "zero reach per hop");
  RelayPlan plan;
  plan.per_hop_reach = p.reach;
  plan.unit_count = static_cast<std::size_t>(std::ceil(target_range / p.reach));
  for (std::size_t k = 0; k < plan.unit_count; ++k) plan.positions.emplace_back(static_cast<double>(k) * p.reach, z_ris);
  return plan;
}

nlohmann::json to_json(const PlacementResult& p) {
  return {{"z_ris_m", p.z_ris},
          {"theta_reflect_deg", p.theta_reflect * kRad2Deg},
          {"theta_d_deg", p.theta_d * kRad2Deg},
          {"reach_m", p.reach},
          {"method", to_string(p.method)},
          {"iterations", p.iterations}};
}

PlacementResult placement_from_json(const nlohmann::json& j) {
  PlacementResult p;
  p.z_ris = j.at("z_ris_m").get<double>();
  p.theta_reflect = j.at("theta_reflect_deg").get<double>() / kRad2Deg;
  p.theta_d = j.at("theta_d_deg").get<double>() / kRad2Deg;
  p.reach = j.at("reach_m").get<double>();
  p.method = method_from_string(j.at("method").get<std::string>());
  p.iterations = j.at("iterations").get<int>();
  return p;
}

nlohmann::json to_json(const SpanRatioResult& r) {
  return {{"h_m", r.h}, {"H_m", r.H}, {"r_max_h_m", r.r_max_h}, {"r_max_H_m", r.r_max_H},
          {"ratio", r.ratio}, {"xi", r.xi}};
}

nlohmann::json to_json(const Theorem1Report& r) {
  nlohmann::json samples = nlohmann::json::array();
  for (const auto& s : r.samples) samples.push_back(to_json(s));
  nlohmann::json j = {{"holds", r.holds}, {"samples", samples}, {"violations_h_m", r.violations}};
  if (!r.samples.empty()) {
    j["min_ratio"] = r.min_ratio;
    j["h_at_min_m"] = r.h_at_min;
  }
  if (!r.warning.empty()) j["warning"] = r.warning;
  return j;
}

nlohmann::json to_json(const RelayPlan& p) {
  nlohmann::json pos = nlohmann::json::array();
  for (const auto& [r, z] : p.positions) pos.push_back({{"r_m", r}, {"z_m", z}});
  return {{"unit_count", p.unit_count}, {"per_hop_reach_m", p.per_hop_reach}, {"positions", pos}};
}

}  // namespace sofar::deploy
