// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sofar/optimize.hpp"
#include "sofar/parallel.hpp"
#include "sofar/ssp.hpp"

namespace sofar::deploy {

struct SpanRatioResult {
  double h = 0.0;
  double H = 0.0;
  double r_max_h = 0.0;  // m
  double r_max_H = 0.0;  // m
  double ratio = 0.0;    // r_max_H / r_max_h
  double xi = 0.0;       // from its own integral ratio, not from `ratio`
};

/// Surface-tangent spans from depths h and H, plus the gain xi computed as
///   xi = int_h^H g dz / int_0^h g dz,  g = 1 / sqrt(1/c^2 - 1/c_s^2).
/// H defaults to the channel axis. Throws ModelAssumption unless
/// 0 < h < H and c(z) < c(0) on (0, H].
SpanRatioResult deep_span_ratio(const ssp::SoundSpeedProfile& profile, double h, std::optional<double> H = {});

struct Theorem1Report {
  std::vector<SpanRatioResult> samples;
  bool holds = true;  // every ratio > 1 + 1e-9
  double min_ratio = 0.0;
  double h_at_min = 0.0;
  std::vector<double> violations;  // h values with ratio <= 1 + 1e-9
  std::string warning;
};

Theorem1Report verify_theorem1(const ssp::SoundSpeedProfile& profile, std::span<const double> h_samples,
                               Parallelism par = {});
Theorem1Report verify_theorem1_serial(const ssp::SoundSpeedProfile& profile, std::span<const double> h_samples);

enum class Method { GoldenSection, GridRefine, Genetic };

std::string to_string(Method m);
Method method_from_string(const std::string& s);

struct PlacementResult {
  double z_ris = 0.0;          // m
  double theta_reflect = 0.0;  // rad
  double theta_d = 0.0;        // rad
  double reach = 0.0;          // m
  Method method = Method::GoldenSection;
  int iterations = 0;
  std::vector<double> history;
};

/// Reach of a RIS at z_ris below a duct of thickness h over a seabed at D.
/// c_h is the upper-layer speed at h. Throws Infeasible when c(z_ris) > c_h
/// or the depth lies outside (h, D].
PlacementResult shallow_reach(const ssp::SoundSpeedProfile& profile, double z_ris, double h, double D);

struct OptimizerOptions {
  optimize::Termination termination{0.5, 200};
  int grid_points = 21;
  optimize::GeneticOptions genetic;
};

/// Maximises shallow_reach over (h, D]. Infeasible depths score -inf.
PlacementResult optimize_ris_depth(const ssp::SoundSpeedProfile& profile, double h, double D, Method method,
                                   const OptimizerOptions& options = {});

struct RelayPlan {
  std::size_t unit_count = 0;
  std::vector<std::pair<double, double>> positions;  // (r m, z m)
  double per_hop_reach = 0.0;                         // m
};

RelayPlan multihop_plan(const ssp::SoundSpeedProfile& profile, double h, double D, double z_ris,
                        double target_range);

nlohmann::json to_json(const PlacementResult& p);
PlacementResult placement_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SpanRatioResult& r);
nlohmann::json to_json(const Theorem1Report& r);
nlohmann::json to_json(const RelayPlan& p);

}  // namespace sofar::deploy
