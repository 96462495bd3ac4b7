// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sofar/deploy.hpp"
#include "sofar/dynamics.hpp"
#include "sofar/field.hpp"
#include "sofar/ray.hpp"
#include "sofar/ris.hpp"
#include "sofar/ssp.hpp"

namespace sofar::cli {

struct ProfileSpec {
  ssp::ProfileKind kind = ssp::ProfileKind::Munk;
  double c0 = 1500.0;
  double z_axis = 2100.0;
  double z_scale = 1300.0;
  double eps = 0.00737;
  double z_max = 4000.0;
  std::vector<ssp::Layer> layers;  // LayeredLinear only

  ssp::SoundSpeedProfile build() const;
};

struct SourceSpec {
  double depth = 0.0;          // m
  double theta_min = 0.0;      // rad
  double theta_max = 0.0;      // rad
  std::size_t rays = 1;
  double source_level = 0.0;   // dB
  double frequency = 10.0e3;   // Hz
};

struct RisPlacement {
  std::string name;
  ris::RisArray array;
  double theta_min = 0.0;  // rad, re-radiated fan
  double theta_max = 0.0;
  std::size_t rays = 1;
  int direction = +1;
};

struct ShadowSpec {
  double theta_min = 0.0;  // rad
  double theta_max = 0.0;
  double dz = 10.0;        // m
};

/// Deep-water placement study: span-ratio sweep and unit counts per depth.
struct DeepDeploySpec {
  std::vector<double> h_samples;
  std::vector<double> unit_depths;
  std::size_t array_side = 20;
  double target_range = 0.0;
  double target_depth = 0.0;
  std::size_t rays = 801;
};

struct ShallowSpec {
  double h = 60.0;
  double D = 120.0;
  double r_max_window = 10.0e3;
  double dz = 1.0;
  deploy::Method method = deploy::Method::GoldenSection;
  double target_range = 10.0e3;
  std::vector<double> relay_depths;
};

struct DynamicsCase {
  std::string name;
  dynamics::TrajectorySpec trajectory;
  dynamics::GyroModel gyro;
  dynamics::CorrectionOptions options;
  ris::RisArray array;
  double theta = 0.0;      // rad
  double alpha_out = 0.0;  // rad
  std::size_t trials = 1;
};

struct Scenario {
  std::string name;
  ProfileSpec profile;
  SourceSpec source;
  ray::TraceConfig trace;
  std::size_t export_rays = 41;
  field::GridSpec grid;
  field::Region window;
  std::vector<double> thresholds;
  std::vector<RisPlacement> ris;
  std::optional<ShadowSpec> shadow;
  std::optional<DeepDeploySpec> deep;
  std::optional<ShallowSpec> shallow;
  std::vector<DynamicsCase> dynamics;
  std::uint64_t seed = 1;
};

/// Throws Parse (malformed JSON, with line number) or Validation (dotted
/// field name plus reason).
Scenario load_scenario(const std::filesystem::path& path);
Scenario parse_scenario(const nlohmann::json& j);
Scenario parse_scenario_text(const std::string& text);

}  // namespace sofar::cli
