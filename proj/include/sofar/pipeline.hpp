// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sofar/field.hpp"
#include "sofar/parallel.hpp"
#include "sofar/scenario.hpp"

namespace sofar::cli {

enum class Command { Trace, Field, Shadow, Optimize, Dynamics, Report };

std::optional<Command> command_from_string(const std::string& s);
std::string to_string(Command c);

std::vector<ray::RayPath> direct_fan(const Scenario& s, std::size_t rays, Parallelism par = {});

struct FieldOutcome {
  field::TLGrid direct;
  field::TLGrid with_ris;  // direct merged with every placement
  std::vector<std::pair<std::string, field::TLGrid>> per_ris;  // direct merged with one placement
};

/// Direct TL grid plus relay grids. Throws NoPath if a placement sits in a
/// cell the direct fan never reaches.
FieldOutcome compute_fields(const Scenario& s, Parallelism par = {});

struct UnitsAtDepth {
  double depth = 0.0;
  double ris_range = 0.0;  // midpoint of the first lit run at this depth
  double tl_to_ris = 0.0;
  double tl_ris_to_target = 0.0;
  std::size_t units = 0;   // square count n^2
  std::size_t arrays = 0;  // arrays of array_side^2 units
};

/// Unit counts closing the link at the top threshold for a RIS placed in the
/// lit belt at each configured depth, re-radiating a surface-tangent fan
/// toward the target.
std::vector<UnitsAtDepth> units_by_depth(const Scenario& s, const field::TLGrid& direct, Parallelism par = {});

/// Runs one command, writing its files under `out`. Returns the JSON that
/// `report` aggregates.
nlohmann::json run_command(Command c, const Scenario& s, const std::filesystem::path& out, Parallelism par = {});

}  // namespace sofar::cli
