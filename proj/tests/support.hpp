// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <filesystem>
#include <numbers>

#include "sofar/ssp.hpp"

namespace sofar::test {

inline constexpr double kDeg = std::numbers::pi / 180.0;

inline ssp::SoundSpeedProfile munk(double z_max = 4000.0) {
  return ssp::munk_profile(1500.0, 2100.0, 1300.0, 0.00737, z_max);
}

inline std::filesystem::path scenario_path(const char* name) {
  return std::filesystem::path(SOFAR_SCENARIO_DIR) / name;
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace sofar::test
