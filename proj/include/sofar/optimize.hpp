// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

// Bounded scalar optimizers. Objectives may return -infinity for infeasible
// points; every method treats that as "worse than anything finite".
namespace sofar::optimize {

using Objective = std::function<double(double)>;

struct ScalarResult {
  double x = 0.0;
  double value = 0.0;
  int iterations = 0;
  std::vector<double> history;  // best objective value after each iteration
};

struct Termination {
  double tolerance = 0.5;  // stop when the bracket is narrower than this
  int max_iterations = 200;
};

/// Golden-section search for a maximum of a unimodal f on [lo, hi]. The final
/// bracket ends are evaluated too, so optima on the boundary are returned
/// exactly.
ScalarResult golden_section_maximize(const Objective& f, double lo, double hi, Termination term = {});

ScalarResult golden_section_minimize(const Objective& f, double lo, double hi, Termination term = {});

/// Uniform grid, then re-grid around the best node until the spacing is below
/// the tolerance.
ScalarResult grid_refine_maximize(const Objective& f, double lo, double hi, Termination term = {},
                                  int grid_points = 21);

struct GeneticOptions {
  int population = 32;
  int generations = 100;
  std::uint64_t seed = 1;
  double crossover_rate = 0.9;
  double mutation_rate = 0.3;
  int elites = 2;
};

/// Real-coded GA: binary tournament, BLX-0.5 crossover, shrinking Gaussian
/// mutation, elitism. Reproducible for a given seed.
ScalarResult genetic_maximize(const Objective& f, double lo, double hi, const GeneticOptions& options = {});

}  // namespace sofar::optimize
