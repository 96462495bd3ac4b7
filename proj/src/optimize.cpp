// SPDX-License-Identifier: Apache-2.0
#include "sofar/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "sofar/error.hpp"

namespace sofar::optimize {

namespace {

void check_interval(double lo, double hi) {
  if (!(std::isfinite(lo) && std::isfinite(hi)) || !(lo < hi)) {
    throw Error(ErrorKind::InvalidArgument, "optimizer interval must satisfy lo < hi");
  }
}

double safe_eval(const Objective& f, double x) {
  const double v = f(x);
  return std::isnan(v) ? -std::numeric_limits<double>::infinity() : v;
}

}  // namespace

ScalarResult golden_section_maximize(const Objective& f, double lo, double hi, Termination term) {
  check_interval(lo, hi);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;

  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = safe_eval(f, c);
  double fd = safe_eval(f, d);

  ScalarResult out;
  out.x = fc >= fd ? c : d;
  out.value = std::max(fc, fd);

  while (b - a > term.tolerance && out.iterations < term.max_iterations) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = safe_eval(f, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = safe_eval(f, d);
    }
    ++out.iterations;
    if (fc > out.value) {
      out.value = fc;
      out.x = c;
    }
    if (fd > out.value) {
      out.value = fd;
      out.x = d;
    }
    out.history.push_back(out.value);
  }

  for (double x : {a, b, 0.5 * (a + b)}) {
    const double v = safe_eval(f, x);
    if (v > out.value) {
      out.value = v;
      out.x = x;
    }
  }
  return out;
}

ScalarResult golden_section_minimize(const Objective& f, double lo, double hi, Termination term) {
  auto neg = [&f](double x) { return -f(x); };
  ScalarResult r = golden_section_maximize(neg, lo, hi, term);
  r.value = -r.value;
  for (double& h : r.history) h = -h;
  return r;
}

ScalarResult grid_refine_maximize(const Objective& f, double lo, double hi, Termination term,
                                  int grid_points) {
  check_interval(lo, hi);
  if (grid_points < 3) throw Error(ErrorKind::InvalidArgument, "grid_refine needs at least 3 points");

  ScalarResult out;
  out.value = -std::numeric_limits<double>::infinity();
  out.x = lo;
  double a = lo;
  double b = hi;
  while (out.iterations < term.max_iterations) {
    const double step = (b - a) / (grid_points - 1);
    int best = 0;
    double best_v = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid_points; ++i) {
      const double x = (i == grid_points - 1) ? b : a + i * step;
      const double v = safe_eval(f, x);
      if (v > best_v) {
        best_v = v;
        best = i;
      }
    }
    const double xb = (best == grid_points - 1) ? b : a + best * step;
    if (best_v > out.value) {
      out.value = best_v;
      out.x = xb;
    }
    ++out.iterations;
    out.history.push_back(out.value);
    if (step < term.tolerance) break;
    const double na = std::max(lo, xb - step);
    const double nb = std::min(hi, xb + step);
    a = na;
    b = nb;
  }
  return out;
}

ScalarResult genetic_maximize(const Objective& f, double lo, double hi, const GeneticOptions& options) {
  check_interval(lo, hi);
  if (options.population < 4 || options.generations < 1) {
    throw Error(ErrorKind::InvalidArgument, "genetic optimizer needs population >= 4 and generations >= 1");
  }
  const int n = options.population;
  const int elites = std::clamp(options.elites, 0, n - 1);
  const double span = hi - lo;

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  struct Individual {
    double x;
    double fitness;
  };
  std::vector<Individual> pop(n);
  for (int i = 0; i < n; ++i) {
    // Stratified initial sample, jittered inside each stratum.
    const double x = lo + span * (i + unit(rng)) / n;
    pop[i] = {x, safe_eval(f, x)};
  }
  auto by_fitness = [](const Individual& l, const Individual& r) { return l.fitness > r.fitness; };

  auto tournament = [&]() -> const Individual& {
    const auto& p = pop[static_cast<std::size_t>(unit(rng) * n) % n];
    const auto& q = pop[static_cast<std::size_t>(unit(rng) * n) % n];
    return p.fitness >= q.fitness ? p : q;
  };

  ScalarResult out;
  for (int g = 0; g < options.generations; ++g) {
    std::stable_sort(pop.begin(), pop.end(), by_fitness);
    const double sigma = span * (0.1 * (1.0 - static_cast<double>(g) / options.generations) + 1e-4);

    std::vector<Individual> next(pop.begin(), pop.begin() + elites);
    while (static_cast<int>(next.size()) < n) {
      const Individual& p1 = tournament();
      const Individual& p2 = tournament();
      double child = p1.x;
      if (unit(rng) < options.crossover_rate) {
        const double cmin = std::min(p1.x, p2.x);
        const double cmax = std::max(p1.x, p2.x);
        const double ext = 0.5 * (cmax - cmin);
        child = cmin - ext + unit(rng) * (cmax - cmin + 2.0 * ext);
      }
      if (unit(rng) < options.mutation_rate) child += sigma * gauss(rng);
      child = std::clamp(child, lo, hi);
      next.push_back({child, safe_eval(f, child)});
    }
    pop = std::move(next);

    const auto best = std::max_element(pop.begin(), pop.end(),
                                       [](const Individual& l, const Individual& r) { return l.fitness < r.fitness; });
    out.x = best->x;
    out.value = best->fitness;
    out.history.push_back(out.value);
    ++out.iterations;
  }
  return out;
}

}  // namespace sofar::optimize
