// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <limits>

#include "sofar/optimize.hpp"

using namespace sofar::optimize;

TEST_CASE("golden section") {
  auto f = [](double x) { return -(x - 3.2) * (x - 3.2); };
  auto r = golden_section_maximize(f, 0.0, 10.0, {1e-6, 500});
  CHECK(r.x == doctest::Approx(3.2).epsilon(1e-5));
  auto edge = golden_section_maximize([](double x) { return x; }, 0.0, 10.0, {0.5, 200});
  CHECK(edge.x == 10.0);
  auto mn = golden_section_minimize([](double x) { return (x - 1.0) * (x - 1.0); }, -5.0, 5.0, {1e-6, 500});
  CHECK(mn.x == doctest::Approx(1.0).epsilon(1e-5));
  CHECK_FALSE(r.history.empty());
}

TEST_CASE("grid refine") {
  auto f = [](double x) { return std::cos(x) + 0.1 * x; };
  auto r = grid_refine_maximize(f, -1.0, 2.0, {1e-4, 200}, 21);
  CHECK(r.x == doctest::Approx(std::asin(0.1)).epsilon(1e-3));
}

TEST_CASE("infeasible points lose") {
  auto f = [](double x) { return x < 4.0 ? -std::numeric_limits<double>::infinity() : -x; };
  auto r = grid_refine_maximize(f, 0.0, 10.0, {1e-3, 200}, 21);
  CHECK(r.x == doctest::Approx(4.0).epsilon(1e-3));
}

TEST_CASE("genetic is seeded") {
  auto f = [](double x) { return std::sin(3 * x) - 0.1 * (x - 2) * (x - 2); };
  GeneticOptions o;
  o.seed = 42;
  auto a = genetic_maximize(f, -3.0, 5.0, o);
  auto b = genetic_maximize(f, -3.0, 5.0, o);
  CHECK(a.x == b.x);
  CHECK(a.history == b.history);
  double best = -1e9, arg = 0;
  for (double x = -3.0; x <= 5.0; x += 1e-4)
    if (f(x) > best) best = f(x), arg = x;
  CHECK(a.x == doctest::Approx(arg).epsilon(1e-2));
}

TEST_CASE("bad interval") {
  CHECK_THROWS(golden_section_maximize([](double x) { return x; }, 1.0, 0.0));
}
