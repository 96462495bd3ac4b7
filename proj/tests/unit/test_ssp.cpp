// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <random>

#include "sofar/error.hpp"
#include "sofar/ssp.hpp"
#include "support.hpp"

using namespace sofar;
using sofar::test::munk;

namespace {

// Independent long-double evaluation of the canonical profile.
long double munk_ref(long double z) {
  const long double x = (z - 2100.0L) / 1300.0L;
  return 1500.0L * (1.0L + 0.00737L * (x + std::exp(-x) - 1.0L));
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::Parse;
}

}  // namespace

TEST_CASE("munk values") {
  auto p = munk();
  CHECK(p.speed(2100.0) == 1500.0);
  CHECK(p.speed(0.0) == doctest::Approx(1526.69).epsilon(1e-5));
  CHECK(test::rel_err(p.speed(0.0), static_cast<double>(munk_ref(0.0L))) < 1e-13);
  CHECK(std::abs(p.gradient(2100.0)) < 1e-15);
  for (double z : {0.0, 333.0, 1800.0, 2500.0, 4000.0})
    CHECK(test::rel_err(p.speed(z), static_cast<double>(munk_ref(z))) < 1e-13);
}

TEST_CASE("bilinear values") {
  auto p = ssp::bilinear_profile();
  CHECK(p.speed(0.0) == doctest::Approx(1500.0).epsilon(1e-15));
  CHECK(p.speed(120.0) == doctest::Approx(1551.902 - 0.6817 * 120.0).epsilon(1e-14));
  CHECK(p.speed(120.0) == doctest::Approx(1470.098).epsilon(1e-12));
  CHECK(p.speed_from(60.0, -1) == doctest::Approx(1511.298).epsilon(1e-12));
  CHECK(p.speed_from(60.0, +1) == doctest::Approx(1511.000).epsilon(1e-12));
  CHECK(p.speed(60.0) == doctest::Approx(1511.298).epsilon(1e-12));
  CHECK(p.gradient(30.0) == doctest::Approx(0.1883));
  CHECK(p.gradient(90.0) == doctest::Approx(-0.6817));
  CHECK(p.gradient(60.0) == doctest::Approx(-0.6817));
  CHECK(p.interfaces().size() == 1);
}

TEST_CASE("layered zero gradient") {
  auto p = ssp::layered_profile({{0.0, 50.0, 1500.0, 0.0}, {50.0, 100.0, 1500.0, 0.05}});
  CHECK(p.speed(25.0) == 1500.0);
  CHECK(p.speed(100.0) == doctest::Approx(1502.5));
}

TEST_CASE("depth outside the column") {
  auto p = munk();
  CHECK(kind_of([&] { (void)p.speed(-1.0); }) == ErrorKind::Domain);
  CHECK(kind_of([&] { (void)p.speed(4000.5); }) == ErrorKind::Domain);
  CHECK(kind_of([&] { (void)p.gradient(5000.0); }) == ErrorKind::Domain);
}

TEST_CASE("invalid profiles") {
  CHECK(kind_of([] { ssp::munk_profile(-1500.0, 2100.0, 1300.0, 0.00737, 4000.0); }) == ErrorKind::InvalidProfile);
  CHECK(kind_of([] { ssp::munk_profile(1500.0, 2100.0, 0.0, 0.00737, 4000.0); }) == ErrorKind::InvalidProfile);
  CHECK(kind_of([] { ssp::munk_profile(1500.0, 2100.0, 1300.0, 0.00737, -1.0); }) == ErrorKind::InvalidProfile);
  CHECK(kind_of([] { ssp::layered_profile({{0.0, 50.0, 1500.0, 0.0}, {60.0, 100.0, 1500.0, 0.0}}); }) ==
        ErrorKind::InvalidProfile);
  CHECK(kind_of([] { ssp::layered_profile({}); }) == ErrorKind::InvalidProfile);
  CHECK(kind_of([] { ssp::constant_profile(0.0, 10.0); }) == ErrorKind::InvalidProfile);
}

TEST_CASE("refraction index") {
  auto m = munk();
  auto b = ssp::bilinear_profile();
  CHECK(ssp::refraction_index(m, 700.0, 700.0) == 1.0);
  CHECK(ssp::refraction_index(m, 2100.0, 0.0) == doctest::Approx(0.98252).epsilon(1e-5));
  CHECK(ssp::refraction_index(b, 0.0, 120.0) == doctest::Approx(1.02034).epsilon(1e-5));
}

TEST_CASE("refraction index reciprocity") {
  auto m = munk();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> z(0.0, 4000.0);
  for (int i = 0; i < 500; ++i) {
    double a = z(rng), c = z(rng);
    CHECK(std::abs(ssp::refraction_index(m, a, c) * ssp::refraction_index(m, c, a) - 1.0) < 1e-12);
  }
}

TEST_CASE("channel axis") {
  auto a = ssp::channel_axis_depth(munk());
  CHECK(std::abs(a.depth - 2100.0) <= 0.01);
  CHECK(a.interior);
  auto b = ssp::channel_axis_depth(ssp::bilinear_profile());
  CHECK(b.depth == doctest::Approx(120.0).epsilon(1e-6));
  CHECK_FALSE(b.interior);
  CHECK(kind_of([] { ssp::channel_axis_depth(ssp::constant_profile(1500.0, 100.0)); }) == ErrorKind::NoAxis);
}

TEST_CASE("munk lower bound on a 1 m sweep") {
  auto p = munk();
  for (int z = 0; z <= 4000; ++z) {
    if (z == 2100)
      CHECK(p.speed(z) == 1500.0);
    else
      CHECK(p.speed(z) > 1500.0);
  }
}

TEST_CASE("gradient against central differences") {
  const double h = 1e-3;
  auto m = munk();
  // Near the axis the gradient vanishes, so scale by the profile's natural slope c0 eps / z_scale.
  const double scale = 1500.0 * 0.00737 / 1300.0;
  for (double z = 1.0; z < 3999.0; z += 7.3) {
    double fd = (m.speed(z + h) - m.speed(z - h)) / (2 * h);
    CHECK(std::abs(fd - m.gradient(z)) <= 1e-6 * std::max(std::abs(m.gradient(z)), scale));
  }
  auto b = ssp::bilinear_profile();
  for (double z = 1.0; z < 119.0; z += 0.7) {
    if (std::abs(z - 60.0) < 2 * h) continue;
    double fd = (b.speed(z + h) - b.speed(z - h)) / (2 * h);
    CHECK(test::rel_err(fd, b.gradient(z)) < 1e-6);
  }
}
