// SPDX-License-Identifier: Apache-2.0
#include "sofar/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "sofar/error.hpp"

namespace sofar::quad {

namespace {

double gk(const std::function<double(double)>& g, double a, double b, const Options& options) {
  double err = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(g, a, b, options.max_depth,
                                                                       options.rel_tol, &err);
}

// Integral over [end, other] with the u^2 map anchored at `end`.
double mapped(const std::function<double(double)>& f, double end, double other, const Options& options) {
  const double len = other - end;
  auto g = [&](double u) { return f(end + len * u * u) * 2.0 * len * u; };
  return gk(g, 0.0, 1.0, options);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, bool singular_a, bool singular_b,
                 const Options& options) {
  if (!(std::isfinite(a) && std::isfinite(b))) throw Error(ErrorKind::InvalidArgument, "non-finite limits");
  if (a == b) return 0.0;
  if (singular_a && singular_b) {
    const double mid = 0.5 * (a + b);
    return mapped(f, a, mid, options) - mapped(f, b, mid, options);
  }
  if (singular_a) return mapped(f, a, b, options);
  if (singular_b) return -mapped(f, b, a, options);
  return gk(f, a, b, options);
}

}  // namespace sofar::quad
