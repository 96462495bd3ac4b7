// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>

namespace sofar::quad {

struct Options {
  double rel_tol = 1e-8;
  unsigned max_depth = 25;
};

/// Adaptive Gauss-Kronrod (15-point) integral of f over [a, b].
///
/// When `singular_a` / `singular_b` is set, f may blow up like
/// 1/sqrt(|z - end|) at that end. The interval is then mapped through
/// z = end + (mid - end) u^2, which turns the integrable singularity into a
/// bounded integrand before the quadrature sees it.
double integrate(const std::function<double(double)>& f, double a, double b, bool singular_a = false,
                 bool singular_b = false, const Options& options = {});

}  // namespace sofar::quad
