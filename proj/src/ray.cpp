// SPDX-License-Identifier: Apache-2.0
#include "sofar/ray.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include "sofar/error.hpp"

namespace sofar::ray {

std::size_t RayPath::count(EventKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(events.begin(), events.end(), [kind](const RayEvent& e) { return e.kind == kind; }));
}

std::optional<RayEvent> RayPath::first(EventKind kind) const {
  for (const auto& e : events) {
    if (e.kind == kind) return e;
  }
  return std::nullopt;
}

void validate(const TraceConfig& cfg) {
  if (!(cfg.max_range > 0.0 && cfg.depth_step > 0.0 && cfg.max_arc_step > 0.0 && cfg.turn_tolerance > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "trace config: ranges and steps must be positive");
  }
  if (cfg.max_bounces < 0) throw Error(ErrorKind::InvalidArgument, "trace config: max_bounces must be >= 0");
  if (cfg.range_direction != 1 && cfg.range_direction != -1) {
    throw Error(ErrorKind::InvalidArgument, "trace config: range_direction must be +1 or -1");
  }
}

namespace {

constexpr double kNodeEps = 1e-9;

double sinc(double x) {
  if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

std::vector<double> slab_nodes(const ssp::SoundSpeedProfile& profile, double step) {
  const double zmax = profile.z_max();
  std::vector<double> nodes;
  const auto n = static_cast<std::size_t>(std::floor(zmax / step));
  nodes.reserve(n + 2);
  for (std::size_t i = 0; i <= n; ++i) nodes.push_back(static_cast<double>(i) * step);
  if (zmax - nodes.back() > kNodeEps) {
    nodes.push_back(zmax);
  } else {
    nodes.back() = zmax;
  }
  for (double zi : profile.interfaces()) nodes.push_back(zi);
  std::sort(nodes.begin(), nodes.end());
  std::vector<double> out;
  for (double z : nodes) {
    if (out.empty() || z - out.back() > kNodeEps) out.push_back(z);
  }
  return out;
}

// Next slab node strictly beyond z in the heading direction.
std::optional<double> next_node(const std::vector<double>& nodes, double z, int heading) {
  if (heading > 0) {
    auto it = std::upper_bound(nodes.begin(), nodes.end(), z + kNodeEps);
    if (it == nodes.end()) return std::nullopt;
    return *it;
  }
  auto it = std::lower_bound(nodes.begin(), nodes.end(), z - kNodeEps);
  if (it == nodes.begin()) return std::nullopt;
  return *std::prev(it);
}

class Tracer {
public:
  Tracer(const ssp::SoundSpeedProfile& profile, const TraceConfig& cfg)
      : profile_(profile), cfg_(cfg), nodes_(slab_nodes(profile, cfg.depth_step)) {}

  RayPath run(double source_depth, double theta0);

private:
  void emit(double r_local, double z, double theta, double s) {
    path_.states.push_back({cfg_.origin_range + cfg_.range_direction * r_local, z, theta, s});
  }

  void event(EventKind kind) { path_.events.push_back({kind, path_.states.size() - 1}); }

  // Exact arc from (z1, th1) to (z2, th2) with theta linear in arclength.
  // Returns false when the range limit cut the segment short.
  bool arc(double th1, double th2, double z2);

  // Horizontal ray at constant depth up to the range limit.
  void run_flat();

  // Heading a ray with theta == 0 should take; 0 when it is trapped at a
  // local minimum of c(z).
  int heading_from_rest() const;

  const ssp::SoundSpeedProfile& profile_;
  const TraceConfig& cfg_;
  std::vector<double> nodes_;
  RayPath path_;
  double a_ = 0.0;
  double r_ = 0.0;
  double z_ = 0.0;
  double s_ = 0.0;
};

bool Tracer::arc(double th1, double th2, double z2) {
  const double dz = z2 - z_;
  const double dth = th2 - th1;
  const double thm = 0.5 * (th1 + th2);
  const double sin_m = std::sin(thm);
  if (sin_m == 0.0 || dz == 0.0) {
    z_ = z2;
    return true;
  }
  const double k = sinc(0.5 * dth);
  const double ds = dz / (sin_m * k);
  const double dr = ds * std::cos(thm) * k;

  auto point = [&](double f) {
    const double h = 0.5 * f * dth;
    const double sub = f * ds;
    const double kk = sinc(h);
    return std::array<double, 3>{r_ + sub * std::cos(th1 + h) * kk, z_ + sub * std::sin(th1 + h) * kk,
                                 th1 + f * dth};
  };

  const double r_end = r_ + dr;
  const auto m = static_cast<long>(std::max(1.0, std::ceil(ds / cfg_.max_arc_step)));
  bool cut = r_end > cfg_.max_range;

  for (long i = 1; i <= m; ++i) {
    const double f = static_cast<double>(i) / m;
    auto p = point(f);
    if (cut && p[0] > cfg_.max_range) {
      double lo = static_cast<double>(i - 1) / m;
      double hi = f;
      for (int it = 0; it < 100 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        (point(mid)[0] > cfg_.max_range ? hi : lo) = mid;
      }
      auto q = point(lo);
      emit(q[0], q[1], q[2], s_ + lo * ds);
      r_ = q[0];
      z_ = q[1];
      s_ += lo * ds;
      return false;
    }
    if (i == m) {
      p = {r_end, z2, th2};
    }
    emit(p[0], p[1], p[2], s_ + f * ds);
  }
  r_ = r_end;
  z_ = z2;
  s_ += ds;
  return true;
}

void Tracer::run_flat() {
  const double remaining = cfg_.max_range - r_;
  if (remaining <= 0.0) return;
  const auto m = static_cast<long>(std::max(1.0, std::ceil(remaining / cfg_.max_arc_step)));
  for (long i = 1; i <= m; ++i) {
    const double f = static_cast<double>(i) / m;
    emit(r_ + f * remaining, z_, 0.0, s_ + f * remaining);
  }
  s_ += remaining;
  r_ = cfg_.max_range;
}

int Tracer::heading_from_rest() const {
  auto drops = [&](int heading) {
    const auto zn = next_node(nodes_, z_, heading);
    if (!zn) return false;
    return profile_.speed_from(*zn, -heading) < profile_.speed_from(z_, heading);
  };
  if (drops(+1)) return +1;
  if (drops(-1)) return -1;
  return 0;
}

RayPath Tracer::run(double source_depth, double theta0) {
  path_ = RayPath{};
  z_ = source_depth;
  r_ = 0.0;
  s_ = 0.0;

  int heading = theta0 > 0.0 ? +1 : (theta0 < 0.0 ? -1 : 0);
  const double c_src = heading != 0 ? profile_.speed_from(z_, heading) : profile_.speed(z_);
  a_ = std::cos(theta0) / c_src;
  path_.snell_const = a_;
  emit(0.0, z_, theta0, 0.0);

  const double zmax = profile_.z_max();
  int bounces = 0;
  bool just_turned = false;

  // Starting on a boundary while heading out of the water reflects at once.
  if (z_ <= 0.0 && heading < 0) {
    heading = +1;
    path_.states.back().theta = -theta0;
    event(EventKind::SurfaceReflect);
    ++bounces;
  } else if (z_ >= zmax && heading > 0) {
    if (cfg_.bottom_absorbs) {
      event(EventKind::Absorbed);
      return std::move(path_);
    }
    heading = -1;
    path_.states.back().theta = -theta0;
    event(EventKind::BottomReflect);
    ++bounces;
  }

  for (long guard = 0; guard < 50'000'000; ++guard) {
    if (r_ >= cfg_.max_range) break;
    if (heading == 0) {
      heading = heading_from_rest();
      if (heading == 0) {
        run_flat();
        break;
      }
    }

    const auto zn_opt = next_node(nodes_, z_, heading);
    if (!zn_opt) {
      // On the boundary the ray is leaving: only reachable with theta == 0.
      heading = -heading;
      continue;
    }
    const double zn = *zn_opt;
    const double cos_here = a_ * profile_.speed_from(z_, heading);
    const double cos_next = a_ * profile_.speed_from(zn, -heading);
    const double th_here = heading * std::acos(std::min(1.0, cos_here));

    if (cos_next < 1.0) {
      const double th_next = heading * std::acos(cos_next);
      just_turned = false;
      if (!arc(th_here, th_next, zn)) break;

      if (zn <= 0.0 && heading < 0) {
        path_.states.back().theta = -th_next;
        event(EventKind::SurfaceReflect);
        heading = +1;
        if (++bounces > cfg_.max_bounces) break;
      } else if (zn >= zmax && heading > 0) {
        if (cfg_.bottom_absorbs) {
          event(EventKind::Absorbed);
          break;
        }
        path_.states.back().theta = -th_next;
        event(EventKind::BottomReflect);
        heading = -1;
        if (++bounces > cfg_.max_bounces) break;
      }
      continue;
    }

    // Turning point inside (z_, zn].
    if (cos_here >= 1.0 - 1e-15) {
      if (just_turned) {
        // Cannot move either way: trapped on a speed minimum.
        run_flat();
        break;
      }
      just_turned = true;
      event(heading > 0 ? EventKind::TurnUp : EventKind::TurnDown);
      heading = -heading;
      continue;
    }
    double lo = z_;
    double hi = zn;
    auto excess = [&](double z) {
      return a_ * (z == zn ? profile_.speed_from(zn, -heading) : profile_.speed(z)) - 1.0;
    };
    while (std::abs(hi - lo) > cfg_.turn_tolerance) {
      const double mid = 0.5 * (lo + hi);
      (excess(mid) >= 0.0 ? hi : lo) = mid;
    }
    const double z_turn = 0.5 * (lo + hi);
    if (!arc(th_here, 0.0, z_turn)) break;
    path_.states.back().theta = 0.0;
    event(heading > 0 ? EventKind::TurnUp : EventKind::TurnDown);
    heading = -heading;
    just_turned = true;
  }
  return std::move(path_);
}

}  // namespace

RayPath trace_ray(const ssp::SoundSpeedProfile& profile, double source_depth, double theta0,
                  const TraceConfig& cfg) {
  validate(cfg);
  if (!(source_depth >= 0.0 && source_depth <= profile.z_max())) {
    throw Error(ErrorKind::Domain, "source depth outside the water column");
  }
  if (!(std::abs(theta0) < std::numbers::pi / 2)) {
    throw Error(ErrorKind::InvalidArgument, "launch angle must satisfy |theta0| < pi/2");
  }
  Tracer tracer(profile, cfg);
  return tracer.run(source_depth, theta0);
}

double snell_deviation(const ssp::SoundSpeedProfile& profile, const RayPath& path) {
  const double a = path.snell_const;
  if (path.states.empty()) throw Error(ErrorKind::InvalidArgument, "empty ray path");
  double worst = 0.0;
  for (const auto& st : path.states) {
    const int toward = st.theta > 0.0 ? +1 : (st.theta < 0.0 ? -1 : 0);
    const double c = toward == 0 ? profile.speed(st.z) : profile.speed_from(st.z, toward);
    worst = std::max(worst, std::abs(std::cos(st.theta) / c - a) / a);
  }
  return worst;
}

double horizontal_span(const ssp::SoundSpeedProfile& profile, double z_from, double z_to, double theta0,
                       double z_ref, const quad::Options& options) {
  const double cos0 = std::cos(theta0);
  if (cos0 <= 1e-15 || z_from == z_to) return 0.0;

  const double c_ref = profile.speed(z_ref);
  const double a = cos0 / c_ref;
  double lo = std::min(z_from, z_to);
  double hi = std::max(z_from, z_to);
  profile.speed(lo);
  profile.speed(hi);

  // 1 - a c(z); a turning point is where this vanishes.
  auto gap = [&](double z, int toward) { return 1.0 - a * profile.speed_from(z, toward); };

  const int probes = 512;
  for (int i = 1; i < probes; ++i) {
    const double z = lo + (hi - lo) * i / probes;
    if (gap(z, +1) < -1e-12 || gap(z, -1) < -1e-12) {
      std::ostringstream msg;
      msg << "ray with cos(theta0)=" << cos0 << " turns before reaching depth " << z << " m";
      throw Error(ErrorKind::NoPath, msg.str());
    }
  }

  // Pull an end that overshoots the turning depth back onto it.
  const double slack = 1e-2 + 1e-6 * (hi - lo);
  auto settle = [&](double end, double inner, int toward) {
    if (gap(end, toward) >= 0.0) return end;
    double bad = end;
    double good = inner;
    for (int it = 0; it < 200 && std::abs(bad - good) > 1e-12 * std::max(1.0, std::abs(end)); ++it) {
      const double mid = 0.5 * (bad + good);
      (gap(mid, toward) < 0.0 ? bad : good) = mid;
    }
    if (std::abs(good - end) > slack) {
      throw Error(ErrorKind::NoPath, "interval end lies beyond the ray's turning depth");
    }
    return good;
  };
  const double first_probe = lo + (hi - lo) / probes;
  const double last_probe = hi - (hi - lo) / probes;
  lo = settle(lo, first_probe, +1);
  hi = settle(hi, last_probe, -1);

  auto integrand = [&](double z) {
    const double ac = a * profile.speed(z);
    const double q = (1.0 - ac) * (1.0 + ac);
    if (q <= 0.0) return 0.0;
    return ac / std::sqrt(q);
  };

  std::vector<double> cuts{lo};
  for (double zi : profile.interfaces()) {
    if (zi > lo && zi < hi) cuts.push_back(zi);
  }
  cuts.push_back(hi);

  const double singular_gap = 1e-9;
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double za = cuts[i];
    const double zb = cuts[i + 1];
    const bool sa = gap(za, +1) < singular_gap;
    const bool sb = gap(zb, -1) < singular_gap;
    total += quad::integrate(integrand, za, zb, sa, sb, options);
  }
  return total;
}

std::vector<RayPath> trace_fan_serial(const ssp::SoundSpeedProfile& profile, double source_depth,
                                      std::span<const double> angles, const TraceConfig& cfg) {
  std::vector<RayPath> out;
  out.reserve(angles.size());
  for (double th : angles) out.push_back(trace_ray(profile, source_depth, th, cfg));
  return out;
}

std::vector<RayPath> trace_fan(const ssp::SoundSpeedProfile& profile, double source_depth,
                               std::span<const double> angles, const TraceConfig& cfg, Parallelism par) {
  validate(cfg);
  const auto n = static_cast<long>(angles.size());
  std::vector<RayPath> out(angles.size());
  std::vector<std::string> errors(angles.size());
  std::vector<int> error_kind(angles.size(), -1);

#pragma omp parallel for schedule(dynamic, 1) num_threads(par.resolve())
  for (long i = 0; i < n; ++i) {
    try {
      out[i] = trace_ray(profile, source_depth, angles[i], cfg);
    } catch (const Error& e) {
      errors[i] = e.what();
      error_kind[i] = static_cast<int>(e.kind());
    }
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (error_kind[i] >= 0) throw Error(static_cast<ErrorKind>(error_kind[i]), errors[i]);
  }
  return out;
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  return out;
}

std::optional<double> first_range_at_depth(const RayPath& path, double z) {
  const auto& st = path.states;
  for (std::size_t i = 0; i < st.size(); ++i) {
    if (st[i].z == z) return st[i].r;
    if (i > 0 && (st[i - 1].z - z) * (st[i].z - z) < 0.0) {
      const double f = (z - st[i - 1].z) / (st[i].z - st[i - 1].z);
      return st[i - 1].r + f * (st[i].r - st[i - 1].r);
    }
  }
  return std::nullopt;
}

void write_csv(std::ostream& out, const RayPath& path) {
  out << "s_m,r_m,z_m,theta_rad\n";
  char buf[128];
  for (const auto& st : path.states) {
    std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g,%.9g\n", st.s, st.r, st.z, st.theta);
    out << buf;
  }
}

std::vector<RayState> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "s_m,r_m,z_m,theta_rad") {
    throw Error(ErrorKind::Parse, "ray CSV: missing header");
  }
  std::vector<RayState> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    RayState st;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &st.s, &st.r, &st.z, &st.theta) != 4) {
      throw Error(ErrorKind::Parse, "ray CSV: malformed line " + std::to_string(lineno));
    }
    out.push_back(st);
  }
  return out;
}

}  // namespace sofar::ray
