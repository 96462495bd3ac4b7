// SPDX-License-Identifier: Apache-2.0
#include "sofar/ssp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sofar/error.hpp"
#include "sofar/optimize.hpp"

namespace sofar::ssp {

namespace {

constexpr double kDepthSlack = 1e-9;  // m; absorbs round-off at the surface and seabed
constexpr double kJoinTolerance = 1e-9;

}  // namespace

std::vector<double> SoundSpeedProfile::interfaces() const {
  std::vector<double> out;
  for (std::size_t i = 1; i < layers_.size(); ++i) out.push_back(layers_[i].z_top);
  return out;
}

void SoundSpeedProfile::check_depth(double z) const {
  if (!(z >= -kDepthSlack && z <= z_max_ + kDepthSlack)) {
    std::ostringstream msg;
    msg << "depth " << z << " m outside [0, " << z_max_ << "] m";
    throw Error(ErrorKind::Domain, msg.str());
  }
}

const Layer& SoundSpeedProfile::layer_for(double z, int toward) const {
  // toward < 0: prefer the layer above an interface; toward > 0: the one below.
  if (toward > 0) {
    for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) {
      if (z >= it->z_top) return *it;
    }
    return layers_.front();
  }
  for (const auto& layer : layers_) {
    if (z <= layer.z_bottom) return layer;
  }
  return layers_.back();
}

double SoundSpeedProfile::speed(double z) const {
  check_depth(z);
  if (kind_ == ProfileKind::Munk) {
    const double eta = (z - z_axis_) / z_scale_;
    return c0_ * (1.0 + eps_ * (eta + std::exp(-eta) - 1.0));
  }
  return layer_for(z, -1).speed_at(z);
}

double SoundSpeedProfile::gradient(double z) const {
  check_depth(z);
  if (kind_ == ProfileKind::Munk) {
    const double eta = (z - z_axis_) / z_scale_;
    return c0_ * eps_ / z_scale_ * (1.0 - std::exp(-eta));
  }
  return layer_for(z, +1).gradient;
}

double SoundSpeedProfile::speed_from(double z, int toward) const {
  if (kind_ == ProfileKind::Munk) return speed(z);
  check_depth(z);
  return layer_for(z, toward).speed_at(z);
}

double SoundSpeedProfile::gradient_from(double z, int toward) const {
  if (kind_ == ProfileKind::Munk) return gradient(z);
  check_depth(z);
  return layer_for(z, toward).gradient;
}

SoundSpeedProfile munk_profile(double c0, double z_axis, double z_scale, double eps, double z_max) {
  if (!(c0 > 0.0 && z_axis > 0.0 && z_scale > 0.0 && eps > 0.0 && z_max > 0.0)) {
    throw Error(ErrorKind::InvalidProfile, "Munk parameters must all be positive");
  }
  if (!(z_axis < z_max)) throw Error(ErrorKind::InvalidProfile, "Munk axis must lie above the seabed");
  SoundSpeedProfile p;
  p.kind_ = ProfileKind::Munk;
  p.c0_ = c0;
  p.z_axis_ = z_axis;
  p.z_scale_ = z_scale;
  p.eps_ = eps;
  p.z_max_ = z_max;
  return p;
}

SoundSpeedProfile layered_profile(std::vector<Layer> layers) {
  if (layers.empty()) throw Error(ErrorKind::InvalidProfile, "layered profile needs at least one layer");
  if (std::abs(layers.front().z_top) > kJoinTolerance) {
    throw Error(ErrorKind::InvalidProfile, "first layer must start at the surface");
  }
  layers.front().z_top = 0.0;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const Layer& l = layers[i];
    if (!(l.z_bottom > l.z_top)) throw Error(ErrorKind::InvalidProfile, "layer thickness must be positive");
    if (!std::isfinite(l.gradient) || !std::isfinite(l.c_top)) {
      throw Error(ErrorKind::InvalidProfile, "layer speed and gradient must be finite");
    }
    if (!(l.speed_at(l.z_top) > 0.0 && l.speed_at(l.z_bottom) > 0.0)) {
      throw Error(ErrorKind::InvalidProfile, "sound speed must stay positive");
    }
    if (i > 0) {
      if (std::abs(layers[i - 1].z_bottom - l.z_top) > kJoinTolerance) {
        throw Error(ErrorKind::InvalidProfile, "layers must be contiguous and non-overlapping");
      }
      layers[i].z_top = layers[i - 1].z_bottom;
    }
  }
  SoundSpeedProfile p;
  p.kind_ = ProfileKind::LayeredLinear;
  p.z_max_ = layers.back().z_bottom;
  p.layers_ = std::move(layers);
  return p;
}

SoundSpeedProfile bilinear_profile() {
  // Lower branch written in layer form: c_top = 1551.902 - 0.6817 * 60.
  SoundSpeedProfile p = layered_profile({
      {0.0, 60.0, 1500.0, 0.1883},
      {60.0, 120.0, 1551.902 - 0.6817 * 60.0, -0.6817},
  });
  p.kind_ = ProfileKind::Bilinear;
  return p;
}

SoundSpeedProfile constant_profile(double c, double z_max) {
  return layered_profile({{0.0, z_max, c, 0.0}});
}

double sound_speed(const SoundSpeedProfile& profile, double z) { return profile.speed(z); }

double gradient(const SoundSpeedProfile& profile, double z) { return profile.gradient(z); }

double refraction_index(const SoundSpeedProfile& profile, double z_ref, double z) {
  return profile.speed(z_ref) / profile.speed(z);
}

ChannelAxis channel_axis_depth(const SoundSpeedProfile& profile, double tolerance) {
  const double zmax = profile.z_max();
  const int n = static_cast<int>(std::clamp(zmax, 1000.0, 20000.0));
  std::vector<double> c(n + 1);
  for (int i = 0; i <= n; ++i) c[i] = profile.speed(zmax * i / n);

  bool nondecreasing = true;
  bool nonincreasing = true;
  for (int i = 1; i <= n; ++i) {
    if (c[i] < c[i - 1]) nondecreasing = false;
    if (c[i] > c[i - 1]) nonincreasing = false;
  }
  if (nondecreasing || nonincreasing) {
    throw Error(ErrorKind::NoAxis, "sound speed is monotone in depth; no minimum to bracket");
  }

  const auto best = std::min_element(c.begin(), c.end()) - c.begin();
  if (best == 0 || best == n) {
    const double z = best == 0 ? 0.0 : zmax;
    return {z, profile.speed(z), false};
  }

  const double lo = zmax * (best - 1) / n;
  const double hi = zmax * (best + 1) / n;
  auto r = optimize::golden_section_minimize([&](double z) { return profile.speed(z); }, lo, hi,
                                             {tolerance, 500});
  return {r.x, r.value, true};
}

}  // namespace sofar::ssp
