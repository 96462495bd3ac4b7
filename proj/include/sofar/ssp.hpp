// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

namespace sofar::ssp {

enum class ProfileKind { Munk, Bilinear, LayeredLinear };

/// One linear-gradient layer: c(z) = c_top + gradient * (z - z_top).
struct Layer {
  double z_top = 0.0;
  double z_bottom = 0.0;
  double c_top = 0.0;
  double gradient = 0.0;  // 1/s

  double speed_at(double z) const { return c_top + gradient * (z - z_top); }
};

/// Depth-dependent sound speed c(z) on [0, z_max]. Immutable once built.
class SoundSpeedProfile {
public:
  ProfileKind kind() const { return kind_; }
  double z_max() const { return z_max_; }

  // Munk parameters (zero for layered kinds).
  double c0() const { return c0_; }
  double eps() const { return eps_; }
  double z_axis() const { return z_axis_; }
  double z_scale() const { return z_scale_; }

  const std::vector<Layer>& layers() const { return layers_; }

  /// Layer boundaries strictly inside (0, z_max).
  std::vector<double> interfaces() const;

  /// c(z). At a layer interface the upper layer's value is returned.
  double speed(double z) const;

  /// dc/dz. At a layer interface the lower layer's gradient is returned.
  double gradient(double z) const;

  /// One-sided limit of c at z approached from the side `toward`
  /// (+1: from greater depth, -1: from shallower depth). Equal to speed(z)
  /// for smooth profiles.
  double speed_from(double z, int toward) const;

  /// One-sided gradient, same convention as speed_from.
  double gradient_from(double z, int toward) const;

private:
  friend SoundSpeedProfile munk_profile(double, double, double, double, double);
  friend SoundSpeedProfile bilinear_profile();
  friend SoundSpeedProfile layered_profile(std::vector<Layer>);

  void check_depth(double z) const;
  const Layer& layer_for(double z, int toward) const;

  ProfileKind kind_ = ProfileKind::LayeredLinear;
  double z_max_ = 0.0;
  double c0_ = 0.0;
  double eps_ = 0.0;
  double z_axis_ = 0.0;
  double z_scale_ = 0.0;
  std::vector<Layer> layers_;
};

/// c(z) = c0 [1 + eps ((z - z_axis)/z_scale + exp(-(z - z_axis)/z_scale) - 1)].
SoundSpeedProfile munk_profile(double c0, double z_axis, double z_scale, double eps, double z_max);

/// Shallow-water profile: 1500 + 0.1883 z above 60 m, 1551.902 - 0.6817 z
/// below, 120 m deep. The 0.298 m/s jump at 60 m is kept as printed.
SoundSpeedProfile bilinear_profile();

/// Contiguous linear layers covering [0, z_max].
SoundSpeedProfile layered_profile(std::vector<Layer> layers);

/// Single zero-gradient layer.
SoundSpeedProfile constant_profile(double c, double z_max);

double sound_speed(const SoundSpeedProfile& profile, double z);
double gradient(const SoundSpeedProfile& profile, double z);

/// n(z) = c(z_ref) / c(z).
double refraction_index(const SoundSpeedProfile& profile, double z_ref, double z);

struct ChannelAxis {
  double depth = 0.0;
  double speed = 0.0;
  bool interior = false;  // false when the minimum sits on the surface or seabed
};

/// Depth of minimum sound speed. Throws NoAxis for monotone profiles.
ChannelAxis channel_axis_depth(const SoundSpeedProfile& profile, double tolerance = 0.01);

}  // namespace sofar::ssp
