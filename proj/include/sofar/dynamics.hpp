// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "sofar/parallel.hpp"
#include "sofar/ris.hpp"

namespace sofar::dynamics {

enum class Generator { GaussianWalk, Sinusoid, Constant };

std::string to_string(Generator g);
Generator generator_from_string(const std::string& s);

/// One pose channel. For GaussianWalk `scale` is the per-step innovation
/// std, for Sinusoid the amplitude, for Constant the value. Samples are
/// clipped to [-cap, cap].
struct ChannelSpec {
  double scale = 0.0;
  double cap = std::numeric_limits<double>::infinity();
  double period = 10.0;  // s, Sinusoid only
  double phase = 0.0;    // rad, Sinusoid only
};

struct TrajectorySpec {
  Generator generator = Generator::GaussianWalk;
  std::size_t steps = 100;
  double dt = 0.1;  // s
  ChannelSpec dz;    // m
  ChannelSpec dx;    // m
  ChannelSpec beta;  // rad
  std::uint64_t seed = 1;
};

struct PoseTrajectory {
  std::vector<double> t;     // s, t[k] = (k + 1) dt
  std::vector<double> dz;    // m
  std::vector<double> dx;    // m
  std::vector<double> beta;  // rad
  Generator generator = Generator::GaussianWalk;
  std::uint64_t seed = 0;
  double dt = 0.0;
};

PoseTrajectory make_trajectory(const TrajectorySpec& spec);

/// Angular rate whose rectangle-rule integral reproduces beta exactly,
/// starting from beta = 0 before the first sample.
std::vector<double> angular_rate(const PoseTrajectory& traj);

struct GyroModel {
  double alpha = 0.0;      // scale error
  double bias = 0.0;       // rad/s
  double noise_std = 0.0;  // rad/s per step
  std::uint64_t seed = 1;
};

/// beta_meas[k] = sum_{i<=k} ((1 + alpha) omega_i + b + n_i) dt.
std::vector<double> gyro_integrate(std::span<const double> true_omega, double dt, const GyroModel& model);

enum class Axis { Vertical, Horizontal };

/// Vertical: k dz cos(theta). Horizontal: k dx sin(theta).
double displacement_phase_dev(double k, double delta, double theta, Axis axis);

/// (n - 1) k d (sin(theta + beta) - sin(alpha_out - beta)).
double rotation_phase_comp(std::size_t n, double k, double d, double theta, double alpha_out, double beta);

struct RotationBudget {
  double scale = 0.0;  // alpha * beta
  double bias = 0.0;   // b * t
  double noise = 0.0;  // noise_std * sqrt(t * dt_ref)
  double total = 0.0;
};

/// Worst-case rotation error; all angles in degrees, rates in deg/s.
RotationBudget rotation_error_budget(double alpha, double bias, double noise_std, double beta, double t,
                                     double dt_ref = 1.0);

/// sin(x + dbeta) - (sin(x) + dbeta cos(x)), x = theta + beta.
double small_angle_residual(double theta, double beta, double dbeta);

struct CorrectionOptions {
  bool skip_sub_spacing = true;  // leave displacements below d uncompensated
  double pose_noise_std = 0.0;   // m, measurement noise on dz and dx
  std::uint64_t pose_seed = 7;
  double c_local = 1500.0;  // m/s
};

struct DynamicsTrace {
  std::vector<double> t;
  std::vector<double> true_dz, true_dx, true_beta;
  std::vector<double> meas_dz, meas_dx, meas_beta;
  std::vector<double> dphi_uncorrected;
  std::vector<double> dphi_corrected;
  double rmse_uncorrected = 0.0;
  double rmse_corrected = 0.0;

  /// 100 (1 - corrected / uncorrected); 0 when nothing deviates.
  double reduction_percent() const;
};

/// Phase deviation at the last element along the steering axis. The
/// nominal profile assumes zero pose; correction re-applies the
/// displacement and rotation terms with the measured pose.
DynamicsTrace simulate_correction(const PoseTrajectory& traj, const GyroModel& gyro, const ris::RisArray& array,
                                  double theta, double alpha_out, const CorrectionOptions& options = {});

struct EnsembleSummary {
  std::vector<double> reductions;  // percent, one per trial
  double mean_reduction = 0.0;
  double std_reduction = 0.0;
  double mean_rmse_uncorrected = 0.0;
  double mean_rmse_corrected = 0.0;
};

/// Trial i reseeds the trajectory, gyro and pose noise from first_seed + i.
EnsembleSummary run_ensemble(const TrajectorySpec& traj, const GyroModel& gyro, const ris::RisArray& array,
                             double theta, double alpha_out, const CorrectionOptions& options, std::size_t trials,
                             std::uint64_t first_seed, Parallelism par = {});
EnsembleSummary run_ensemble_serial(const TrajectorySpec& traj, const GyroModel& gyro, const ris::RisArray& array,
                                    double theta, double alpha_out, const CorrectionOptions& options,
                                    std::size_t trials, std::uint64_t first_seed);

/// CSV `t_s,dphi_uncorrected_rad,dphi_corrected_rad`.
void write_csv(std::ostream& out, const DynamicsTrace& trace);
DynamicsTrace read_csv(std::istream& in);

nlohmann::json summary_json(const DynamicsTrace& trace);
nlohmann::json to_json(const EnsembleSummary& s);

}  // namespace sofar::dynamics
