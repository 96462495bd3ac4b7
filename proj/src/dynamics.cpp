// SPDX-License-Identifier: Apache-2.0
#include "sofar/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <optional>
#include <random>
#include <sstream>

#include "sofar/error.hpp"

namespace sofar::dynamics {

namespace {

std::mt19937_64 stream(std::uint64_t seed, std::uint32_t channel) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), channel};
  return std::mt19937_64(seq);
}

std::vector<double> make_channel(Generator g, const ChannelSpec& c, std::size_t steps, double dt, std::uint64_t seed,
                                 std::uint32_t channel) {
  if (!(c.cap >= 0.0)) throw Error(ErrorKind::InvalidArgument, "channel cap must be >= 0");
  std::vector<double> out(steps);
  switch (g) {
    case Generator::Constant:
      std::fill(out.begin(), out.end(), std::clamp(c.scale, -c.cap, c.cap));
      break;
    case Generator::Sinusoid: {
      if (!(c.period > 0.0)) throw Error(ErrorKind::InvalidArgument, "sinusoid period must be positive");
      const double w = 2.0 * std::numbers::pi / c.period;
      for (std::size_t k = 0; k < steps; ++k) {
        const double t = static_cast<double>(k + 1) * dt;
        out[k] = std::clamp(c.scale * std::sin(w * t + c.phase), -c.cap, c.cap);
      }
      break;
    }
    case Generator::GaussianWalk: {
      if (!(c.scale >= 0.0)) throw Error(ErrorKind::InvalidArgument, "walk innovation std must be >= 0");
      auto rng = stream(seed, channel);
      std::normal_distribution<double> step(0.0, 1.0);
      double x = 0.0;
      for (std::size_t k = 0; k < steps; ++k) {
        x = std::clamp(x + c.scale * step(rng), -c.cap, c.cap);
        out[k] = x;
      }
      break;
    }
  }
  return out;
}

double rmse(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s / static_cast<double>(v.size()));
}

}  // namespace

std::string to_string(Generator g) {
  switch (g) {
    case Generator::GaussianWalk: return "gaussian_walk";
    case Generator::Sinusoid: return "sinusoid";
    case Generator::Constant: return "constant";
  }
  return "unknown";
}

Generator generator_from_string(const std::string& s) {
  if (s == "gaussian_walk") return Generator::GaussianWalk;
  if (s == "sinusoid") return Generator::Sinusoid;
  if (s == "constant") return Generator::Constant;
  throw Error(ErrorKind::InvalidArgument, "unknown trajectory generator '" + s + "'");
}

PoseTrajectory make_trajectory(const TrajectorySpec& spec) {
  if (!(spec.dt > 0.0)) throw Error(ErrorKind::InvalidArgument, "trajectory dt must be positive");
  PoseTrajectory tr;
  tr.generator = spec.generator;
  tr.seed = spec.seed;
  tr.dt = spec.dt;
  tr.t.resize(spec.steps);
  for (std::size_t k = 0; k < spec.steps; ++k) tr.t[k] = static_cast<double>(k + 1) * spec.dt;
  tr.dz = make_channel(spec.generator, spec.dz, spec.steps, spec.dt, spec.seed, 1);
  tr.dx = make_channel(spec.generator, spec.dx, spec.steps, spec.dt, spec.seed, 2);
  tr.beta = make_channel(spec.generator, spec.beta, spec.steps, spec.dt, spec.seed, 3);
  return tr;
}

std::vector<double> angular_rate(const PoseTrajectory& traj) {
  std::vector<double> w(traj.beta.size());
  double prev = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    w[k] = (traj.beta[k] - prev) / traj.dt;
    prev = traj.beta[k];
  }
  return w;
}

std::vector<double> gyro_integrate(std::span<const double> true_omega, double dt, const GyroModel& model) {
  if (!(dt > 0.0)) throw Error(ErrorKind::InvalidArgument, "dt must be positive");
  if (!(model.noise_std >= 0.0)) throw Error(ErrorKind::InvalidArgument, "gyro noise std must be >= 0");
  auto rng = stream(model.seed, 11);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<double> out(true_omega.size());
  double beta = 0.0;
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double n = model.noise_std > 0.0 ? model.noise_std * noise(rng) : 0.0;
    beta += ((1.0 + model.alpha) * true_omega[k] + model.bias + n) * dt;
    out[k] = beta;
  }
  return out;
}

double displacement_phase_dev(double k, double delta, double theta, Axis axis) {
  if (!(k > 0.0)) throw Error(ErrorKind::InvalidArgument, "wavenumber must be positive");
  return axis == Axis::Vertical ? k * delta * std::cos(theta) : k * delta * std::sin(theta);
}

double rotation_phase_comp(std::size_t n, double k, double d, double theta, double alpha_out, double beta) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "element index starts at 1");
  return static_cast<double>(n - 1) * (k * d * (std::sin(theta + beta) - std::sin(alpha_out - beta)));
}

RotationBudget rotation_error_budget(double alpha, double bias, double noise_std, double beta, double t,
                                     double dt_ref) {
  if (!(t > 0.0 && dt_ref > 0.0)) throw Error(ErrorKind::InvalidArgument, "t and dt_ref must be positive");
  RotationBudget b;
  b.scale = alpha * beta;
  b.bias = bias * t;
  b.noise = noise_std * std::sqrt(t * dt_ref);
  b.total = b.scale + b.bias + b.noise;
  return b;
}

double small_angle_residual(double theta, double beta, double dbeta) {
  const double x = theta + beta;
  return std::sin(x + dbeta) - (std::sin(x) + dbeta * std::cos(x));
}

double DynamicsTrace::reduction_percent() const {
  if (rmse_uncorrected == 0.0) return 0.0;
  return 100.0 * (1.0 - rmse_corrected / rmse_uncorrected);
}

DynamicsTrace simulate_correction(const PoseTrajectory& traj, const GyroModel& gyro, const ris::RisArray& array,
                                  double theta, double alpha_out, const CorrectionOptions& options) {
  array.validate();
  const std::size_t steps = traj.t.size();
  if (traj.dz.size() != steps || traj.dx.size() != steps || traj.beta.size() != steps) {
    throw Error(ErrorKind::InvalidArgument, "trajectory channels have different lengths");
  }
  if (!(options.pose_noise_std >= 0.0)) throw Error(ErrorKind::InvalidArgument, "pose noise std must be >= 0");

  const double k = ris::wavenumber(array.frequency, options.c_local);
  const double d = array.spacing;
  const std::size_t n_ref = array.n_units;
  auto rotation_term = [&](double beta) {
    return rotation_phase_comp(n_ref, k, d, theta, alpha_out, beta) - rotation_phase_comp(n_ref, k, d, theta, alpha_out, 0.0);
  };
  auto displacement_term = [&](double dz, double dx) {
    return displacement_phase_dev(k, dz, theta, Axis::Vertical) + displacement_phase_dev(k, dx, theta, Axis::Horizontal);
  };

  DynamicsTrace tr;
  tr.t = traj.t;
  tr.true_dz = traj.dz;
  tr.true_dx = traj.dx;
  tr.true_beta = traj.beta;
  tr.meas_beta = gyro_integrate(angular_rate(traj), traj.dt, gyro);
  tr.meas_dz.resize(steps);
  tr.meas_dx.resize(steps);
  tr.dphi_uncorrected.resize(steps);
  tr.dphi_corrected.resize(steps);

  auto rng = stream(options.pose_seed, 21);
  std::normal_distribution<double> noise(0.0, 1.0);
  auto measure = [&](double x) { return options.pose_noise_std > 0.0 ? x + options.pose_noise_std * noise(rng) : x; };
  auto applied = [&](double measured) { return options.skip_sub_spacing && std::abs(measured) < d ? 0.0 : measured; };

  for (std::size_t i = 0; i < steps; ++i) {
    tr.meas_dz[i] = measure(traj.dz[i]);
    tr.meas_dx[i] = measure(traj.dx[i]);
    tr.dphi_uncorrected[i] = displacement_term(traj.dz[i], traj.dx[i]) + rotation_term(traj.beta[i]);
    tr.dphi_corrected[i] = displacement_term(traj.dz[i] - applied(tr.meas_dz[i]), traj.dx[i] - applied(tr.meas_dx[i])) +
                           rotation_term(traj.beta[i]) - rotation_term(tr.meas_beta[i]);
  }
  tr.rmse_uncorrected = rmse(tr.dphi_uncorrected);
  tr.rmse_corrected = rmse(tr.dphi_corrected);
  return tr;
}

namespace {

DynamicsTrace trial(TrajectorySpec traj, GyroModel gyro, const ris::RisArray& array, double theta, double alpha_out,
                    CorrectionOptions options, std::uint64_t seed) {
  traj.seed = seed;
  gyro.seed = seed;
  options.pose_seed = seed;
  return simulate_correction(make_trajectory(traj), gyro, array, theta, alpha_out, options);
}

EnsembleSummary summarize(const std::vector<DynamicsTrace>& traces) {
  EnsembleSummary s;
  if (traces.empty()) return s;
  const double n = static_cast<double>(traces.size());
  for (const auto& t : traces) {
    s.reductions.push_back(t.reduction_percent());
    s.mean_reduction += t.reduction_percent() / n;
    s.mean_rmse_uncorrected += t.rmse_uncorrected / n;
    s.mean_rmse_corrected += t.rmse_corrected / n;
  }
  double var = 0.0;
  for (double r : s.reductions) var += (r - s.mean_reduction) * (r - s.mean_reduction);
  s.std_reduction = traces.size() > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
  return s;
}

}  // namespace

EnsembleSummary run_ensemble_serial(const TrajectorySpec& traj, const GyroModel& gyro, const ris::RisArray& array,
                                    double theta, double alpha_out, const CorrectionOptions& options,
                                    std::size_t trials, std::uint64_t first_seed) {
  std::vector<DynamicsTrace> traces;
  traces.reserve(trials);
  for (std::size_t i = 0; i < trials; ++i) {
    traces.push_back(trial(traj, gyro, array, theta, alpha_out, options, first_seed + i));
  }
  return summarize(traces);
}

EnsembleSummary run_ensemble(const TrajectorySpec& traj, const GyroModel& gyro, const ris::RisArray& array,
                             double theta, double alpha_out, const CorrectionOptions& options, std::size_t trials,
                             std::uint64_t first_seed, Parallelism par) {
  std::vector<DynamicsTrace> traces(trials);
  std::vector<std::optional<Error>> failures(trials);
  const auto n = static_cast<long>(trials);

#pragma omp parallel for schedule(dynamic, 4) num_threads(par.resolve())
  for (long i = 0; i < n; ++i) {
    try {
      traces[i] = trial(traj, gyro, array, theta, alpha_out, options, first_seed + static_cast<std::uint64_t>(i));
    } catch (const Error& e) {
      failures[i] = e;
    }
  }
  for (const auto& f : failures) {
    if (f) throw *f;
  }
  return summarize(traces);
}

void write_csv(std::ostream& out, const DynamicsTrace& trace) {
  out << "t_s,dphi_uncorrected_rad,dphi_corrected_rad\n";
  char buf[128];
  for (std::size_t i = 0; i < trace.t.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g\n", trace.t[i], trace.dphi_uncorrected[i], trace.dphi_corrected[i]);
    out << buf;
  }
}

DynamicsTrace read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "t_s,dphi_uncorrected_rad,dphi_corrected_rad") {
    throw Error(ErrorKind::Parse, "dynamics CSV: missing header");
  }
  DynamicsTrace tr;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double t = 0.0, u = 0.0, c = 0.0;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &t, &u, &c) != 3) {
      throw Error(ErrorKind::Parse, "dynamics CSV: malformed row " + std::to_string(tr.t.size() + 2));
    }
    tr.t.push_back(t);
    tr.dphi_uncorrected.push_back(u);
    tr.dphi_corrected.push_back(c);
  }
  tr.rmse_uncorrected = rmse(tr.dphi_uncorrected);
  tr.rmse_corrected = rmse(tr.dphi_corrected);
  return tr;
}

nlohmann::json summary_json(const DynamicsTrace& trace) {
  return {{"steps", trace.t.size()},
          {"rmse_uncorrected_rad", trace.rmse_uncorrected},
          {"rmse_corrected_rad", trace.rmse_corrected},
          {"reduction_percent", trace.reduction_percent()}};
}

nlohmann::json to_json(const EnsembleSummary& s) {
  return {{"trials", s.reductions.size()},
          {"mean_reduction_percent", s.mean_reduction},
          {"std_reduction_percent", s.std_reduction},
          {"mean_rmse_uncorrected_rad", s.mean_rmse_uncorrected},
          {"mean_rmse_corrected_rad", s.mean_rmse_corrected}};
}

}  // namespace sofar::dynamics
