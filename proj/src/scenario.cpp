// SPDX-License-Identifier: Apache-2.0
#include "sofar/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "sofar/error.hpp"

namespace sofar::cli {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

[[noreturn]] void invalid(const std::string& field, const std::string& reason) {
  throw Error(ErrorKind::Validation, field + ": " + reason);
}

// Typed access to one JSON object, remembering its dotted path for errors.
class Node {
public:
  Node(const nlohmann::json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) invalid(path_.empty() ? "<root>" : path_, "expected an object");
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  bool has(const std::string& key) const { return j_.contains(key) && !j_.at(key).is_null(); }

  Node child(const std::string& key) const {
    if (!has(key)) invalid(field(key), "missing");
    return Node(j_.at(key), field(key));
  }

  const nlohmann::json& raw(const std::string& key) const {
    if (!has(key)) invalid(field(key), "missing");
    return j_.at(key);
  }

  double num(const std::string& key) const {
    const auto& v = raw(key);
    if (!v.is_number()) invalid(field(key), "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) invalid(field(key), "must be finite");
    return x;
  }
  double num(const std::string& key, double fallback) const { return has(key) ? num(key) : fallback; }

  double positive(const std::string& key) const {
    const double x = num(key);
    if (!(x > 0.0)) invalid(field(key), "must be positive");
    return x;
  }
  double positive(const std::string& key, double fallback) const { return has(key) ? positive(key) : fallback; }

  std::uint64_t count(const std::string& key) const {
    const auto& v = raw(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
      invalid(field(key), "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }
  std::uint64_t count(const std::string& key, std::uint64_t fallback) const { return has(key) ? count(key) : fallback; }

  bool flag(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const auto& v = raw(key);
    if (!v.is_boolean()) invalid(field(key), "expected true or false");
    return v.get<bool>();
  }

  std::string str(const std::string& key) const {
    const auto& v = raw(key);
    if (!v.is_string()) invalid(field(key), "expected a string");
    return v.get<std::string>();
  }
  std::string str(const std::string& key, const std::string& fallback) const { return has(key) ? str(key) : fallback; }

  std::vector<double> numbers(const std::string& key) const {
    const auto& v = raw(key);
    if (!v.is_array()) invalid(field(key), "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) invalid(field(key) + "[" + std::to_string(i) + "]", "expected a number");
      out.push_back(v[i].get<double>());
    }
    return out;
  }

  std::vector<Node> list(const std::string& key) const {
    std::vector<Node> out;
    if (!has(key)) return out;
    const auto& v = raw(key);
    if (!v.is_array()) invalid(field(key), "expected an array");
    for (std::size_t i = 0; i < v.size(); ++i) out.emplace_back(v[i], field(key) + "[" + std::to_string(i) + "]");
    return out;
  }

private:
  const nlohmann::json& j_;
  std::string path_;
};

ProfileSpec read_profile(const Node& n) {
  ProfileSpec p;
  const std::string kind = n.str("kind");
  if (kind == "munk") {
    p.kind = ssp::ProfileKind::Munk;
    p.c0 = n.positive("c0", 1500.0);
    p.z_axis = n.positive("z_axis");
    p.z_scale = n.positive("z_scale");
    p.eps = n.positive("eps");
    p.z_max = n.positive("z_max");
    if (!(p.z_axis < p.z_max)) invalid(n.field("z_axis"), "must lie above z_max");
  } else if (kind == "bilinear") {
    p.kind = ssp::ProfileKind::Bilinear;
    p.z_max = 120.0;
  } else if (kind == "layered") {
    p.kind = ssp::ProfileKind::LayeredLinear;
    for (const auto& l : n.list("layers")) {
      p.layers.push_back({l.num("z_top"), l.num("z_bottom"), l.positive("c_top"), l.num("gradient")});
    }
    if (p.layers.empty()) invalid(n.field("layers"), "needs at least one layer");
    p.z_max = p.layers.back().z_bottom;
  } else {
    invalid(n.field("kind"), "expected munk, bilinear or layered, got '" + kind + "'");
  }
  try {
    (void)p.build();
  } catch (const Error& e) {
    invalid(n.field("kind"), e.what());
  }
  return p;
}

void check_depth(const Node& n, const std::string& key, double z, double z_max) {
  if (!(z >= 0.0 && z <= z_max)) {
    std::ostringstream msg;
    msg << z << " m lies outside the water column [0, " << z_max << "] m";
    invalid(n.field(key), msg.str());
  }
}

void check_fan(const Node& n, double lo, double hi) {
  if (!(lo <= hi)) invalid(n.field("theta_min_deg"), "must not exceed theta_max_deg");
  if (!(std::abs(lo) < 90.0 * kDeg && std::abs(hi) < 90.0 * kDeg)) {
    invalid(n.field("theta_min_deg"), "fan must stay inside (-90, 90) deg");
  }
}

field::Region read_region(const Node& n) {
  field::Region r{n.num("r_min_m"), n.num("r_max_m"), n.num("z_min_m"), n.num("z_max_m")};
  if (!(r.r_min < r.r_max)) invalid(n.field("r_max_m"), "must exceed r_min_m");
  if (!(r.z_min < r.z_max)) invalid(n.field("z_max_m"), "must exceed z_min_m");
  return r;
}

ris::RisArray read_array(const Node& n, double frequency) {
  ris::RisArray a;
  a.n_units = n.count("n_units", 1);
  if (a.n_units < 1) invalid(n.field("n_units"), "must be >= 1");
  a.square = n.flag("square", false);
  a.spacing = n.positive("spacing_m", 0.075);
  a.frequency = n.positive("frequency_hz", frequency);
  a.depth = n.num("depth_m", 0.0);
  a.range = n.num("range_m", 0.0);
  return a;
}

dynamics::ChannelSpec read_channel(const Node& parent, const std::string& key, double unit) {
  dynamics::ChannelSpec c;
  if (!parent.has(key)) {
    c.cap = std::numeric_limits<double>::infinity();
    return c;
  }
  const Node n = parent.child(key);
  c.scale = n.num("scale", 0.0) * unit;
  c.cap = n.has("cap") ? n.num("cap") * unit : std::numeric_limits<double>::infinity();
  if (!(c.cap >= 0.0)) invalid(n.field("cap"), "must be >= 0");
  c.period = n.positive("period_s", 10.0);
  c.phase = n.num("phase_deg", 0.0) * kDeg;
  return c;
}

DynamicsCase read_dynamics(const Node& n, double frequency) {
  DynamicsCase c;
  c.name = n.str("name");
  const Node t = n.child("trajectory");
  try {
    c.trajectory.generator = dynamics::generator_from_string(t.str("generator", "gaussian_walk"));
  } catch (const Error&) {
    invalid(t.field("generator"), "expected gaussian_walk, sinusoid or constant");
  }
  c.trajectory.steps = t.count("steps", 100);
  c.trajectory.dt = t.positive("dt_s", 0.1);
  c.trajectory.dz = read_channel(t, "dz_m", 1.0);
  c.trajectory.dx = read_channel(t, "dx_m", 1.0);
  c.trajectory.beta = read_channel(t, "beta_deg", kDeg);
  if (n.has("gyro")) {
    const Node g = n.child("gyro");
    c.gyro.alpha = g.num("alpha", 0.0);
    c.gyro.bias = g.num("bias_deg_s", 0.0) * kDeg;
    c.gyro.noise_std = g.num("noise_std_deg_s", 0.0) * kDeg;
    if (c.gyro.noise_std < 0.0) invalid(g.field("noise_std_deg_s"), "must be >= 0");
  }
  if (n.has("correction")) {
    const Node o = n.child("correction");
    c.options.skip_sub_spacing = o.flag("skip_sub_spacing", true);
    c.options.pose_noise_std = o.num("pose_noise_std_m", 0.0);
    if (c.options.pose_noise_std < 0.0) invalid(o.field("pose_noise_std_m"), "must be >= 0");
    c.options.c_local = o.positive("c_local_m_s", 1500.0);
  }
  c.array = read_array(n.child("array"), frequency);
  c.theta = n.num("theta_deg") * kDeg;
  c.alpha_out = n.num("alpha_out_deg", n.num("theta_deg")) * kDeg;
  c.trials = n.count("trials", 1);
  if (c.trials < 1) invalid(n.field("trials"), "must be >= 1");
  return c;
}

}  // namespace

ssp::SoundSpeedProfile ProfileSpec::build() const {
  switch (kind) {
    case ssp::ProfileKind::Munk: return ssp::munk_profile(c0, z_axis, z_scale, eps, z_max);
    case ssp::ProfileKind::Bilinear: return ssp::bilinear_profile();
    case ssp::ProfileKind::LayeredLinear: return ssp::layered_profile(layers);
  }
  throw Error(ErrorKind::InvalidProfile, "unknown profile kind");
}

Scenario parse_scenario(const nlohmann::json& j) {
  const Node root(j, "");
  Scenario s;
  s.name = root.str("name", "scenario");
  s.seed = root.count("seed", 1);

  s.profile = read_profile(root.child("profile"));
  const double zmax = s.profile.z_max;

  const Node src = root.child("source");
  s.source.depth = src.num("depth");
  check_depth(src, "depth", s.source.depth, zmax);
  s.source.theta_min = src.num("theta_min_deg") * kDeg;
  s.source.theta_max = src.num("theta_max_deg") * kDeg;
  check_fan(src, s.source.theta_min, s.source.theta_max);
  s.source.rays = src.count("rays", 401);
  if (s.source.rays < 1) invalid(src.field("rays"), "must be >= 1");
  s.source.source_level = src.num("source_level_db", 0.0);
  s.source.frequency = src.positive("frequency_hz");

  if (root.has("trace")) {
    const Node t = root.child("trace");
    s.trace.max_range = t.positive("max_range_m", s.trace.max_range);
    s.trace.depth_step = t.positive("depth_step_m", s.trace.depth_step);
    s.trace.max_bounces = static_cast<int>(t.count("max_bounces", 100));
    s.trace.bottom_absorbs = t.flag("bottom_absorbs", true);
    s.trace.max_arc_step = t.positive("max_arc_step_m", s.trace.max_arc_step);
    s.export_rays = t.count("export_rays", 41);
  }

  const Node g = root.child("grid");
  s.grid = {g.num("r_min_m"), g.num("r_max_m"), g.count("nr"), g.num("z_min_m"), g.num("z_max_m"), g.count("nz")};
  if (!(s.grid.r_min < s.grid.r_max)) invalid(g.field("r_max_m"), "must exceed r_min_m");
  if (!(s.grid.z_min < s.grid.z_max)) invalid(g.field("z_max_m"), "must exceed z_min_m");
  if (s.grid.nr == 0) invalid(g.field("nr"), "must be >= 1");
  if (s.grid.nz == 0) invalid(g.field("nz"), "must be >= 1");
  if (s.grid.z_min < 0.0 || s.grid.z_max > zmax) invalid(g.field("z_max_m"), "grid must stay inside the water column");

  s.window = read_region(root.child("window"));
  if (s.window.z_min < 0.0 || s.window.z_max > zmax) invalid("window.z_max_m", "window must stay inside the water column");

  s.thresholds = root.numbers("thresholds_db");
  if (s.thresholds.empty()) invalid("thresholds_db", "needs at least one threshold");
  if (!std::is_sorted(s.thresholds.begin(), s.thresholds.end())) invalid("thresholds_db", "must be sorted ascending");

  std::vector<std::string> names;
  for (const auto& r : root.list("ris")) {
    RisPlacement p;
    p.name = r.str("name");
    if (std::find(names.begin(), names.end(), p.name) != names.end()) invalid(r.field("name"), "duplicate name");
    names.push_back(p.name);
    p.array = read_array(r, s.source.frequency);
    check_depth(r, "depth_m", p.array.depth, zmax);
    p.theta_min = r.num("theta_min_deg") * kDeg;
    p.theta_max = r.num("theta_max_deg") * kDeg;
    check_fan(r, p.theta_min, p.theta_max);
    p.rays = r.count("rays", s.source.rays);
    const auto dir = r.num("direction", 1.0);
    if (dir != 1.0 && dir != -1.0) invalid(r.field("direction"), "must be 1 or -1");
    p.direction = static_cast<int>(dir);
    s.ris.push_back(p);
  }

  if (root.has("shadow")) {
    const Node n = root.child("shadow");
    ShadowSpec sh;
    sh.theta_min = n.num("theta_min_deg") * kDeg;
    sh.theta_max = n.num("theta_max_deg") * kDeg;
    check_fan(n, sh.theta_min, sh.theta_max);
    sh.dz = n.positive("dz_m", 10.0);
    s.shadow = sh;
  }

  if (root.has("deep")) {
    const Node n = root.child("deep");
    DeepDeploySpec d;
    d.h_samples = n.numbers("h_samples_m");
    d.unit_depths = n.numbers("unit_depths_m");
    for (std::size_t i = 0; i < d.unit_depths.size(); ++i) {
      check_depth(n, "unit_depths_m[" + std::to_string(i) + "]", d.unit_depths[i], zmax);
    }
    d.array_side = n.count("array_side", 20);
    if (d.array_side < 1) invalid(n.field("array_side"), "must be >= 1");
    const Node t = n.child("target");
    d.target_range = t.num("range_m");
    d.target_depth = t.num("depth_m");
    check_depth(t, "depth_m", d.target_depth, zmax);
    d.rays = n.count("rays", s.source.rays);
    s.deep = d;
  }

  if (root.has("shallow")) {
    const Node n = root.child("shallow");
    ShallowSpec sh;
    sh.h = n.positive("h_m");
    sh.D = n.positive("D_m");
    if (!(sh.h < sh.D)) invalid(n.field("h_m"), "must be below D_m");
    if (std::abs(sh.D - zmax) > 1e-9) invalid(n.field("D_m"), "must equal the profile depth");
    sh.r_max_window = n.positive("r_max_window_m");
    sh.dz = n.positive("dz_m", 1.0);
    try {
      sh.method = deploy::method_from_string(n.str("method", "golden_section"));
    } catch (const Error&) {
      invalid(n.field("method"), "expected golden_section, grid_refine or genetic");
    }
    sh.target_range = n.num("target_range_m", 10.0e3);
    sh.relay_depths = n.has("relay_depths_m") ? n.numbers("relay_depths_m") : std::vector<double>{};
    for (std::size_t i = 0; i < sh.relay_depths.size(); ++i) {
      check_depth(n, "relay_depths_m[" + std::to_string(i) + "]", sh.relay_depths[i], zmax);
    }
    s.shallow = sh;
  }

  for (const auto& d : root.list("dynamics")) s.dynamics.push_back(read_dynamics(d, s.source.frequency));
  return s;
}

Scenario parse_scenario_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto upto = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
    throw Error(ErrorKind::Parse, "line " + std::to_string(line) + ": " + e.what());
  }
  return parse_scenario(j);
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, "cannot open scenario file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario_text(ss.str());
}

}  // namespace sofar::cli
