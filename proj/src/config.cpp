// SPDX-License-Identifier: Apache-2.0
//
// ddtrack: delay-Doppler direct positioning for distributed MIMO

#include "ddtrack/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

namespace ddtrack {

namespace {

using nlohmann::json;

/// Typed access to one JSON object; remembers which keys were read.
class Block {
 public:
  Block(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ConfigError("'" + display() + "' must be an object");
  }

  bool has(const std::string& key) const { return node_.contains(key); }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    auto it = node_.find(key);
    if (it == node_.end()) throw ConfigError("missing required key '" + name(key) + "'");
    return *it;
  }

  double number(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number()) throw ConfigError("'" + name(key) + "' must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError("'" + name(key) + "' must be finite");
    return d;
  }
  double number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

  std::int64_t integer(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number_integer()) throw ConfigError("'" + name(key) + "' must be an integer");
    return v.get<std::int64_t>();
  }
  std::uint64_t count(const std::string& key) {
    const std::int64_t v = integer(key);
    if (v < 0) throw ConfigError("'" + name(key) + "' must be non-negative");
    return static_cast<std::uint64_t>(v);
  }
  std::uint64_t count(const std::string& key, std::uint64_t fallback) {
    return has(key) ? count(key) : fallback;
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_boolean()) throw ConfigError("'" + name(key) + "' must be true or false");
    return v.get<bool>();
  }

  std::string text(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_string()) throw ConfigError("'" + name(key) + "' must be a string");
    return v.get<std::string>();
  }

  template <typename Enum>
  Enum choice(const std::string& key, Enum fallback,
              std::initializer_list<std::pair<const char*, Enum>> options) {
    if (!has(key)) return fallback;
    const std::string value = text(key);
    std::string allowed;
    for (const auto& [label, e] : options) {
      if (value == label) return e;
      allowed += allowed.empty() ? label : std::string(", ") + label;
    }
    throw ConfigError("'" + name(key) + "' must be one of: " + allowed);
  }

  std::vector<double> numbers(const std::string& key, std::size_t expected) {
    const json& v = raw(key);
    if (!v.is_array() || (expected != 0 && v.size() != expected))
      throw ConfigError("'" + name(key) + "' must be an array of " +
                        (expected ? std::to_string(expected) + " " : std::string()) + "numbers");
    std::vector<double> out;
    for (const json& e : v) {
      if (!e.is_number()) throw ConfigError("'" + name(key) + "' must contain only numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  Vec3 vec3(const std::string& key) {
    const auto v = numbers(key, 3);
    return Vec3(v[0], v[1], v[2]);
  }

  Block child(const std::string& key) { return Block(raw(key), name(key)); }

  std::vector<Block> children(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_array()) throw ConfigError("'" + name(key) + "' must be an array");
    std::vector<Block> out;
    for (std::size_t i = 0; i < v.size(); ++i)
      out.emplace_back(v[i], name(key) + "[" + std::to_string(i) + "]");
    return out;
  }

  std::string name(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  void reject_unknown() const {
    for (const auto& [key, value] : node_.items()) {
      if (!seen_.count(key)) throw ConfigError("unknown key '" + name(key) + "'");
    }
  }

 private:
  std::string display() const { return path_.empty() ? "<root>" : path_; }

  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

AnchorLayoutSpec parse_anchors(Block b) {
  AnchorLayoutSpec spec;
  if (b.has("positions")) {
    const json& arr = b.raw("positions");
    if (!arr.is_array()) throw ConfigError("'" + b.name("positions") + "' must be an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const json& p = arr[i];
      if (!p.is_array() || p.size() != 3 || !p[0].is_number() || !p[1].is_number() ||
          !p[2].is_number())
        throw ConfigError("'" + b.name("positions") + "[" + std::to_string(i) +
                          "]' must be an array of 3 numbers");
      spec.positions.emplace_back(p[0].get<double>(), p[1].get<double>(), p[2].get<double>());
    }
  }
  if (b.has("walls")) {
    Block w = b.child("walls");
    WallLayout layout;
    layout.hall_length_m = w.number("hall_length_m", layout.hall_length_m);
    layout.hall_width_m = w.number("hall_width_m", layout.hall_width_m);
    layout.height_m = w.number("height_m", layout.height_m);
    layout.per_wall = static_cast<int>(w.count("per_wall", static_cast<std::uint64_t>(layout.per_wall)));
    w.reject_unknown();
    spec.walls = layout;
  }
  if (spec.positions.empty() && !spec.walls)
    throw ConfigError("'anchors' needs 'positions' or 'walls'");
  if (!spec.positions.empty() && spec.walls)
    throw ConfigError("'anchors' takes either 'positions' or 'walls', not both");
  if (b.has("phase_offsets")) spec.phase_offsets = b.numbers("phase_offsets", 0);
  b.reject_unknown();
  return spec;
}

TrajectorySpec parse_trajectory(Block b) {
  const std::string type = b.text("type");
  TrajectorySpec spec;
  if (type == "line") {
    LineTrajectory t;
    t.start = b.vec3("start");
    t.end = b.vec3("end");
    t.speed_mps = b.number("speed_mps", t.speed_mps);
    spec = t;
  } else if (type == "circle") {
    CircleTrajectory t;
    t.center = b.vec3("center");
    t.radius_m = b.number("radius_m");
    t.angular_speed_radps = b.number("angular_speed_radps");
    t.duration_s = b.number("duration_s");
    t.start_angle_rad = b.number("start_angle_rad", t.start_angle_rad);
    spec = t;
  } else if (type == "waypoints") {
    WaypointTrajectory t;
    const json& arr = b.raw("waypoints");
    if (!arr.is_array()) throw ConfigError("'" + b.name("waypoints") + "' must be an array");
    for (const json& p : arr) {
      if (!p.is_array() || p.size() != 3)
        throw ConfigError("'" + b.name("waypoints") + "' entries must be arrays of 3 numbers");
      t.waypoints.emplace_back(p[0].get<double>(), p[1].get<double>(), p[2].get<double>());
    }
    t.speed_mps = b.number("speed_mps", t.speed_mps);
    spec = t;
  } else {
    throw ConfigError("'" + b.name("type") + "' must be one of: line, circle, waypoints");
  }
  b.reject_unknown();
  return spec;
}

AmplitudeModel parse_amplitude(Block b) {
  AmplitudeModel a;
  a.mode = b.choice("mode", a.mode, {{"unit", PathLoss::unit}, {"free_space", PathLoss::free_space}});
  a.reference_amplitude = b.number("reference_amplitude", a.reference_amplitude);
  a.carrier_phase = b.boolean("carrier_phase", a.carrier_phase);
  b.reject_unknown();
  return a;
}

ImpairmentSchedule parse_impairments(Block b) {
  ImpairmentSchedule s;
  if (b.has("blockages")) {
    for (Block e : b.children("blockages")) {
      Blockage bl;
      bl.anchor = e.count("anchor");
      bl.k_start = e.integer("k_start");
      bl.k_end = e.integer("k_end");
      bl.attenuation_db = e.number("attenuation_db");
      e.reject_unknown();
      s.blockages.push_back(bl);
    }
  }
  if (b.has("scatterers")) {
    for (Block e : b.children("scatterers")) {
      Scatterer sc;
      sc.position = e.vec3("position");
      const auto g = e.numbers("gain", 2);
      sc.gain = cdouble(g[0], g[1]);
      e.reject_unknown();
      s.scatterers.push_back(sc);
    }
  }
  b.reject_unknown();
  return s;
}

StateVector state_vector(Block& b, const std::string& key) {
  const auto v = b.numbers(key, kStateDim);
  StateVector s;
  for (int i = 0; i < kStateDim; ++i) s[i] = v[static_cast<std::size_t>(i)];
  return s;
}

FilterConfig parse_filter(Block b) {
  FilterConfig f;
  f.particles = b.count("particles", f.particles);
  if (b.has("init_min")) f.init_min = state_vector(b, "init_min");
  if (b.has("init_max")) f.init_max = state_vector(b, "init_max");
  f.noise_var_log_uniform = b.boolean("noise_var_log_uniform", f.noise_var_log_uniform);
  if (b.has("process_noise")) {
    Block p = b.child("process_noise");
    f.process_noise.position_m = p.number("position_m", f.process_noise.position_m);
    f.process_noise.height_m = p.number("height_m", f.process_noise.height_m);
    f.process_noise.velocity_mps = p.number("velocity_mps", f.process_noise.velocity_mps);
    f.process_noise.noise_var = p.number("noise_var", f.process_noise.noise_var);
    p.reject_unknown();
  }
  f.bandwidth_mode = b.choice("bandwidth_mode", f.bandwidth_mode,
                              {{"optimal", BandwidthMode::optimal}, {"fixed", BandwidthMode::fixed}});
  f.fixed_bandwidth = b.number("fixed_bandwidth", f.fixed_bandwidth);
  if (b.has("burn_in")) {
    Block p = b.child("burn_in");
    f.burn_in.steps = p.count("steps", f.burn_in.steps);
    f.burn_in.temperature = p.number("temperature", f.burn_in.temperature);
    f.burn_in.final_temperature = p.number("final_temperature", f.burn_in.final_temperature);
    p.reject_unknown();
  }
  f.update_stride = b.count("update_stride", f.update_stride);
  if (b.has("window")) {
    Block p = b.child("window");
    f.window.length = p.count("length", f.window.length);
    f.window.time_stride = p.count("time_stride", f.window.time_stride);
    f.window.subcarrier_stride = p.count("subcarrier_stride", f.window.subcarrier_stride);
    f.window.reference = p.choice("reference", f.window.reference,
                                  {{"end", GeometryReference::window_end},
                                   {"center", GeometryReference::window_center}});
    p.reject_unknown();
  }
  f.resampling = b.choice("resampling", f.resampling,
                          {{"every_step", ResamplingMode::every_step},
                           {"ess_triggered", ResamplingMode::ess_triggered}});
  f.ess_threshold = b.number("ess_threshold", f.ess_threshold);
  f.on_divergence = b.choice("on_divergence", f.on_divergence,
                             {{"abort", DivergencePolicy::abort},
                              {"reinitialize", DivergencePolicy::reinitialize}});
  f.noise_var_floor = b.number("noise_var_floor", f.noise_var_floor);
  f.seed = b.count("seed", f.seed);
  f.threads = static_cast<int>(b.count("threads", static_cast<std::uint64_t>(f.threads)));
  b.reject_unknown();
  return f;
}

ConvergenceOptions parse_metrics(Block b) {
  ConvergenceOptions m;
  m.mode = b.choice("mode", m.mode,
                    {{"covariance", ConvergenceMode::covariance}, {"fixed", ConvergenceMode::fixed}});
  m.threshold_m = b.number("threshold_m", m.threshold_m);
  m.hold_steps = b.count("hold_steps", m.hold_steps);
  m.skip_s = b.number("skip_s", m.skip_s);
  b.reject_unknown();
  return m;
}

}  // namespace

void PipelineConfig::validate() const {
  scenario.validate();
  filter.validate();
  if (runs < 1) throw ConfigError("'runs' must be at least 1");
  if (std::isnan(snr_db) || snr_db == -std::numeric_limits<double>::infinity()) throw ConfigError("'snr_db' must be a number");
  if (!(amplitude.reference_amplitude > 0.0) || !std::isfinite(amplitude.reference_amplitude))
    throw ConfigError("'amplitude.reference_amplitude' must be positive");
  if (!(metrics.threshold_m >= 0.0)) throw ConfigError("'metrics.threshold_m' must be non-negative");
  if (!(metrics.skip_s >= 0.0)) throw ConfigError("'metrics.skip_s' must be non-negative");
}

PipelineConfig parse_pipeline_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  Block root(doc, "");
  PipelineConfig cfg;
  ScenarioConfig& s = cfg.scenario;
  s.carrier_hz = root.number("carrier_hz");
  const std::uint64_t nf = root.count("subcarrier_count");
  if (nf == 0 || nf > 1u << 20) throw ConfigError("'subcarrier_count' out of range");
  s.subcarrier_count = static_cast<int>(nf);
  s.subcarrier_spacing_hz = root.number("subcarrier_spacing_hz");
  s.dt_s = root.number("dt_s");
  s.v_max_mps = root.number("v_max_mps", s.v_max_mps);
  s.anchors = parse_anchors(root.child("anchors"));
  s.trajectory = parse_trajectory(root.child("trajectory"));
  s.seed = root.count("seed");

  if (root.has("amplitude")) cfg.amplitude = parse_amplitude(root.child("amplitude"));
  // JSON has no infinity literal; "inf" selects a noise-free dataset
  if (root.has("snr_db") && doc["snr_db"].is_string()) {
    if (root.text("snr_db") != "inf") throw ConfigError("'snr_db' must be a number or \"inf\"");
    cfg.snr_db = std::numeric_limits<double>::infinity();
  } else {
    cfg.snr_db = root.number("snr_db", cfg.snr_db);
  }
  if (root.has("impairments")) cfg.impairments = parse_impairments(root.child("impairments"));
  if (root.has("filter")) cfg.filter = parse_filter(root.child("filter"));
  if (root.has("metrics")) cfg.metrics = parse_metrics(root.child("metrics"));
  cfg.runs = root.count("runs", cfg.runs);
  if (root.has("output_dir")) cfg.output_dir = root.text("output_dir");
  root.reject_unknown();

  cfg.validate();
  return cfg;
}

PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  PipelineConfig cfg = parse_pipeline_config(ss.str());
  if (cfg.output_dir.is_relative()) cfg.output_dir = path.parent_path() / cfg.output_dir;
  return cfg;
}

}  // namespace ddtrack
