#include "etsmc/config.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "etsmc/errors.hpp"
#include "etsmc/format.hpp"

namespace etsmc {
namespace {

struct Value {
  enum class Kind { Number, Bool, String } kind = Kind::Number;
  std::string text;
  bool flag = false;
};

using Setter = std::function<void(Config&, const Value&, const std::string& key)>;

double as_double(const Value& v, const std::string& key) {
  if (v.kind != Value::Kind::Number) throw ConfigError(key, "expected a number");
  try {
    return parse_double(v.text);
  } catch (const std::invalid_argument&) {
    throw ConfigError(key, "expected a number, got '" + v.text + "'");
  }
}

std::uint64_t as_u64(const Value& v, const std::string& key) {
  if (v.kind != Value::Kind::Number) throw ConfigError(key, "expected an integer");
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.text.data(), v.text.data() + v.text.size(), out);
  if (ec != std::errc{} || ptr != v.text.data() + v.text.size()) {
    throw ConfigError(key, "expected a non-negative integer, got '" + v.text + "'");
  }
  return out;
}

bool as_bool(const Value& v, const std::string& key) {
  if (v.kind != Value::Kind::Bool) throw ConfigError(key, "expected true or false");
  return v.flag;
}

const std::string& as_string(const Value& v, const std::string& key) {
  if (v.kind != Value::Kind::String) throw ConfigError(key, "expected a quoted string");
  return v.text;
}

template <typename F>
Setter number(F&& field) {
  return [field](Config& c, const Value& v, const std::string& key) { field(c) = as_double(v, key); };
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    auto limb = [&](const char* name, double LimbParams::*f) {
      t[std::string("limb.") + name] = number([f](Config& c) -> double& { return c.model.limb.*f; });
    };
    limb("m1", &LimbParams::m1);
    limb("m2", &LimbParams::m2);
    limb("I1", &LimbParams::I1);
    limb("I2", &LimbParams::I2);
    limb("L1", &LimbParams::L1);
    limb("L2", &LimbParams::L2);
    limb("R1", &LimbParams::R1);
    limb("R2", &LimbParams::R2);
    limb("B1", &LimbParams::B1);
    limb("B2", &LimbParams::B2);
    limb("k1", &LimbParams::k1);
    limb("k2", &LimbParams::k2);
    limb("g", &LimbParams::g);
    limb("sigma1", &LimbParams::sigma1);
    limb("alpha1", &LimbParams::alpha1);
    limb("sigma2", &LimbParams::sigma2);
    limb("alpha2", &LimbParams::alpha2);
    limb("dim1", &LimbParams::dim1);
    limb("dim2", &LimbParams::dim2);
    limb("dim3", &LimbParams::dim3);
    limb("dim4", &LimbParams::dim4);
    limb("dim5", &LimbParams::dim5);
    limb("dim6", &LimbParams::dim6);
    limb("dim7", &LimbParams::dim7);
    limb("dim8", &LimbParams::dim8);
    limb("dim9", &LimbParams::dim9);
    t["limb.joint1_min"] = number([](Config& c) -> double& { return c.model.limb.joint_min[0]; });
    t["limb.joint1_max"] = number([](Config& c) -> double& { return c.model.limb.joint_max[0]; });
    t["limb.joint2_min"] = number([](Config& c) -> double& { return c.model.limb.joint_min[1]; });
    t["limb.joint2_max"] = number([](Config& c) -> double& { return c.model.limb.joint_max[1]; });

    t["sea.motor_gain_damping"] = number([](Config& c) -> double& { return c.model.sea.motor_gain_damping; });
    t["sea.slew_limit"] = number([](Config& c) -> double& { return c.model.sea.slew_limit; });
    for (int i = 0; i < 2; ++i) {
      t["sea.reference_length" + std::to_string(i + 1)] = [i](Config& c, const Value& v,
                                                               const std::string& key) {
        if (!c.model.sea.reference_lengths) c.model.sea.reference_lengths = Vec2::Zero();
        (*c.model.sea.reference_lengths)[i] = as_double(v, key);
      };
    }

    t["gains.c"] = number([](Config& c) -> double& { return c.model.gains.c; });
    t["gains.rho"] = number([](Config& c) -> double& { return c.model.gains.rho; });
    t["gains.kp1"] = number([](Config& c) -> double& { return c.model.gains.kp1; });
    t["gains.kp2"] = number([](Config& c) -> double& { return c.model.gains.kp2; });
    t["gains.boundary_layer"] = number([](Config& c) -> double& { return c.model.gains.boundary_layer; });
    t["gains.coupling"] = number([](Config& c) -> double& { return c.model.gains.coupling; });
    t["gains.vx_rate"] = [](Config& c, const Value& v, const std::string& key) {
      const std::string& s = as_string(v, key);
      if (s == "difference") {
        c.model.gains.vx_rate = VxRate::BackwardDifference;
      } else if (s == "zero") {
        c.model.gains.vx_rate = VxRate::Zero;
      } else {
        throw ConfigError(key, "expected \"difference\" or \"zero\"");
      }
    };
    t["gains.check_rho_bound"] = [](Config& c, const Value& v, const std::string& key) {
      c.check_rho_bound = as_bool(v, key);
    };

    t["trigger.eta"] = number([](Config& c) -> double& { return c.model.trigger.eta; });
    t["trigger.L"] = number([](Config& c) -> double& { return c.model.trigger.L_const; });
    t["trigger.error_radius"] = number([](Config& c) -> double& { return c.model.trigger.error_radius; });
    t["trigger.lambda"] = number([](Config& c) -> double& { return c.model.trigger.lambda_est; });
    t["trigger.h"] = number([](Config& c) -> double& { return c.model.trigger.h_bound; });
    t["trigger.d0"] = number([](Config& c) -> double& { return c.model.trigger.d0_bound; });
    t["trigger.g0"] = [](Config& c, const Value& v, const std::string& key) {
      c.model.trigger.g0_bound = as_double(v, key);
    };

    auto gait = [&](const char* name, double GaitSpec::*f) {
      t[std::string("trajectory.") + name] = [f](Config& c, const Value& v, const std::string& key) {
        GaitSpec g = c.model.trajectory.gait();
        g.*f = as_double(v, key);
        c.model.trajectory = Trajectory(g);
      };
    };
    gait("period", &GaitSpec::period);
    gait("hip_amplitude", &GaitSpec::hip_amplitude);
    gait("hip_offset", &GaitSpec::hip_offset);
    gait("knee_amplitude", &GaitSpec::knee_amplitude);
    gait("knee_offset", &GaitSpec::knee_offset);
    gait("phase_shift", &GaitSpec::phase_shift);
    t["trajectory.file"] = [](Config& c, const Value& v, const std::string& key) {
      c.trajectory_file = as_string(v, key);
    };

    t["sim.duration"] = number([](Config& c) -> double& { return c.sim.duration; });
    t["sim.integration_step"] = number([](Config& c) -> double& { return c.sim.integration_step; });
    t["sim.sampling_period"] = number([](Config& c) -> double& { return c.sim.sampling_period; });
    t["sim.divergence_norm"] = number([](Config& c) -> double& { return c.sim.divergence_norm; });
    t["sim.seed"] = [](Config& c, const Value& v, const std::string& key) { c.sim.seed = as_u64(v, key); };
    t["sim.controller"] = [](Config& c, const Value& v, const std::string& key) {
      const std::string& s = as_string(v, key);
      if (s == "tt-smc") {
        c.sim.controller_kind = ControllerKind::TimeTriggered;
      } else if (s == "et-smc") {
        c.sim.controller_kind = ControllerKind::EventTriggered;
      } else {
        throw ConfigError(key, "expected \"tt-smc\" or \"et-smc\"");
      }
    };
    t["sim.hold_mode"] = [](Config& c, const Value& v, const std::string& key) {
      const std::string& s = as_string(v, key);
      if (s == "vx_only") {
        c.sim.hold_mode = HoldMode::VxOnly;
      } else if (s == "full_uv") {
        c.sim.hold_mode = HoldMode::FullUv;
      } else {
        throw ConfigError(key, "expected \"vx_only\" or \"full_uv\"");
      }
    };
    t["sim.init_mode"] = [](Config& c, const Value& v, const std::string& key) {
      const std::string& s = as_string(v, key);
      if (s == "zero_deformation") {
        c.sim.init_mode = InitMode::ZeroDeformation;
      } else if (s == "balanced") {
        c.sim.init_mode = InitMode::Balanced;
      } else {
        throw ConfigError(key, "expected \"zero_deformation\" or \"balanced\"");
      }
    };
    t["sim.disturbance_d0"] = number([](Config& c) -> double& { return c.sim.disturbance.d0; });
    t["sim.disturbance_fmin"] = number([](Config& c) -> double& { return c.sim.disturbance.freq_min; });
    t["sim.disturbance_fmax"] = number([](Config& c) -> double& { return c.sim.disturbance.freq_max; });
    t["sim.disturbance_harmonics"] = [](Config& c, const Value& v, const std::string& key) {
      const std::uint64_t n = as_u64(v, key);
      if (n > 64) throw ConfigError(key, "must be in [1, 64]");
      c.sim.disturbance.num_harmonics = static_cast<int>(n);
    };
    return t;
  }();
  return table;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Strips a trailing comment that is not inside a quoted string.
std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

Value parse_value(const std::string& raw, const std::string& key) {
  Value v;
  if (raw.empty()) throw ConfigError(key, "missing value");
  if (raw.front() == '"') {
    if (raw.size() < 2 || raw.back() != '"') throw ConfigError(key, "unterminated string");
    v.kind = Value::Kind::String;
    for (std::size_t i = 1; i + 1 < raw.size(); ++i) {
      if (raw[i] == '\\' && i + 2 < raw.size()) ++i;
      v.text.push_back(raw[i]);
    }
    return v;
  }
  if (raw == "true" || raw == "false") {
    v.kind = Value::Kind::Bool;
    v.flag = raw == "true";
    return v;
  }
  v.text = raw;
  return v;
}

Config parse_impl(const std::string& text, const std::filesystem::path& base_dir) {
  static const std::set<std::string> sections = {"limb", "sea", "gains", "trigger", "trajectory", "sim"};
  Config cfg;
  std::set<std::string> seen;
  std::string section;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string body = trim(strip_comment(line));
    if (body.empty()) continue;
    if (body.front() == '[') {
      if (body.back() != ']') throw ConfigError("", "line " + std::to_string(lineno) + ": bad section header");
      section = trim(body.substr(1, body.size() - 2));
      if (!sections.count(section)) throw ConfigError(section, "unknown section");
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("", "line " + std::to_string(lineno) + ": expected key = value");
    }
    std::string key = trim(body.substr(0, eq));
    if (key.find('.') == std::string::npos) {
      if (section.empty()) throw ConfigError(key, "key outside of a section");
      key = section + "." + key;
    }
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError(key, "unknown key");
    if (!seen.insert(key).second) throw ConfigError(key, "duplicate key");
    it->second(cfg, parse_value(trim(body.substr(eq + 1)), key), key);
  }

  LimbParams& p = cfg.model.limb;
  if (!seen.count("limb.dim1")) p.dim1 = p.dim3 * std::cos(p.sigma1);
  if (!seen.count("limb.dim2")) p.dim2 = p.dim3 * std::sin(p.sigma1);
  if (!seen.count("limb.dim6")) p.dim6 = p.dim8 * std::cos(p.sigma2);
  if (!seen.count("limb.dim7")) p.dim7 = p.dim8 * std::sin(p.sigma2);
  if (cfg.model.sea.reference_lengths &&
      seen.count("sea.reference_length1") != seen.count("sea.reference_length2")) {
    throw ConfigError("sea.reference_length1", "set both reference lengths or neither");
  }
  if (cfg.trajectory_file) {
    std::filesystem::path fp(*cfg.trajectory_file);
    if (fp.is_relative()) fp = base_dir / fp;
    cfg.trajectory_file = fp.lexically_normal().string();
    cfg.model.trajectory = Trajectory(TabulatedTrajectory::load_csv(fp.string()));
  }
  cfg.model.trigger.c = cfg.model.gains.c;
  validate_config(cfg);
  return cfg;
}

}  // namespace

void validate_config(const Config& cfg) {
  cfg.model.validate();
  cfg.sim.validate();
  const LimbParams& p = cfg.model.limb;
  if (!cfg.model.trajectory.tabulated()) {
    const GaitSpec& g = cfg.model.trajectory.gait();
    if (g.hip_offset - g.hip_amplitude < p.joint_min[0] || g.hip_offset + g.hip_amplitude > p.joint_max[0]) {
      throw ConfigError("trajectory.hip_amplitude", "hip reference leaves [joint1_min, joint1_max]");
    }
    if (g.knee_offset - g.knee_amplitude < p.joint_min[1] ||
        g.knee_offset + g.knee_amplitude > p.joint_max[1]) {
      throw ConfigError("trajectory.knee_amplitude", "knee reference leaves [joint2_min, joint2_max]");
    }
  }
  if (cfg.check_rho_bound) {
    const double g0 = cfg.model.trigger.g0_bound ? *cfg.model.trigger.g0_bound : input_gain_bound(p);
    const double need = g0 * cfg.model.trigger.d0_bound + cfg.model.trigger.eta;
    if (cfg.model.gains.rho < need) {
      throw ConfigError("gains.rho", "below g0*d0 + eta = " + format_double(need));
    }
  }
}

Config parse_config(const std::string& text) { return parse_impl(text, std::filesystem::current_path()); }

Config load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", "cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_impl(ss.str(), std::filesystem::absolute(path).parent_path());
}

Config default_config() { return parse_config(""); }

std::string dump_config(const Config& cfg) {
  std::ostringstream o;
  auto kv = [&](const char* k, double v) { o << k << " = " << format_double(v) << '\n'; };
  auto ks = [&](const char* k, const std::string& v) { o << k << " = \"" << v << "\"\n"; };
  const LimbParams& p = cfg.model.limb;
  o << "[limb]\n";
  kv("m1", p.m1);
  kv("m2", p.m2);
  kv("I1", p.I1);
  kv("I2", p.I2);
  kv("L1", p.L1);
  kv("L2", p.L2);
  kv("R1", p.R1);
  kv("R2", p.R2);
  kv("B1", p.B1);
  kv("B2", p.B2);
  kv("k1", p.k1);
  kv("k2", p.k2);
  kv("g", p.g);
  kv("sigma1", p.sigma1);
  kv("alpha1", p.alpha1);
  kv("sigma2", p.sigma2);
  kv("alpha2", p.alpha2);
  kv("dim1", p.dim1);
  kv("dim2", p.dim2);
  kv("dim3", p.dim3);
  kv("dim4", p.dim4);
  kv("dim5", p.dim5);
  kv("dim6", p.dim6);
  kv("dim7", p.dim7);
  kv("dim8", p.dim8);
  kv("dim9", p.dim9);
  kv("joint1_min", p.joint_min[0]);
  kv("joint1_max", p.joint_max[0]);
  kv("joint2_min", p.joint_min[1]);
  kv("joint2_max", p.joint_max[1]);

  const SeaParams& s = cfg.model.sea;
  o << "\n[sea]\n";
  kv("motor_gain_damping", s.motor_gain_damping);
  kv("slew_limit", s.slew_limit);
  if (s.reference_lengths) {
    kv("reference_length1", (*s.reference_lengths)[0]);
    kv("reference_length2", (*s.reference_lengths)[1]);
  }

  const GainSet& g = cfg.model.gains;
  o << "\n[gains]\n";
  kv("c", g.c);
  kv("rho", g.rho);
  kv("kp1", g.kp1);
  kv("kp2", g.kp2);
  kv("boundary_layer", g.boundary_layer);
  kv("coupling", g.coupling);
  ks("vx_rate", g.vx_rate == VxRate::BackwardDifference ? "difference" : "zero");
  o << "check_rho_bound = " << (cfg.check_rho_bound ? "true" : "false") << '\n';

  const TriggerParams& t = cfg.model.trigger;
  o << "\n[trigger]\n";
  kv("eta", t.eta);
  kv("L", t.L_const);
  kv("error_radius", t.error_radius);
  kv("lambda", t.lambda_est);
  kv("h", t.h_bound);
  kv("d0", t.d0_bound);
  if (t.g0_bound) kv("g0", *t.g0_bound);

  o << "\n[trajectory]\n";
  if (cfg.trajectory_file) {
    ks("file", *cfg.trajectory_file);
  } else {
    const GaitSpec& gs = cfg.model.trajectory.gait();
    kv("period", gs.period);
    kv("hip_amplitude", gs.hip_amplitude);
    kv("hip_offset", gs.hip_offset);
    kv("knee_amplitude", gs.knee_amplitude);
    kv("knee_offset", gs.knee_offset);
    kv("phase_shift", gs.phase_shift);
  }

  const SimConfig& sc = cfg.sim;
  o << "\n[sim]\n";
  kv("duration", sc.duration);
  kv("integration_step", sc.integration_step);
  kv("sampling_period", sc.sampling_period);
  ks("controller", sc.controller_kind == ControllerKind::TimeTriggered ? "tt-smc" : "et-smc");
  o << "seed = " << sc.seed << '\n';
  ks("hold_mode", sc.hold_mode == HoldMode::VxOnly ? "vx_only" : "full_uv");
  ks("init_mode", sc.init_mode == InitMode::ZeroDeformation ? "zero_deformation" : "balanced");
  kv("disturbance_d0", sc.disturbance.d0);
  o << "disturbance_harmonics = " << sc.disturbance.num_harmonics << '\n';
  kv("disturbance_fmin", sc.disturbance.freq_min);
  kv("disturbance_fmax", sc.disturbance.freq_max);
  kv("divergence_norm", sc.divergence_norm);
  return o.str();
}

}  // namespace etsmc
