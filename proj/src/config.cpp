#include "rpbeats/config.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "rpbeats/errors.hpp"
#include "rpbeats/units.hpp"

#ifndef RPBEATS_PRESET_DIR
#define RPBEATS_PRESET_DIR "presets"
#endif

namespace rpbeats {

const char* to_string(NoiseMethod m) {
  switch (m) {
    case NoiseMethod::None: return "none";
    case NoiseMethod::Kraus: return "kraus";
    case NoiseMethod::KrausCircuit: return "kraus-circuit";
    case NoiseMethod::PerGate: return "per-gate";
    case NoiseMethod::EchoSynthetic: return "echo-synthetic";
  }
  return "?";
}

namespace {

int line_of(const YAML::Node& n) { return n.Mark().line >= 0 ? n.Mark().line + 1 : -1; }

void check_keys(const YAML::Node& n, const std::set<std::string>& allowed, const std::string& where) {
  if (!n.IsMap()) throw ConfigError(where + " must be a mapping", line_of(n));
  for (const auto& kv : n) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where, line_of(kv.first));
  }
}

double as_double(const YAML::Node& n, const std::string& what) {
  if (!n.IsScalar()) throw ConfigError(what + " must be a number", line_of(n));
  const auto s = n.Scalar();
  if (s == "inf" || s == "infinity" || s == ".inf") return kInfinity;
  try {
    return n.as<double>();
  } catch (const YAML::Exception&) {
    throw ConfigError(what + " must be a number, got '" + s + "'", line_of(n));
  }
}

int as_int(const YAML::Node& n, const std::string& what) {
  try {
    return n.as<int>();
  } catch (const YAML::Exception&) {
    throw ConfigError(what + " must be an integer", line_of(n));
  }
}

HalfInt as_half(const YAML::Node& n, const std::string& what) {
  if (!n.IsScalar()) throw ConfigError(what + " must be a number", line_of(n));
  const auto s = n.Scalar();
  const auto slash = s.find('/');
  if (slash != std::string::npos) {
    if (s.substr(slash + 1) != "2") throw ConfigError(what + " must be an integer or half-integer", line_of(n));
    return HalfInt::from_twice(std::atoi(s.substr(0, slash).c_str()));
  }
  const double v = as_double(n, what);
  const double tw = 2.0 * v;
  if (std::abs(tw - std::round(tw)) > 1e-12) throw ConfigError(what + " must be an integer or half-integer", line_of(n));
  return HalfInt::from_twice(static_cast<int>(std::lround(tw)));
}

std::string as_string(const YAML::Node& n, const std::string& what) {
  if (!n.IsScalar()) throw ConfigError(what + " must be a string", line_of(n));
  return n.Scalar();
}

RegimeSettings parse_regime(const YAML::Node& n, const std::string& where) {
  check_keys(n, {"field_t", "T1_ns", "T2_ns"}, where);
  RegimeSettings r;
  if (n["field_t"]) r.field_t = as_double(n["field_t"], where + ".field_t");
  if (n["T1_ns"]) r.T1 = as_double(n["T1_ns"], where + ".T1_ns");
  if (n["T2_ns"]) r.T2 = as_double(n["T2_ns"], where + ".T2_ns");
  return r;
}

std::string fmt_double(double v) {
  if (std::isinf(v)) return ".inf";
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

SpinSystemSpec ExperimentConfig::spec(FieldRegime regime) const {
  const auto& r = regime == FieldRegime::Zero ? zero : high;
  SpinSystemSpec s;
  s.groups = groups;
  s.g1 = g1;
  s.g2 = g2;
  s.field_t = r.field_t;
  s.relaxation = {r.T1, r.T2};
  return s;
}

std::vector<double> ExperimentConfig::times() const { return uniform_grid(t_start, t_end, t_step); }

void ExperimentConfig::validate() const {
  try {
    spec(FieldRegime::Zero).validate();
    spec(FieldRegime::High).validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("system: ") + e.what());
  }
  if (groups.size() == 2 && groups[0].count > 2) throw ConfigError("system.groups: first group must have at most 2 nuclei");
  if (groups.size() == 1 && groups[0].count > 16) throw ConfigError("system.groups: at most 16 nuclei supported");
  if (!(t_step > 0) || t_end < t_start || t_start < 0) throw ConfigError("time_grid: need 0 <= start <= end and step > 0");
  if ((t_end - t_start) / t_step > 1e6) throw ConfigError("time_grid: too many samples");
  if (!initial_state.mixed) {
    if (groups.size() == 1 && (!initial_state.I || !initial_state.m))
      throw ConfigError("initial_state: one-group systems need I and m");
    if (groups.size() == 2 && !initial_state.I2) throw ConfigError("initial_state: two-group systems need I2");
    const int n0 = groups[0].count;
    const auto reachable = [n0](HalfInt I) { return I.twice() >= 0 && I.twice() <= n0 && (n0 - I.twice()) % 2 == 0; };
    if (groups.size() == 1) {
      const HalfInt I = *initial_state.I, m = *initial_state.m;
      if (!reachable(I)) throw ConfigError("initial_state: I = " + I.str() + " not reachable with " + std::to_string(n0) + " nuclei");
      if (abs(m) > I || (I.twice() - m.twice()) % 2 != 0) throw ConfigError("initial_state: invalid m = " + m.str());
    } else if (!reachable(*initial_state.I2)) {
      throw ConfigError("initial_state: I2 = " + initial_state.I2->str() + " not reachable");
    }
  }
  if (postprocess) {
    try {
      postprocess->validate();
    } catch (const std::exception& e) {
      throw ConfigError(std::string("postprocess: ") + e.what());
    }
  }
  if (!(hardware.T1 > 0) || !(hardware.T2 > 0) || !(hardware.identity_ns > 0) || hardware.block_ns < 0)
    throw ConfigError("hardware: times must be positive");
  if (std::isfinite(hardware.T1) && hardware.T2 > 2 * hardware.T1) throw ConfigError("hardware: T2 exceeds 2*T1");
}

ExperimentConfig parse_config(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError("YAML syntax error: " + e.msg, e.mark.line + 1);
  }
  if (!root || root.IsNull()) throw ConfigError("empty configuration");
  check_keys(root, {"name", "system", "regimes", "field_regime", "initial_state", "average", "noise_method", "time_grid",
                    "postprocess", "hardware", "output"},
             "top level");
  ExperimentConfig c;
  if (root["name"]) c.name = as_string(root["name"], "name");

  const auto sys = root["system"];
  if (!sys) throw ConfigError("missing 'system' section");
  check_keys(sys, {"g1", "g2", "groups"}, "system");
  if (sys["g1"]) c.g1 = as_double(sys["g1"], "system.g1");
  if (sys["g2"]) c.g2 = as_double(sys["g2"], "system.g2");
  const auto groups = sys["groups"];
  if (!groups || !groups.IsSequence() || groups.size() == 0)
    throw ConfigError("system.groups must be a non-empty list", line_of(sys));
  for (const auto& g : groups) {
    check_keys(g, {"count", "hfc_mt", "hfc_gauss"}, "system.groups entry");
    if (!g["count"]) throw ConfigError("group needs 'count'", line_of(g));
    NuclearGroup ng;
    ng.count = as_int(g["count"], "count");
    if (g["hfc_mt"] && g["hfc_gauss"]) throw ConfigError("give either hfc_mt or hfc_gauss, not both", line_of(g));
    if (g["hfc_mt"]) ng.hfc_mt = as_double(g["hfc_mt"], "hfc_mt");
    else if (g["hfc_gauss"]) ng.hfc_mt = units::gauss_to_mt(as_double(g["hfc_gauss"], "hfc_gauss"));
    else throw ConfigError("group needs hfc_mt or hfc_gauss", line_of(g));
    if (ng.count < 1) throw ConfigError("group count must be >= 1", line_of(g["count"]));
    c.groups.push_back(ng);
  }
  if (c.groups.size() > 2) throw ConfigError("at most two nuclear groups are supported", line_of(groups));

  if (const auto reg = root["regimes"]) {
    check_keys(reg, {"zero", "high"}, "regimes");
    if (reg["zero"]) c.zero = parse_regime(reg["zero"], "regimes.zero");
    if (reg["high"]) c.high = parse_regime(reg["high"], "regimes.high");
  }
  if (const auto fr = root["field_regime"]) {
    const auto s = as_string(fr, "field_regime");
    if (s == "zero") c.field_regime = FieldRegime::Zero;
    else if (s == "high") c.field_regime = FieldRegime::High;
    else throw ConfigError("field_regime must be 'zero' or 'high'", line_of(fr));
  }
  if (const auto is = root["initial_state"]) {
    if (is.IsScalar()) {
      if (is.Scalar() != "mixed") throw ConfigError("initial_state must be 'mixed' or a mapping", line_of(is));
    } else {
      check_keys(is, {"I", "m", "I2"}, "initial_state");
      c.initial_state.mixed = false;
      if (is["I"]) c.initial_state.I = as_half(is["I"], "initial_state.I");
      if (is["m"]) c.initial_state.m = as_half(is["m"], "initial_state.m");
      if (is["I2"]) c.initial_state.I2 = as_half(is["I2"], "initial_state.I2");
    }
  }
  if (const auto av = root["average"]) {
    const auto s = as_string(av, "average");
    if (s == "exact") c.average = AverageMode::Exact;
    else if (s == "representative") c.average = AverageMode::Representative;
    else throw ConfigError("average must be 'exact' or 'representative'", line_of(av));
  }
  if (const auto nm = root["noise_method"]) {
    const auto s = as_string(nm, "noise_method");
    bool found = false;
    for (auto m : {NoiseMethod::None, NoiseMethod::Kraus, NoiseMethod::KrausCircuit, NoiseMethod::PerGate,
                   NoiseMethod::EchoSynthetic})
      if (s == to_string(m)) {
        c.noise = m;
        found = true;
      }
    if (!found)
      throw ConfigError("noise_method must be one of none, kraus, kraus-circuit, per-gate, echo-synthetic", line_of(nm));
  }
  if (const auto tg = root["time_grid"]) {
    check_keys(tg, {"start", "end", "step"}, "time_grid");
    if (tg["start"]) c.t_start = as_double(tg["start"], "time_grid.start");
    if (tg["end"]) c.t_end = as_double(tg["end"], "time_grid.end");
    if (tg["step"]) c.t_step = as_double(tg["step"], "time_grid.step");
  }
  if (const auto pp = root["postprocess"]) {
    check_keys(pp, {"theta", "tau_f", "t0", "t_g"}, "postprocess");
    FluorescenceParams f;
    if (pp["theta"]) f.theta = as_double(pp["theta"], "postprocess.theta");
    if (pp["tau_f"]) f.tau_f = as_double(pp["tau_f"], "postprocess.tau_f");
    if (pp["t0"]) f.t0 = as_double(pp["t0"], "postprocess.t0");
    if (pp["t_g"]) f.t_g = as_double(pp["t_g"], "postprocess.t_g");
    c.postprocess = f;
  }
  if (const auto hw = root["hardware"]) {
    check_keys(hw, {"T1_ns", "T2_ns", "identity_ns", "block_ns"}, "hardware");
    if (hw["T1_ns"]) c.hardware.T1 = as_double(hw["T1_ns"], "hardware.T1_ns");
    if (hw["T2_ns"]) c.hardware.T2 = as_double(hw["T2_ns"], "hardware.T2_ns");
    if (hw["identity_ns"]) c.hardware.identity_ns = as_double(hw["identity_ns"], "hardware.identity_ns");
    if (hw["block_ns"]) c.hardware.block_ns = as_double(hw["block_ns"], "hardware.block_ns");
  }
  if (root["output"]) c.output_path = as_string(root["output"], "output");
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

namespace {
std::filesystem::path preset_dir() {
  if (const char* env = std::getenv("RPBEATS_PRESETS")) return env;
  return RPBEATS_PRESET_DIR;
}
}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  std::error_code ec;
  for (const auto& e : std::filesystem::directory_iterator(preset_dir(), ec))
    if (e.path().extension() == ".yaml") out.push_back(e.path().stem().string());
  std::sort(out.begin(), out.end());
  return out;
}

ExperimentConfig preset_config(const std::string& name) {
  const auto path = preset_dir() / (name + ".yaml");
  if (!std::filesystem::exists(path)) {
    std::string known;
    for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
    throw ConfigError("unknown preset '" + name + "' (available: " + known + ")");
  }
  return load_config(path.string());
}

std::string serialize_config(const ExperimentConfig& c) {
  std::ostringstream os;
  os << "name: " << c.name << "\n";
  os << "system:\n  g1: " << fmt_double(c.g1) << "\n  g2: " << fmt_double(c.g2) << "\n  groups:\n";
  for (const auto& g : c.groups) os << "    - count: " << g.count << "\n      hfc_mt: " << fmt_double(g.hfc_mt) << "\n";
  os << "regimes:\n";
  for (auto [label, r] : {std::pair{"zero", c.zero}, std::pair{"high", c.high}})
    os << "  " << label << ": {field_t: " << fmt_double(r.field_t) << ", T1_ns: " << fmt_double(r.T1)
       << ", T2_ns: " << fmt_double(r.T2) << "}\n";
  os << "field_regime: " << to_string(c.field_regime) << "\n";
  if (c.initial_state.mixed) {
    os << "initial_state: mixed\n";
  } else {
    os << "initial_state: {";
    std::string sep;
    if (c.initial_state.I) { os << "I: " << c.initial_state.I->str(); sep = ", "; }
    if (c.initial_state.m) { os << sep << "m: " << c.initial_state.m->str(); sep = ", "; }
    if (c.initial_state.I2) os << sep << "I2: " << c.initial_state.I2->str();
    os << "}\n";
  }
  os << "average: " << to_string(c.average) << "\n";
  os << "noise_method: " << to_string(c.noise) << "\n";
  os << "time_grid: {start: " << fmt_double(c.t_start) << ", end: " << fmt_double(c.t_end)
     << ", step: " << fmt_double(c.t_step) << "}\n";
  if (c.postprocess)
    os << "postprocess: {theta: " << fmt_double(c.postprocess->theta) << ", tau_f: " << fmt_double(c.postprocess->tau_f)
       << ", t0: " << fmt_double(c.postprocess->t0) << ", t_g: " << fmt_double(c.postprocess->t_g) << "}\n";
  os << "hardware: {T1_ns: " << fmt_double(c.hardware.T1) << ", T2_ns: " << fmt_double(c.hardware.T2)
     << ", identity_ns: " << fmt_double(c.hardware.identity_ns) << ", block_ns: " << fmt_double(c.hardware.block_ns)
     << "}\n";
  os << "output: \"" << c.output_path << "\"\n";
  return os.str();
}

std::string config_hash(const ExperimentConfig& c) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : serialize_config(c)) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

}  // namespace rpbeats
