#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "rpbeats/dynamics.hpp"
#include "rpbeats/hamiltonian.hpp"
#include "rpbeats/postprocess.hpp"

namespace rpbeats {

enum class NoiseMethod { None, Kraus, KrausCircuit, PerGate, EchoSynthetic };
const char* to_string(NoiseMethod m);

struct RegimeSettings {
  double field_t = 0.0;
  double T1 = kInfinity;
  double T2 = kInfinity;
};

struct InitialState {
  bool mixed = true;
  // one group: |I,m>; two groups: the I2 sector (maximally mixed inside it)
  std::optional<HalfInt> I, m, I2;
};

// Synthetic hardware used by the echo-synthetic method.
struct HardwareSettings {
  double T1 = 100000.0;  // ns
  double T2 = 100000.0;
  double identity_ns = 35.5;
  double block_ns = 1000.0;  // duration of the coherent block on the device
};

struct ExperimentConfig {
  std::string name = "custom";
  std::vector<NuclearGroup> groups;
  double g1 = 2.0023, g2 = 2.0023;
  RegimeSettings zero{0.0, kInfinity, kInfinity};
  RegimeSettings high{0.3, kInfinity, kInfinity};
  FieldRegime field_regime = FieldRegime::Zero;
  InitialState initial_state;
  AverageMode average = AverageMode::Exact;
  NoiseMethod noise = NoiseMethod::None;
  double t_start = 0.0, t_end = 100.0, t_step = 0.1;
  std::optional<FluorescenceParams> postprocess;
  HardwareSettings hardware;
  std::string output_path;

  SpinSystemSpec spec(FieldRegime regime) const;
  std::vector<double> times() const;
  void validate() const;
};

ExperimentConfig parse_config(const std::string& yaml_text);
ExperimentConfig load_config(const std::string& path);
ExperimentConfig preset_config(const std::string& name);
std::vector<std::string> preset_names();
// Canonical YAML; parse_config(serialize_config(c)) reproduces c.
std::string serialize_config(const ExperimentConfig& c);
// FNV-1a over the canonical serialization, as 16 hex digits.
std::string config_hash(const ExperimentConfig& c);

}  // namespace rpbeats
