#include "rpbeats/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "rpbeats/circuit.hpp"
#include "rpbeats/errors.hpp"
#include "rpbeats/linalg.hpp"
#include "rpbeats/noise_correction.hpp"
#include "rpbeats/parallel.hpp"
#include "rpbeats/relaxation.hpp"
#include "rpbeats/spin_algebra.hpp"

namespace rpbeats {

namespace {

const RegimeSettings& regime_of(const ExperimentConfig& c, FieldRegime r) { return r == FieldRegime::Zero ? c.zero : c.high; }

// Uniform mixture over the non-padded states of one two-group sector.
ElectronTrace sector_mixture(const BlockHamiltonian& block, const std::vector<double>& times, int threads) {
  const Propagator prop(block.matrix);
  std::vector<int> all(static_cast<std::size_t>(block.nuclear_dim));
  std::iota(all.begin(), all.end(), 0);
  ElectronTrace tr = electron_trace_mixed(prop, block.nuclear_dim, all, times, threads);
  const double nd = block.nuclear_dim;
  const double real = nd - block.padded_nuclear;
  const Eigen::Matrix4cd PS = singlet_projector();
  for (auto& r : tr.rho) r = (nd * r - block.padded_nuclear * PS) / real;
  return tr;
}

ElectronTrace pure_one_group(const SpinSystemSpec& spec, HalfInt I, HalfInt m, const std::vector<double>& times) {
  const int N = spec.groups[0].count;
  const auto row = spin_addition_counts(N);
  if (!row.count(I) || abs(m) > I || !(I - m).is_integer())
    throw ConfigError("initial_state: |I=" + I.str() + ", m=" + m.str() + "> does not exist for " + std::to_string(N) +
                      " nuclei");
  const auto H = build_reduced_one_group(spec);
  const Propagator prop(H.matrix);
  return electron_trace(prop, initial_sector_vector(reduced_index(N, I, m), H.nuclear_dim), times);
}

Eigen::Matrix4cd bell_diagonal(const MeasurementStats& s) {
  const double r = 1.0 / std::sqrt(2.0);
  const Eigen::Vector4cd S = singlet_vector();
  const Eigen::Vector4cd T0(0, r, r, 0);
  Eigen::Matrix4cd rho = s.S * S * S.adjoint() + s.T0 * T0 * T0.adjoint();
  rho(0, 0) += s.Tp;
  rho(3, 3) += s.Tm;
  return rho;
}

Eigen::Matrix4cd kraus_circuit_state(const Eigen::Matrix4cd& rho_e, double t, double T1, double T2) {
  const auto params = RelaxationParams::from_times(t, T1, T2);
  Circuit circ(4);
  circ.append(kraus_circuit(params, 4, 1, 2), {0, 1, 2, 3});
  circ.append(kraus_circuit(params, 4, 0, 3), {0, 1, 2, 3});
  Eigen::MatrixXcd anc = Eigen::MatrixXcd::Zero(4, 4);
  anc(0, 0) = 1.0;
  const Eigen::MatrixXcd out = run_density(circ, nullptr, kron(rho_e, anc));
  return partial_trace_keep(out, 4, {0, 1});
}

Eigen::Matrix4cd delayed_state(const Eigen::Matrix4cd& rho_e, double t, const SyntheticQubitNoise& noise) {
  Circuit circ(2);
  circ.delay(0, t).delay(1, t);
  return run_density(circ, &noise, Eigen::MatrixXcd(rho_e));
}

// Noisy Bell statistics of the echo-synthetic procedure at one time point.
MeasurementStats echo_synthetic_stats(const Eigen::Matrix4cd& rho_e, double t, const RegimeSettings& r,
                                      const HardwareSettings& hw) {
  const auto qubit = SyntheticQubitNoise::uniform(2, hw.T1, hw.T2);
  MeasurementStats undamped = bell_stats(rho_e);
  if (hw.block_ns > 0) {
    const auto measured = bell_stats(delayed_state(rho_e, hw.block_ns, qubit));
    const auto reference = bell_stats(delayed_state(singlet_projector(), hw.block_ns, qubit));
    undamped = noise_correction(measured, reference);
  }
  MeasurementStats channel;
  if (std::isfinite(r.T1) && r.T1 == r.T2) {
    const double Tq = 0.5 * (hw.T1 + hw.T2);
    const int N = echo_delay_count(Tq, r.T1, hw.identity_ns, t);
    const Eigen::MatrixXcd out = run_density(echo_pulse_circuit(N, hw.identity_ns, true, false), &qubit);
    channel = bell_stats(out);
  } else {
    ElectronTrace one{{t}, {singlet_projector()}};
    channel = bell_stats(relax(one, r.T1, r.T2, RelaxSites::Both).rho[0]);
  }
  return inject_noise_stats(undamped, channel);
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(15) << v;
  return os.str();
}

}  // namespace

ElectronTrace noiseless_trace(const ExperimentConfig& c, FieldRegime regime, int threads) {
  const auto spec = c.spec(regime);
  const auto times = c.times();
  if (c.initial_state.mixed) return mixed_electron_trace(spec, times, c.average, regime, threads);
  if (spec.groups.size() == 1) return pure_one_group(spec, *c.initial_state.I, *c.initial_state.m, times);
  const auto sectors = two_group_sectors(spec);
  const HalfInt I2 = *c.initial_state.I2;
  if (std::find(sectors.begin(), sectors.end(), I2) == sectors.end())
    throw ConfigError("initial_state: no sector I2=" + I2.str());
  return sector_mixture(build_two_group_block(I2, spec), times, threads);
}

ElectronTrace apply_noise_method(const ExperimentConfig& c, FieldRegime regime, const ElectronTrace& clean, int threads) {
  const auto& r = regime_of(c, regime);
  ElectronTrace out = clean;
  const auto n = clean.times.size();
  switch (c.noise) {
    case NoiseMethod::None:
      return out;
    case NoiseMethod::Kraus:
      return relax(clean, r.T1, r.T2, RelaxSites::Both);
    case NoiseMethod::KrausCircuit:
      parallel_for(n, threads, [&](std::size_t k) {
        out.rho[k] = kraus_circuit_state(clean.rho[k], clean.times[k], r.T1, r.T2);
      });
      return out;
    case NoiseMethod::PerGate: {
      const auto noise = SyntheticQubitNoise::uniform(2, r.T1, r.T2);
      parallel_for(n, threads, [&](std::size_t k) { out.rho[k] = delayed_state(clean.rho[k], clean.times[k], noise); });
      return out;
    }
    case NoiseMethod::EchoSynthetic:
      parallel_for(n, threads, [&](std::size_t k) {
        out.rho[k] = bell_diagonal(echo_synthetic_stats(clean.rho[k], clean.times[k], r, c.hardware));
      });
      return out;
  }
  return out;
}

TimeSeries run_simulate(const ExperimentConfig& c, FieldRegime regime, int threads) {
  c.validate();
  auto s = singlet_series(apply_noise_method(c, regime, noiseless_trace(c, regime, threads), threads), "S");
  return s;
}

std::vector<TimeSeries> run_sector_traces(const ExperimentConfig& c, FieldRegime regime, int threads) {
  c.validate();
  const auto spec = c.spec(regime);
  const auto times = c.times();
  std::vector<TimeSeries> out;
  if (spec.groups.size() == 1) {
    const auto row = spin_addition_counts(spec.groups[0].count);
    for (auto it = row.rbegin(); it != row.rend(); ++it) {
      const auto tr = pure_one_group(spec, it->first, it->first, times);
      out.push_back(singlet_series(apply_noise_method(c, regime, tr, threads), "I=" + it->first.str()));
    }
  } else {
    const auto sectors = two_group_sectors(spec);
    for (const auto& I2 : sectors) {
      const auto tr = sector_mixture(build_two_group_block(I2, spec), times, threads);
      out.push_back(singlet_series(apply_noise_method(c, regime, tr, threads), "I2=" + I2.str()));
    }
  }
  return out;
}

TrmfeResult run_trmfe(const ExperimentConfig& c, int threads) {
  if (!c.postprocess) throw ConfigError("trmfe needs a 'postprocess' section");
  TrmfeResult r;
  r.S_B = run_simulate(c, FieldRegime::High, threads);
  r.S_0 = run_simulate(c, FieldRegime::Zero, threads);
  r.ratio = observed_ratio(r.S_B, r.S_0, *c.postprocess);
  return r;
}

std::vector<std::pair<std::string, std::string>> run_metadata(const ExperimentConfig& c) {
  return {{"name", c.name},
          {"units", "time_ns in ns"},
          {"spec_hash", config_hash(c)},
          {"noise_method", to_string(c.noise)},
          {"average", to_string(c.average)},
          {"seed", "none"}};
}

CsvTable series_table(const TimeSeries& main, const std::vector<TimeSeries>& extra) {
  CsvTable t;
  t.columns = {"time_ns", "value"};
  for (const auto& e : extra) {
    if (e.times.size() != main.times.size()) throw InvalidArgument("extra column has a different length");
    t.columns.push_back(e.label);
  }
  for (std::size_t k = 0; k < main.times.size(); ++k) {
    std::vector<double> row{main.times[k], main.values[k]};
    for (const auto& e : extra) row.push_back(e.values[k]);
    t.rows.push_back(std::move(row));
  }
  return t;
}

void write_csv(std::ostream& os, const CsvTable& t) {
  for (const auto& [k, v] : t.metadata) os << "# " << k << ": " << v << "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << fmt(row[i]);
    os << "\n";
  }
}

void write_csv_file(const std::string& path, const CsvTable& t) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write '" + path + "'");
  write_csv(out, t);
}

TimeSeries read_series_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  TimeSeries ts;
  ts.label = path;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double t, v;
    if (!(ls >> t >> v)) {
      if (ts.times.empty()) continue;  // header row
      throw InvalidArgument(path + ": line " + std::to_string(lineno) + " is not numeric");
    }
    if (!ts.times.empty() && t <= ts.times.back())
      throw InvalidArgument(path + ": times must increase (line " + std::to_string(lineno) + ")");
    ts.times.push_back(t);
    ts.values.push_back(v);
  }
  if (ts.times.size() < 2) throw InvalidArgument(path + ": need at least two samples");
  return ts;
}

double rms_deviation(const TimeSeries& model, const TimeSeries& ref) {
  double acc = 0.0;
  std::size_t n = 0;
  for (std::size_t k = 0; k < model.times.size(); ++k) {
    const double t = model.times[k];
    if (t < ref.times.front() || t > ref.times.back()) continue;
    const auto hi = std::lower_bound(ref.times.begin(), ref.times.end(), t);
    const auto j = static_cast<std::size_t>(hi - ref.times.begin());
    double v;
    if (ref.times[j] == t) {
      v = ref.values[j];
    } else {
      const double w = (t - ref.times[j - 1]) / (ref.times[j] - ref.times[j - 1]);
      v = (1 - w) * ref.values[j - 1] + w * ref.values[j];
    }
    acc += (model.values[k] - v) * (model.values[k] - v);
    ++n;
  }
  if (n == 0) throw InvalidArgument("no overlap between model and comparison data");
  return std::sqrt(acc / static_cast<double>(n));
}

}  // namespace rpbeats
