#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rpbeats/dynamics.hpp"
#include "rpbeats/hamiltonian.hpp"
#include "rpbeats/relaxation.hpp"

namespace rpbeats {

enum class GateKind { X, H, Z, Rx, Rz, U3, CNOT, CRx, Delay, Unitary };

const char* gate_name(GateKind k);

struct Gate {
  GateKind kind = GateKind::X;
  std::vector<int> sites;
  std::vector<double> params;  // angles in rad, Delay: duration in ns
  std::optional<double> probability;
  Eigen::MatrixXcd matrix;  // Unitary only

  // Matrix on `sites` (first site most significant). Delay is the identity.
  Eigen::MatrixXcd unitary() const;
};

struct Circuit {
  int site_count = 0;
  std::vector<Gate> gates;
  std::vector<int> measured_sites;

  Circuit() = default;
  explicit Circuit(int n) : site_count(n) {}

  Circuit& add(Gate g);
  Circuit& x(int s) { return add({GateKind::X, {s}, {}, {}, {}}); }
  Circuit& h(int s) { return add({GateKind::H, {s}, {}, {}, {}}); }
  Circuit& z(int s) { return add({GateKind::Z, {s}, {}, {}, {}}); }
  Circuit& rx(int s, double theta) { return add({GateKind::Rx, {s}, {theta}, {}, {}}); }
  Circuit& rz(int s, double theta) { return add({GateKind::Rz, {s}, {theta}, {}, {}}); }
  Circuit& u3(int s, double theta, double phi, double lambda) {
    return add({GateKind::U3, {s}, {theta, phi, lambda}, {}, {}});
  }
  Circuit& cnot(int control, int target) { return add({GateKind::CNOT, {control, target}, {}, {}, {}}); }
  Circuit& crx(int control, int target, double theta) { return add({GateKind::CRx, {control, target}, {theta}, {}, {}}); }
  Circuit& delay(int s, double duration_ns) { return add({GateKind::Delay, {s}, {duration_ns}, {}, {}}); }
  Circuit& unitary(std::vector<int> sites, Eigen::MatrixXcd m) {
    return add({GateKind::Unitary, std::move(sites), {}, {}, std::move(m)});
  }
  // Gate applied with probability p.
  Circuit& maybe(Gate g, double p);
  // Appends gates of `other` with its site k mapped to site_map[k].
  Circuit& append(const Circuit& other, const std::vector<int>& site_map);
  Circuit& measure(std::vector<int> sites);

  void validate() const;
  std::size_t probabilistic_count() const;
  // One gate per line: GATE kind sites params [prob]
  std::string dump() const;
};

struct SyntheticQubitNoise {
  std::vector<double> T1, T2;  // ns per site; infinite disables
  double gate_duration = 0.0;  // ns for every non-delay gate
  double identity_duration = 35.5;
  std::vector<double> drift_phase_rate;  // rad/ns per site, accrued during delays

  static SyntheticQubitNoise uniform(int n_sites, double T1, double T2);
  void validate(int n_sites) const;
};

inline constexpr int kMaxStatevectorSites = 12;
inline constexpr int kMaxNoisyDensitySites = 6;
inline constexpr int kMaxDensitySites = 10;

Eigen::VectorXcd run_statevector(const Circuit& c, const std::optional<Eigen::VectorXcd>& init = std::nullopt);
// Probabilistic gates are expanded exactly over all configurations.
Eigen::MatrixXcd run_density(const Circuit& c, const SyntheticQubitNoise* noise = nullptr,
                             const std::optional<Eigen::MatrixXcd>& init = std::nullopt, int threads = 1);
Eigen::MatrixXcd circuit_unitary(const Circuit& c);

// Probability that `sites` read out the bit pattern `bits` (first site most significant).
double outcome_probability(const Eigen::VectorXcd& psi, int n_sites, const std::vector<int>& sites, unsigned bits);
double outcome_probability(const Eigen::MatrixXcd& rho, int n_sites, const std::vector<int>& sites, unsigned bits);

// X, H, CNOT preparing (|01> - |10>)/sqrt2 from |00>; unprep maps it to |11>.
Circuit singlet_prep(int n_sites, int a, int b);
Circuit singlet_unprep(int n_sites, int a, int b);

// Ancilla realization of the thermal channel on `target`; ancilla starts in |0>.
Circuit kraus_circuit(const RelaxationParams& params, int n_sites, int target, int ancilla);

// Hadamard on each ancilla (sites n..2n-1) and CNOT onto nuclear site k.
Circuit purification_circuit(int n_nuclear_sites);

// Pure nuclear basis state, singlet prep, evolution by exp(-iHt).
Circuit sector_evolution_circuit(const BlockHamiltonian& H, int nuclear_index, double t);
// Same with the nuclear register purified by appended ancillas.
Circuit purified_evolution_circuit(const BlockHamiltonian& H, double t);

// Default order used for the partitioned Pauli strings.
std::vector<PauliTerm> trotter_order(const std::vector<PauliTerm>& terms);
Circuit pauli_exponential(const PauliTerm& term, double dt);
// First-order product formula, terms applied in the given order each step.
Circuit trotterized_pauli_evolution(const std::vector<PauliTerm>& terms, double t, int steps);

// Singlet prep, delays with optional echo X pulses, optional unprep, measure.
Circuit echo_pulse_circuit(int N, double identity_duration, bool echoes = true, bool unprep = true);
// N = T_qubit / (T_RP * t_identity) * t.
double delay_count(double T_qubit, double T_rp, double t_identity, double t);
int echo_delay_count(double T_qubit, double T_rp, double t_identity, double t);

// Singlet prep, Rz(theta) with theta = 2 acos(sqrt(S)), optional delay on both
// sites, unprep, measure.
Circuit rz_encode_circuit(double S, double noise_delay = 0.0);
std::vector<Circuit> rz_encode_trace(const TimeSeries& S, double noise_delay = 0.0);

}  // namespace rpbeats
