#include "rpbeats/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "rpbeats/errors.hpp"
#include "rpbeats/linalg.hpp"
#include "rpbeats/parallel.hpp"

namespace rpbeats {

const char* gate_name(GateKind k) {
  switch (k) {
    case GateKind::X: return "X";
    case GateKind::H: return "H";
    case GateKind::Z: return "Z";
    case GateKind::Rx: return "RX";
    case GateKind::Rz: return "RZ";
    case GateKind::U3: return "U3";
    case GateKind::CNOT: return "CNOT";
    case GateKind::CRx: return "CRX";
    case GateKind::Delay: return "DELAY";
    case GateKind::Unitary: return "UNITARY";
  }
  return "?";
}

namespace {

int param_count(GateKind k) {
  switch (k) {
    case GateKind::Rx:
    case GateKind::Rz:
    case GateKind::CRx:
    case GateKind::Delay: return 1;
    case GateKind::U3: return 3;
    default: return 0;
  }
}

int site_count_of(GateKind k) { return (k == GateKind::CNOT || k == GateKind::CRx) ? 2 : 1; }

Eigen::Matrix2cd rx_matrix(double theta) {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  Eigen::Matrix2cd m;
  m << c, cplx(0, -s), cplx(0, -s), c;
  return m;
}

Eigen::Matrix2cd rz_matrix(double theta) {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  m(0, 0) = std::polar(1.0, -theta / 2);
  m(1, 1) = std::polar(1.0, theta / 2);
  return m;
}

// psi <- U psi on `sites` of an n-site register (site 0 most significant).
void apply_op(cplx* psi, int n, const std::vector<int>& sites, const Eigen::MatrixXcd& U) {
  const int k = static_cast<int>(sites.size());
  const Eigen::Index dim = Eigen::Index(1) << n, sub = Eigen::Index(1) << k;
  std::vector<Eigen::Index> masks(static_cast<std::size_t>(k));
  Eigen::Index all = 0;
  for (int j = 0; j < k; ++j) {
    masks[static_cast<std::size_t>(j)] = Eigen::Index(1) << (n - 1 - sites[static_cast<std::size_t>(j)]);
    all |= masks[static_cast<std::size_t>(j)];
  }
  std::vector<Eigen::Index> offs(static_cast<std::size_t>(sub));
  for (Eigen::Index a = 0; a < sub; ++a) {
    Eigen::Index o = 0;
    for (int j = 0; j < k; ++j)
      if ((a >> (k - 1 - j)) & 1) o |= masks[static_cast<std::size_t>(j)];
    offs[static_cast<std::size_t>(a)] = o;
  }
  Eigen::VectorXcd in(sub), out(sub);
  for (Eigen::Index base = 0; base < dim; ++base) {
    if (base & all) continue;
    for (Eigen::Index a = 0; a < sub; ++a) in(a) = psi[base | offs[static_cast<std::size_t>(a)]];
    out.noalias() = U * in;
    for (Eigen::Index a = 0; a < sub; ++a) psi[base | offs[static_cast<std::size_t>(a)]] = out(a);
  }
}

// rho <- U rho U^dagger; rho is column-major so the row index occupies the low bits.
void apply_op_density(Eigen::MatrixXcd& rho, int n, const std::vector<int>& sites, const Eigen::MatrixXcd& U) {
  std::vector<int> row_sites, col_sites;
  for (int s : sites) {
    row_sites.push_back(n + s);
    col_sites.push_back(s);
  }
  apply_op(rho.data(), 2 * n, row_sites, U);
  apply_op(rho.data(), 2 * n, col_sites, U.conjugate());
}

void apply_kraus_density(Eigen::MatrixXcd& rho, int n, int site, const KrausChannel& ch) {
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(rho.rows(), rho.cols());
  for (const auto& K : ch.operators) {
    Eigen::MatrixXcd term = rho;
    apply_op(term.data(), 2 * n, {n + site}, K);
    apply_op(term.data(), 2 * n, {site}, K.conjugate());
    acc += term;
  }
  rho = std::move(acc);
}

void apply_noise(Eigen::MatrixXcd& rho, int n, const Gate& g, const SyntheticQubitNoise& noise) {
  const double duration = g.kind == GateKind::Delay ? g.params[0] : noise.gate_duration;
  if (!(duration > 0)) return;
  for (int s : g.sites) {
    const auto us = static_cast<std::size_t>(s);
    if (g.kind == GateKind::Delay && us < noise.drift_phase_rate.size() && noise.drift_phase_rate[us] != 0.0)
      apply_op_density(rho, n, {s}, rz_matrix(noise.drift_phase_rate[us] * duration));
    const double T1 = us < noise.T1.size() ? noise.T1[us] : kInfinity;
    const double T2 = us < noise.T2.size() ? noise.T2[us] : kInfinity;
    if (std::isinf(T1) && std::isinf(T2)) continue;
    apply_kraus_density(rho, n, s, infinite_temperature_thermal_channel(RelaxationParams::from_times(duration, T1, T2), s));
  }
}

}  // namespace

Eigen::MatrixXcd Gate::unitary() const {
  switch (kind) {
    case GateKind::X: return pauli('X');
    case GateKind::Z: return pauli('Z');
    case GateKind::H: {
      Eigen::Matrix2cd m;
      m << 1, 1, 1, -1;
      return m / std::sqrt(2.0);
    }
    case GateKind::Rx: return rx_matrix(params[0]);
    case GateKind::Rz: return rz_matrix(params[0]);
    case GateKind::U3: {
      const double th = params[0], ph = params[1], la = params[2];
      Eigen::Matrix2cd m;
      m << std::cos(th / 2), -std::polar(1.0, la) * std::sin(th / 2), std::polar(1.0, ph) * std::sin(th / 2),
          std::polar(1.0, ph + la) * std::cos(th / 2);
      return m;
    }
    case GateKind::CNOT: {
      Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
      m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1;
      return m;
    }
    case GateKind::CRx: {
      Eigen::Matrix4cd m = Eigen::Matrix4cd::Identity();
      m.bottomRightCorner<2, 2>() = rx_matrix(params[0]);
      return m;
    }
    case GateKind::Delay: return Eigen::Matrix2cd::Identity();
    case GateKind::Unitary: return matrix;
  }
  throw InvalidArgument("unknown gate kind");
}

Circuit& Circuit::add(Gate g) {
  gates.push_back(std::move(g));
  return *this;
}

Circuit& Circuit::maybe(Gate g, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("gate probability must lie in [0,1]");
  g.probability = p;
  return add(std::move(g));
}

Circuit& Circuit::append(const Circuit& other, const std::vector<int>& site_map) {
  if (static_cast<int>(site_map.size()) != other.site_count) throw InvalidArgument("append: site map size mismatch");
  for (Gate g : other.gates) {
    for (int& s : g.sites) s = site_map.at(static_cast<std::size_t>(s));
    gates.push_back(std::move(g));
  }
  return *this;
}

Circuit& Circuit::measure(std::vector<int> sites) {
  measured_sites = std::move(sites);
  return *this;
}

void Circuit::validate() const {
  if (site_count < 1) throw InvalidArgument("circuit needs at least one site");
  for (const auto& g : gates) {
    if (g.kind == GateKind::Unitary) {
      const Eigen::Index d = Eigen::Index(1) << g.sites.size();
      if (g.sites.empty() || g.matrix.rows() != d || g.matrix.cols() != d)
        throw InvalidArgument("unitary gate matrix does not match its sites");
    } else {
      if (static_cast<int>(g.sites.size()) != site_count_of(g.kind))
        throw InvalidArgument(std::string("wrong site count for gate ") + gate_name(g.kind));
      if (static_cast<int>(g.params.size()) != param_count(g.kind))
        throw InvalidArgument(std::string("wrong parameter count for gate ") + gate_name(g.kind));
    }
    for (double p : g.params)
      if (!std::isfinite(p)) throw InvalidArgument("gate parameters must be finite");
    if (g.kind == GateKind::Delay && g.params[0] < 0) throw InvalidArgument("delay duration must be >= 0");
    for (std::size_t i = 0; i < g.sites.size(); ++i) {
      if (g.sites[i] < 0 || g.sites[i] >= site_count) throw InvalidArgument("gate site out of range");
      for (std::size_t j = 0; j < i; ++j)
        if (g.sites[i] == g.sites[j]) throw InvalidArgument("gate sites must be distinct");
    }
  }
  for (int s : measured_sites)
    if (s < 0 || s >= site_count) throw InvalidArgument("measured site out of range");
}

std::size_t Circuit::probabilistic_count() const {
  return static_cast<std::size_t>(std::count_if(gates.begin(), gates.end(), [](const Gate& g) { return g.probability.has_value(); }));
}

std::string Circuit::dump() const {
  std::ostringstream os;
  os.precision(17);
  os << "SITES " << site_count << "\n";
  for (const auto& g : gates) {
    os << "GATE " << gate_name(g.kind) << ' ';
    for (std::size_t i = 0; i < g.sites.size(); ++i) os << (i ? "," : "") << g.sites[i];
    os << ' ';
    if (g.kind == GateKind::Unitary) {
      os << "dim=" << g.matrix.rows();
    } else if (g.params.empty()) {
      os << '-';
    } else {
      for (std::size_t i = 0; i < g.params.size(); ++i) os << (i ? "," : "") << g.params[i];
    }
    if (g.probability) os << " p=" << *g.probability;
    os << "\n";
  }
  if (!measured_sites.empty()) {
    os << "MEASURE ";
    for (std::size_t i = 0; i < measured_sites.size(); ++i) os << (i ? "," : "") << measured_sites[i];
    os << "\n";
  }
  return os.str();
}

SyntheticQubitNoise SyntheticQubitNoise::uniform(int n_sites, double T1, double T2) {
  SyntheticQubitNoise n;
  n.T1.assign(static_cast<std::size_t>(n_sites), T1);
  n.T2.assign(static_cast<std::size_t>(n_sites), T2);
  n.drift_phase_rate.assign(static_cast<std::size_t>(n_sites), 0.0);
  return n;
}

void SyntheticQubitNoise::validate(int n_sites) const {
  for (int s = 0; s < n_sites; ++s) {
    const auto us = static_cast<std::size_t>(s);
    const double a = us < T1.size() ? T1[us] : kInfinity, b = us < T2.size() ? T2[us] : kInfinity;
    if (!(a > 0) || !(b > 0)) throw UnphysicalParameters("qubit T1/T2 must be positive");
    if (std::isfinite(a) ? (b > 2 * a) : false) throw UnphysicalParameters("qubit T2 exceeds 2*T1");
  }
  if (gate_duration < 0 || identity_duration < 0) throw InvalidArgument("gate durations must be >= 0");
}

Eigen::VectorXcd run_statevector(const Circuit& c, const std::optional<Eigen::VectorXcd>& init) {
  c.validate();
  if (c.site_count > kMaxStatevectorSites) throw InvalidArgument("statevector backend limited to 12 sites");
  if (c.probabilistic_count()) throw InvalidArgument("statevector backend cannot run probabilistic gates");
  const Eigen::Index dim = Eigen::Index(1) << c.site_count;
  Eigen::VectorXcd psi;
  if (init) {
    if (init->size() != dim) throw InvalidArgument("initial state dimension mismatch");
    psi = *init;
  } else {
    psi = Eigen::VectorXcd::Zero(dim);
    psi(0) = 1.0;
  }
  for (const auto& g : c.gates)
    if (g.kind != GateKind::Delay) apply_op(psi.data(), c.site_count, g.sites, g.unitary());
  return psi;
}

Eigen::MatrixXcd run_density(const Circuit& c, const SyntheticQubitNoise* noise, const std::optional<Eigen::MatrixXcd>& init,
                             int threads) {
  c.validate();
  const int limit = noise ? kMaxNoisyDensitySites : kMaxDensitySites;
  if (c.site_count > limit) throw InvalidArgument("density backend limited to " + std::to_string(limit) + " sites");
  if (noise) noise->validate(c.site_count);
  const Eigen::Index dim = Eigen::Index(1) << c.site_count;
  Eigen::MatrixXcd rho0;
  if (init) {
    if (init->rows() != dim || init->cols() != dim) throw InvalidArgument("initial density dimension mismatch");
    rho0 = *init;
  } else {
    rho0 = Eigen::MatrixXcd::Zero(dim, dim);
    rho0(0, 0) = 1.0;
  }
  std::vector<std::size_t> prob_gates;
  for (std::size_t i = 0; i < c.gates.size(); ++i)
    if (c.gates[i].probability) prob_gates.push_back(i);
  if (prob_gates.size() > 16) throw InvalidArgument("too many probabilistic gates for exact expansion");
  const std::size_t configs = std::size_t(1) << prob_gates.size();

  std::vector<Eigen::MatrixXcd> results(configs);
  std::vector<double> weights(configs, 1.0);
  parallel_for(configs, threads, [&](std::size_t cfg) {
    std::vector<char> present(c.gates.size(), 1);
    double w = 1.0;
    for (std::size_t j = 0; j < prob_gates.size(); ++j) {
      const double p = *c.gates[prob_gates[j]].probability;
      const bool on = (cfg >> j) & 1;
      present[prob_gates[j]] = on;
      w *= on ? p : 1.0 - p;
    }
    weights[cfg] = w;
    if (w == 0.0) return;
    Eigen::MatrixXcd rho = rho0;
    for (std::size_t i = 0; i < c.gates.size(); ++i) {
      const Gate& g = c.gates[i];
      if (present[i] && g.kind != GateKind::Delay) apply_op_density(rho, c.site_count, g.sites, g.unitary());
      if (noise && (present[i] || g.kind == GateKind::Delay)) apply_noise(rho, c.site_count, g, *noise);
    }
    results[cfg] = std::move(rho);
  });
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t cfg = 0; cfg < configs; ++cfg)
    if (weights[cfg] != 0.0) out += weights[cfg] * results[cfg];
  return out;
}

Eigen::MatrixXcd circuit_unitary(const Circuit& c) {
  c.validate();
  if (c.probabilistic_count()) throw InvalidArgument("circuit_unitary: probabilistic gates present");
  const Eigen::Index dim = Eigen::Index(1) << c.site_count;
  Eigen::MatrixXcd U = Eigen::MatrixXcd::Identity(dim, dim);
  for (const auto& g : c.gates) {
    if (g.kind == GateKind::Delay) continue;
    for (Eigen::Index col = 0; col < dim; ++col) apply_op(U.col(col).data(), c.site_count, g.sites, g.unitary());
  }
  return U;
}

double outcome_probability(const Eigen::VectorXcd& psi, int n_sites, const std::vector<int>& sites, unsigned bits) {
  const Eigen::Index dim = Eigen::Index(1) << n_sites;
  if (psi.size() != dim) throw InvalidArgument("outcome_probability: dimension mismatch");
  double p = 0.0;
  for (Eigen::Index i = 0; i < dim; ++i) {
    bool match = true;
    for (std::size_t j = 0; j < sites.size() && match; ++j) {
      const unsigned want = (bits >> (sites.size() - 1 - j)) & 1u;
      match = static_cast<unsigned>((i >> (n_sites - 1 - sites[j])) & 1) == want;
    }
    if (match) p += std::norm(psi(i));
  }
  return p;
}

double outcome_probability(const Eigen::MatrixXcd& rho, int n_sites, const std::vector<int>& sites, unsigned bits) {
  const Eigen::Index dim = Eigen::Index(1) << n_sites;
  if (rho.rows() != dim) throw InvalidArgument("outcome_probability: dimension mismatch");
  double p = 0.0;
  for (Eigen::Index i = 0; i < dim; ++i) {
    bool match = true;
    for (std::size_t j = 0; j < sites.size() && match; ++j) {
      const unsigned want = (bits >> (sites.size() - 1 - j)) & 1u;
      match = static_cast<unsigned>((i >> (n_sites - 1 - sites[j])) & 1) == want;
    }
    if (match) p += rho(i, i).real();
  }
  return p;
}

Circuit singlet_prep(int n_sites, int a, int b) {
  Circuit c(n_sites);
  c.x(a).x(b).h(a).cnot(a, b);
  return c;
}

Circuit singlet_unprep(int n_sites, int a, int b) {
  Circuit c(n_sites);
  c.cnot(a, b).h(a);
  return c;
}

Circuit kraus_circuit(const RelaxationParams& params, int n_sites, int target, int ancilla) {
  Circuit c(n_sites);
  c.maybe({GateKind::X, {ancilla}, {}, {}, {}}, 0.5);
  c.cnot(target, ancilla);
  c.crx(ancilla, target, params.phi_x);
  c.cnot(target, ancilla);
  c.maybe({GateKind::Z, {target}, {}, {}, {}}, params.p_z);
  return c;
}

Circuit purification_circuit(int n_nuclear_sites) {
  if (n_nuclear_sites < 1) throw InvalidArgument("purification needs at least one nuclear site");
  Circuit c(2 * n_nuclear_sites);
  for (int k = 0; k < n_nuclear_sites; ++k) c.h(n_nuclear_sites + k);
  for (int k = 0; k < n_nuclear_sites; ++k) c.cnot(n_nuclear_sites + k, k);
  return c;
}

Circuit sector_evolution_circuit(const BlockHamiltonian& H, int nuclear_index, double t) {
  const int n = H.qubits();
  if (nuclear_index < 0 || nuclear_index >= H.nuclear_dim) throw InvalidArgument("nuclear index out of range");
  Circuit c(n);
  for (int k = 1; k < n - 1; ++k)
    if ((nuclear_index >> (n - 2 - k)) & 1) c.x(k);
  c.append(singlet_prep(n, 0, n - 1), [&] {
    std::vector<int> m(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) m[static_cast<std::size_t>(i)] = i;
    return m;
  }());
  std::vector<int> all(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
  c.unitary(all, unitary_from_hermitian(H.matrix, t));
  return c;
}

Circuit purified_evolution_circuit(const BlockHamiltonian& H, double t) {
  const int n = H.qubits();
  const int q = n - 2;
  Circuit c(n + q);
  for (int k = 0; k < q; ++k) c.h(n + k);
  for (int k = 0; k < q; ++k) c.cnot(n + k, 1 + k);
  c.x(0).x(n - 1).h(0).cnot(0, n - 1);
  std::vector<int> sys(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) sys[static_cast<std::size_t>(i)] = i;
  c.unitary(sys, unitary_from_hermitian(H.matrix, t));
  return c;
}

std::vector<PauliTerm> trotter_order(const std::vector<PauliTerm>& terms) {
  // XX first, then the diagonal strings, then YY.
  auto rank = [](const PauliTerm& p) {
    const bool has_x = p.ops.find('X') != std::string::npos;
    const bool has_y = p.ops.find('Y') != std::string::npos;
    return has_x && !has_y ? 0 : (has_y ? 2 : 1);
  };
  std::vector<PauliTerm> out = terms;
  std::stable_sort(out.begin(), out.end(), [&](const PauliTerm& a, const PauliTerm& b) { return rank(a) < rank(b); });
  return out;
}

Circuit pauli_exponential(const PauliTerm& term, double dt) {
  const int n = static_cast<int>(term.ops.size());
  Circuit c(n);
  std::vector<int> active;
  for (int s = 0; s < n; ++s)
    if (term.ops[static_cast<std::size_t>(s)] != 'I') active.push_back(s);
  if (active.empty()) return c;  // global phase only
  for (int s : active) {
    const char p = term.ops[static_cast<std::size_t>(s)];
    if (p == 'X') c.h(s);
    if (p == 'Y') c.rz(s, -std::numbers::pi / 2).h(s);
  }
  for (std::size_t j = 0; j + 1 < active.size(); ++j) c.cnot(active[j], active[j + 1]);
  c.rz(active.back(), 2.0 * term.coeff * dt);
  for (std::size_t j = active.size() - 1; j-- > 0;) c.cnot(active[j], active[j + 1]);
  for (int s : active) {
    const char p = term.ops[static_cast<std::size_t>(s)];
    if (p == 'X') c.h(s);
    if (p == 'Y') c.h(s).rz(s, std::numbers::pi / 2);
  }
  return c;
}

Circuit trotterized_pauli_evolution(const std::vector<PauliTerm>& terms, double t, int steps) {
  if (terms.empty()) throw InvalidArgument("no Pauli terms");
  if (steps < 1) throw InvalidArgument("steps must be >= 1");
  const int n = static_cast<int>(terms[0].ops.size());
  std::vector<int> id(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) id[static_cast<std::size_t>(i)] = i;
  Circuit step(n);
  for (const auto& term : terms) {
    if (static_cast<int>(term.ops.size()) != n) throw InvalidArgument("inconsistent Pauli string lengths");
    step.append(pauli_exponential(term, t / steps), id);
  }
  Circuit c(n);
  for (int k = 0; k < steps; ++k) c.append(step, id);
  return c;
}

Circuit echo_pulse_circuit(int N, double identity_duration, bool echoes, bool unprep) {
  if (N < 0 || N % 8 != 0) throw InvalidArgument("echo pattern needs N divisible by 8");
  Circuit c = singlet_prep(2, 0, 1);
  const double unit = identity_duration * N / 8.0;
  const double segments[] = {unit, 2 * unit, 2 * unit, 2 * unit, unit};
  for (int k = 0; k < 5; ++k) {
    if (segments[k] > 0) c.delay(0, segments[k]).delay(1, segments[k]);
    if (k < 4 && echoes) c.x(0).x(1);
  }
  if (unprep) c.append(singlet_unprep(2, 0, 1), {0, 1});
  c.measure({0, 1});
  return c;
}

double delay_count(double T_qubit, double T_rp, double t_identity, double t) {
  if (!(T_qubit > 0) || !(T_rp > 0) || !(t_identity > 0) || t < 0) throw InvalidArgument("delay_count: invalid inputs");
  return T_qubit / (T_rp * t_identity) * t;
}

int echo_delay_count(double T_qubit, double T_rp, double t_identity, double t) {
  const double n = delay_count(T_qubit, T_rp, t_identity, t);
  return 8 * static_cast<int>(std::lround(n / 8.0));
}

Circuit rz_encode_circuit(double S, double noise_delay) {
  if (S < -1e-12 || S > 1.0 + 1e-12) throw InvalidArgument("rz_encode: S outside [0,1]");
  const double theta = 2.0 * std::acos(std::sqrt(std::clamp(S, 0.0, 1.0)));
  Circuit c = singlet_prep(2, 0, 1);
  c.rz(1, theta);
  if (noise_delay > 0) c.delay(0, noise_delay).delay(1, noise_delay);
  c.append(singlet_unprep(2, 0, 1), {0, 1});
  c.measure({0, 1});
  return c;
}

std::vector<Circuit> rz_encode_trace(const TimeSeries& S, double noise_delay) {
  std::vector<Circuit> out;
  out.reserve(S.values.size());
  for (double v : S.values) out.push_back(rz_encode_circuit(v, noise_delay));
  return out;
}

}  // namespace rpbeats
