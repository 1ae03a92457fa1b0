#include "rpbeats/dynamics.hpp"

#include <atomic>
#include <bit>
#include <cmath>
#include <numeric>

#include "rpbeats/errors.hpp"
#include "rpbeats/linalg.hpp"
#include "rpbeats/parallel.hpp"
#include "rpbeats/spin_algebra.hpp"

namespace rpbeats {

namespace {
std::atomic<std::size_t> g_clamp_warnings{0};

int find_root(std::vector<int>& parent, int x) {
  while (parent[static_cast<std::size_t>(x)] != x) {
    parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
    x = parent[static_cast<std::size_t>(x)];
  }
  return x;
}
}  // namespace

void DensityMatrix::validate(double tol) const {
  if (matrix.rows() != matrix.cols() || matrix.rows() != (Eigen::Index(1) << n_sites))
    throw InvalidArgument("density matrix dimension does not match register size");
  if (std::abs(matrix.trace() - cplx(1.0, 0.0)) > tol) throw NumericalError("density matrix trace != 1");
  if (hermiticity_error(matrix) > std::max(tol, 1e-13)) throw NumericalError("density matrix not Hermitian");
}

void TimeSeries::validate() const {
  if (times.size() != values.size()) throw InvalidArgument("time series length mismatch");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw InvalidArgument("time grid must be strictly increasing");
  if (probability)
    for (double v : values)
      if (v < -1e-9 || v > 1.0 + 1e-9) throw NumericalError("probability outside [0,1]: " + std::to_string(v));
}

std::vector<double> uniform_grid(double t_start, double t_end, double step) {
  if (!(step > 0) || t_end < t_start) throw InvalidArgument("invalid time grid");
  const auto n = static_cast<std::size_t>(std::floor((t_end - t_start) / step + 1e-9)) + 1;
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = t_start + static_cast<double>(i) * step;
  return g;
}

const char* to_string(FieldRegime r) { return r == FieldRegime::Zero ? "zero" : "high"; }
const char* to_string(AverageMode m) { return m == AverageMode::Exact ? "exact" : "representative"; }

Propagator::Propagator(const Eigen::MatrixXcd& H) : dim_(static_cast<int>(H.rows())) {
  if (H.rows() != H.cols()) throw InvalidArgument("Hamiltonian must be square");
  const double scale = std::max(1.0, max_abs(H));
  if (hermiticity_error(H) > 1e-13 * scale) throw InvalidArgument("Hamiltonian is not Hermitian");

  std::vector<int> parent(static_cast<std::size_t>(dim_));
  std::iota(parent.begin(), parent.end(), 0);
  for (int r = 0; r < dim_; ++r)
    for (int c = r + 1; c < dim_; ++c)
      if (H(r, c) != cplx(0.0, 0.0)) parent[static_cast<std::size_t>(find_root(parent, r))] = find_root(parent, c);

  std::vector<int> root_to_block(static_cast<std::size_t>(dim_), -1);
  block_of_.assign(static_cast<std::size_t>(dim_), -1);
  for (int r = 0; r < dim_; ++r) {
    const int root = find_root(parent, r);
    auto& b = root_to_block[static_cast<std::size_t>(root)];
    if (b < 0) {
      b = static_cast<int>(blocks_.size());
      blocks_.emplace_back();
    }
    blocks_[static_cast<std::size_t>(b)].index.push_back(r);
    block_of_[static_cast<std::size_t>(r)] = b;
  }
  for (auto& b : blocks_) {
    const auto n = static_cast<Eigen::Index>(b.index.size());
    Eigen::MatrixXcd sub(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) sub(i, j) = H(b.index[static_cast<std::size_t>(i)], b.index[static_cast<std::size_t>(j)]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (sub + sub.adjoint()));
    if (es.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
    b.vectors = es.eigenvectors();
    b.energies = es.eigenvalues();
  }
}

Eigen::MatrixXcd Propagator::unitary(double t) const {
  Eigen::MatrixXcd U = Eigen::MatrixXcd::Zero(dim_, dim_);
  for (const auto& b : blocks_) {
    const Eigen::VectorXcd ph = (b.energies.cast<cplx>() * cplx(0, -t)).array().exp();
    const Eigen::MatrixXcd sub = b.vectors * ph.asDiagonal() * b.vectors.adjoint();
    for (std::size_t i = 0; i < b.index.size(); ++i)
      for (std::size_t j = 0; j < b.index.size(); ++j)
        U(b.index[i], b.index[j]) = sub(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  return U;
}

Eigen::MatrixXcd Propagator::evolve_state(const Eigen::VectorXcd& psi0, const std::vector<double>& times) const {
  if (psi0.size() != dim_) throw InvalidArgument("state dimension does not match Hamiltonian");
  const auto T = static_cast<Eigen::Index>(times.size());
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim_, T);
  std::vector<char> touched(blocks_.size(), 0);
  for (Eigen::Index i = 0; i < dim_; ++i)
    if (psi0(i) != cplx(0.0, 0.0)) touched[static_cast<std::size_t>(block_of_[static_cast<std::size_t>(i)])] = 1;
  for (std::size_t bi = 0; bi < blocks_.size(); ++bi) {
    if (!touched[bi]) continue;
    const auto& b = blocks_[bi];
    const auto n = static_cast<Eigen::Index>(b.index.size());
    Eigen::VectorXcd local(n);
    for (Eigen::Index i = 0; i < n; ++i) local(i) = psi0(b.index[static_cast<std::size_t>(i)]);
    const Eigen::VectorXcd coeff = b.vectors.adjoint() * local;
    Eigen::MatrixXcd phases(n, T);
    for (Eigen::Index k = 0; k < T; ++k)
      phases.col(k) = coeff.cwiseProduct((b.energies.cast<cplx>() * cplx(0, -times[static_cast<std::size_t>(k)])).array().exp().matrix());
    const Eigen::MatrixXcd evolved = b.vectors * phases;
    for (Eigen::Index i = 0; i < n; ++i) out.row(b.index[static_cast<std::size_t>(i)]) = evolved.row(i);
  }
  return out;
}

std::vector<Eigen::MatrixXcd> Propagator::evolve(const Eigen::MatrixXcd& rho0, const std::vector<double>& times) const {
  if (rho0.rows() != dim_ || rho0.cols() != dim_) throw InvalidArgument("density matrix dimension mismatch");
  std::vector<Eigen::MatrixXcd> out;
  out.reserve(times.size());
  for (double t : times) {
    const Eigen::MatrixXcd U = unitary(t);
    out.push_back(U * rho0 * U.adjoint());
  }
  return out;
}

std::vector<DensityMatrix> evolve(const BlockHamiltonian& H, const DensityMatrix& rho0, const std::vector<double>& times) {
  if (rho0.matrix.rows() != H.dim()) throw InvalidArgument("evolve: dimension mismatch");
  const Propagator prop(H.matrix);
  std::vector<DensityMatrix> out;
  for (auto& m : prop.evolve(rho0.matrix, times)) out.push_back({std::move(m), rho0.n_sites});
  return out;
}

Eigen::Matrix4cd electron_reduced(const Eigen::VectorXcd& psi) {
  const Eigen::Index nd = psi.size() / 4;
  if (nd * 4 != psi.size()) throw InvalidArgument("electron_reduced: bad dimension");
  // rows: electron index (e2,e1); columns: nuclear index
  Eigen::Matrix<cplx, 4, Eigen::Dynamic> A(4, nd);
  for (Eigen::Index n = 0; n < nd; ++n)
    for (int e2 = 0; e2 < 2; ++e2)
      for (int e1 = 0; e1 < 2; ++e1) A(2 * e2 + e1, n) = psi(e2 * 2 * nd + 2 * n + e1);
  return A * A.adjoint();
}

Eigen::Matrix4cd electron_reduced(const Eigen::MatrixXcd& rho) {
  const Eigen::Index nd = rho.rows() / 4;
  if (nd * 4 != rho.rows() || rho.rows() != rho.cols()) throw InvalidArgument("electron_reduced: bad dimension");
  Eigen::Matrix4cd out = Eigen::Matrix4cd::Zero();
  auto idx = [nd](int e, Eigen::Index n) { return (e >> 1) * 2 * nd + 2 * n + (e & 1); };
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (Eigen::Index n = 0; n < nd; ++n) out(a, b) += rho(idx(a, n), idx(b, n));
  return out;
}

ElectronTrace ElectronTrace::zeros(const std::vector<double>& times) {
  return {times, std::vector<Eigen::Matrix4cd>(times.size(), Eigen::Matrix4cd::Zero())};
}

void ElectronTrace::add_scaled(const ElectronTrace& other, double w) {
  if (other.rho.size() != rho.size()) throw InvalidArgument("electron traces on different grids");
  for (std::size_t k = 0; k < rho.size(); ++k) rho[k] += w * other.rho[k];
}

ElectronTrace electron_trace(const Propagator& prop, const Eigen::VectorXcd& psi0, const std::vector<double>& times) {
  const Eigen::MatrixXcd states = prop.evolve_state(psi0, times);
  ElectronTrace out{times, {}};
  out.rho.reserve(times.size());
  for (Eigen::Index k = 0; k < states.cols(); ++k) out.rho.push_back(electron_reduced(Eigen::VectorXcd(states.col(k))));
  return out;
}

ElectronTrace electron_trace_mixed(const Propagator& prop, int nuclear_dim, const std::vector<int>& nuclear_states,
                                   const std::vector<double>& times, int threads) {
  if (nuclear_states.empty()) throw InvalidArgument("electron_trace_mixed: empty ensemble");
  std::vector<ElectronTrace> parts(nuclear_states.size());
  parallel_for(nuclear_states.size(), threads, [&](std::size_t i) {
    parts[i] = electron_trace(prop, initial_sector_vector(nuclear_states[i], nuclear_dim), times);
  });
  ElectronTrace sum = ElectronTrace::zeros(times);
  const double w = 1.0 / static_cast<double>(nuclear_states.size());
  for (const auto& p : parts) sum.add_scaled(p, w);
  return sum;
}

double singlet_probability(const Eigen::Matrix4cd& rho_e) {
  return clamp_probability((singlet_projector() * rho_e).trace().real());
}

double singlet_probability(const DensityMatrix& rho, int site_a, int site_b) {
  if (site_a == site_b || site_a < 0 || site_b < 0 || site_a >= rho.n_sites || site_b >= rho.n_sites)
    throw InvalidArgument("singlet_probability: invalid electron sites");
  const Eigen::Matrix4cd red = partial_trace_keep(rho.matrix, rho.n_sites, {site_a, site_b});
  return singlet_probability(red);
}

double clamp_probability(double p) {
  if (p < -1e-9 || p > 1.0 + 1e-9) throw NumericalError("probability out of range: " + std::to_string(p));
  if (p < 0.0 || p > 1.0) {
    ++g_clamp_warnings;
    return p < 0.0 ? 0.0 : 1.0;
  }
  return p;
}

std::size_t clamp_warning_count() { return g_clamp_warnings.load(); }

TimeSeries singlet_series(const ElectronTrace& trace, const std::string& label) {
  TimeSeries ts{trace.times, {}, label, true};
  ts.values.reserve(trace.rho.size());
  for (const auto& r : trace.rho) ts.values.push_back(singlet_probability(r));
  return ts;
}

Eigen::VectorXcd initial_sector_vector(int index, int nuclear_dim) {
  if (nuclear_dim < 1 || index < 0 || index >= nuclear_dim)
    throw InvalidArgument("initial state index " + std::to_string(index) + " out of range");
  const Eigen::Vector4cd s = singlet_vector();
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(4 * nuclear_dim);
  for (int e2 = 0; e2 < 2; ++e2)
    for (int e1 = 0; e1 < 2; ++e1) psi(e2 * 2 * nuclear_dim + 2 * index + e1) = s(2 * e2 + e1);
  return psi;
}

DensityMatrix initial_sector_state(int index, int nuclear_dim) {
  const Eigen::VectorXcd psi = initial_sector_vector(index, nuclear_dim);
  const int n_sites = std::countr_zero(static_cast<unsigned>(4 * nuclear_dim));
  if ((1 << n_sites) != 4 * nuclear_dim) throw InvalidArgument("nuclear dimension must be a power of two");
  return {psi * psi.adjoint(), n_sites};
}

DensityMatrix maximally_mixed_nuclear_state(int n_nuclear_dims) {
  if (n_nuclear_dims < 1) throw InvalidArgument("maximally_mixed_nuclear_state: n must be >= 1");
  const int n_sites = std::countr_zero(static_cast<unsigned>(4 * n_nuclear_dims));
  if ((1 << n_sites) != 4 * n_nuclear_dims) throw InvalidArgument("nuclear dimension must be a power of two");
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(4 * n_nuclear_dims, 4 * n_nuclear_dims);
  for (int k = 0; k < n_nuclear_dims; ++k) {
    const Eigen::VectorXcd psi = initial_sector_vector(k, n_nuclear_dims);
    rho += psi * psi.adjoint() / static_cast<double>(n_nuclear_dims);
  }
  return {rho, n_sites};
}

std::map<HalfInt, long long> one_group_weights(int n_nuclei, FieldRegime regime) {
  std::map<HalfInt, long long> w;
  for (const auto& [I, count] : spin_addition_counts(n_nuclei)) {
    if (regime == FieldRegime::Zero) {
      w[I] += count * I.multiplicity();
    } else {
      for (int k = 0; k < I.multiplicity(); ++k) w[abs(I - HalfInt::from_int(k))] += count;
    }
  }
  return w;
}

TimeSeries weighted_average_one_group(const std::map<HalfInt, TimeSeries>& traces, FieldRegime regime, int n_nuclei) {
  const auto weights = one_group_weights(n_nuclei, regime);
  const double total = std::ldexp(1.0, n_nuclei);
  TimeSeries out;
  out.probability = true;
  out.label = std::string("S_") + to_string(regime);
  for (const auto& [key, w] : weights) {
    auto it = traces.find(key);
    if (it == traces.end()) throw InvalidArgument("missing trace for sector " + key.str());
    if (out.times.empty()) {
      out.times = it->second.times;
      out.values.assign(out.times.size(), 0.0);
    }
    if (it->second.times != out.times) throw InvalidArgument("sector traces use different time grids");
    for (std::size_t k = 0; k < out.values.size(); ++k) out.values[k] += static_cast<double>(w) / total * it->second.values[k];
  }
  return out;
}

TimeSeries reassemble_two_group(const std::map<HalfInt, TimeSeries>& traces,
                                const std::map<HalfInt, SectorPadding>& padding, int group2_count, int group1_count) {
  const auto row = spin_addition_counts(group2_count);
  const double total = std::ldexp(1.0, group1_count + group2_count);
  TimeSeries out;
  out.probability = true;
  out.label = "S";
  for (const auto& [I2, deg] : row) {
    auto it = traces.find(I2);
    auto pit = padding.find(I2);
    if (it == traces.end() || pit == padding.end()) throw InvalidArgument("missing sector I2=" + I2.str());
    if (out.times.empty()) {
      out.times = it->second.times;
      out.values.assign(out.times.size(), 0.0);
    }
    if (it->second.times != out.times) throw InvalidArgument("sector traces use different time grids");
    const double nd = pit->second.nuclear_dim;
    const double pad = pit->second.padded / nd;
    for (std::size_t k = 0; k < out.values.size(); ++k)
      out.values[k] += (it->second.values[k] - pad) * nd * static_cast<double>(deg) / total;
  }
  return out;
}

ElectronTrace mixed_electron_trace(const SpinSystemSpec& spec, const std::vector<double>& times, AverageMode mode,
                                   FieldRegime regime, int threads) {
  spec.validate();
  ElectronTrace sum = ElectronTrace::zeros(times);
  if (spec.groups.size() == 1) {
    const int N = spec.groups[0].count;
    const auto H = build_reduced_one_group(spec);
    const Propagator prop(H.matrix);
    std::vector<std::pair<int, double>> states;  // reduced index, weight
    const double total = std::ldexp(1.0, N);
    if (mode == AverageMode::Exact) {
      for (const auto& [I, count] : spin_addition_counts(N))
        for (int k = 0; k < I.multiplicity(); ++k)
          states.emplace_back(reduced_index(N, I, I - HalfInt::from_int(k)), static_cast<double>(count) / total);
    } else {
      for (const auto& [key, w] : one_group_weights(N, regime))
        states.emplace_back(reduced_index(N, key, key), static_cast<double>(w) / total);
    }
    std::vector<ElectronTrace> parts(states.size());
    parallel_for(states.size(), threads, [&](std::size_t i) {
      parts[i] = electron_trace(prop, initial_sector_vector(states[i].first, H.nuclear_dim), times);
    });
    for (std::size_t i = 0; i < states.size(); ++i) sum.add_scaled(parts[i], states[i].second);
    return sum;
  }

  const auto sectors = two_group_sectors(spec);
  const double total = std::ldexp(1.0, spec.groups[0].count + spec.groups[1].count);
  std::vector<ElectronTrace> parts(sectors.size());
  std::vector<BlockHamiltonian> blocks(sectors.size());
  parallel_for(sectors.size(), threads, [&](std::size_t i) {
    blocks[i] = build_two_group_block(sectors[i], spec);
    const Propagator prop(blocks[i].matrix);
    std::vector<int> all(static_cast<std::size_t>(blocks[i].nuclear_dim));
    std::iota(all.begin(), all.end(), 0);
    parts[i] = electron_trace_mixed(prop, blocks[i].nuclear_dim, all, times);
  });
  const Eigen::Matrix4cd PS = singlet_projector();
  for (std::size_t i = 0; i < sectors.size(); ++i) {
    const double nd = blocks[i].nuclear_dim;
    const double w = nd * static_cast<double>(blocks[i].degeneracy) / total;
    const double pad = blocks[i].padded_nuclear / nd;
    for (std::size_t k = 0; k < times.size(); ++k) sum.rho[k] += w * (parts[i].rho[k] - pad * PS);
  }
  return sum;
}

}  // namespace rpbeats
