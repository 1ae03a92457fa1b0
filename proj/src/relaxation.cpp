#include "rpbeats/relaxation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rpbeats/errors.hpp"
#include "rpbeats/linalg.hpp"
#include "rpbeats/parallel.hpp"
#include "rpbeats/spin_algebra.hpp"

namespace rpbeats {

RelaxationParams RelaxationParams::from_times(double t, double T1, double T2) {
  if (!(t >= 0) || !std::isfinite(t)) throw InvalidArgument("relaxation time point must be finite and >= 0");
  if (!(T1 > 0) || !(T2 > 0)) throw UnphysicalParameters("T1 and T2 must be positive");
  const double rate_z = 1.0 / T2 - 0.5 / T1;
  if (rate_z < -1e-15) throw UnphysicalParameters("1/T2 < 1/(2 T1): dephasing probability would be negative");
  RelaxationParams p;
  p.t = t;
  p.T1 = T1;
  p.T2 = T2;
  p.p_x = std::isfinite(T1) ? -std::expm1(-t / T1) : 0.0;
  p.p_z = -0.5 * std::expm1(-t * std::max(rate_z, 0.0));
  p.phi_x = 2.0 * std::asin(std::sqrt(p.p_x));
  return p;
}

double KrausChannel::completeness_error() const {
  Eigen::Matrix2cd sum = Eigen::Matrix2cd::Zero();
  for (const auto& K : operators) sum += K.adjoint() * K;
  return max_abs(sum - Eigen::Matrix2cd::Identity());
}

KrausChannel infinite_temperature_thermal_channel(const RelaxationParams& params, int target_site) {
  if (params.p_x < 0 || params.p_x > 1 || params.p_z < 0 || params.p_z > 0.5)
    throw UnphysicalParameters("relaxation probabilities out of range");
  const double c = std::sqrt(1.0 - params.p_x), s = std::sqrt(params.p_x), h = std::sqrt(0.5);
  std::vector<Eigen::Matrix2cd> amp(4, Eigen::Matrix2cd::Zero());
  amp[0] << h, 0, 0, h * c;
  amp[1] << 0, h * s, 0, 0;
  amp[2] << h * c, 0, 0, h;
  amp[3] << 0, 0, h * s, 0;
  KrausChannel ch;
  ch.target_site = target_site;
  const double a = std::sqrt(1.0 - params.p_z), b = std::sqrt(params.p_z);
  for (const auto& K : amp) {
    ch.operators.push_back(a * K);
    if (b > 0) ch.operators.push_back(b * pauli('Z') * K);
  }
  return ch;
}

Eigen::MatrixXcd apply_channel(const Eigen::MatrixXcd& rho, int n_sites, const KrausChannel& channel) {
  const Eigen::Index dim = Eigen::Index(1) << n_sites;
  if (rho.rows() != dim || rho.cols() != dim) throw InvalidArgument("apply_channel: dimension mismatch");
  if (channel.target_site < 0 || channel.target_site >= n_sites) throw InvalidArgument("apply_channel: target site out of range");
  const Eigen::Index bit = Eigen::Index(1) << (n_sites - 1 - channel.target_site);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& K : channel.operators) {
    Eigen::MatrixXcd left(dim, dim);  // K acting on rows
    for (Eigen::Index r = 0; r < dim; ++r) {
      if (r & bit) continue;
      const Eigen::Index r1 = r | bit;
      left.row(r) = K(0, 0) * rho.row(r) + K(0, 1) * rho.row(r1);
      left.row(r1) = K(1, 0) * rho.row(r) + K(1, 1) * rho.row(r1);
    }
    for (Eigen::Index c = 0; c < dim; ++c) {
      if (c & bit) continue;
      const Eigen::Index c1 = c | bit;
      out.col(c) += std::conj(K(0, 0)) * left.col(c) + std::conj(K(0, 1)) * left.col(c1);
      out.col(c1) += std::conj(K(1, 0)) * left.col(c) + std::conj(K(1, 1)) * left.col(c1);
    }
  }
  return out;
}

DensityMatrix apply_channel(const DensityMatrix& rho, const KrausChannel& channel) {
  return {apply_channel(rho.matrix, rho.n_sites, channel), rho.n_sites};
}

ElectronTrace relax(const ElectronTrace& trace, double T1, double T2, RelaxSites sites) {
  ElectronTrace out = trace;
  for (std::size_t k = 0; k < trace.times.size(); ++k) {
    const auto params = RelaxationParams::from_times(trace.times[k], T1, T2);
    Eigen::MatrixXcd r = trace.rho[k];
    r = apply_channel(r, 2, infinite_temperature_thermal_channel(params, 1));
    if (sites == RelaxSites::Both) r = apply_channel(r, 2, infinite_temperature_thermal_channel(params, 0));
    out.rho[k] = r;
  }
  return out;
}

double half_rate_max_deviation(const SpinSystemSpec& spec, const std::vector<double>& times, int threads) {
  spec.validate();
  const double T1 = spec.relaxation.T1, T2 = spec.relaxation.T2;
  std::vector<ElectronTrace> traces;
  if (spec.groups.size() == 1) {
    const auto H = build_reduced_one_group(spec);
    const Propagator prop(H.matrix);
    const int real = H.nuclear_dim - H.padded_nuclear;
    traces.resize(static_cast<std::size_t>(real));
    parallel_for(traces.size(), threads, [&](std::size_t i) {
      traces[i] = electron_trace(prop, initial_sector_vector(static_cast<int>(i), H.nuclear_dim), times);
    });
  } else {
    const auto sectors = two_group_sectors(spec);
    traces.resize(sectors.size());
    parallel_for(sectors.size(), threads, [&](std::size_t i) {
      const auto H = build_two_group_block(sectors[i], spec);
      const Propagator prop(H.matrix);
      std::vector<int> all(static_cast<std::size_t>(H.nuclear_dim));
      std::iota(all.begin(), all.end(), 0);
      traces[i] = electron_trace_mixed(prop, H.nuclear_dim, all, times);
    });
  }
  double worst = 0.0;
  for (const auto& tr : traces) {
    const auto both = singlet_series(relax(tr, T1, T2, RelaxSites::Both), "both");
    const auto one = singlet_series(relax(tr, T1 / 2.0, T2 / 2.0, RelaxSites::Electron1), "one");
    for (std::size_t k = 0; k < times.size(); ++k) worst = std::max(worst, std::abs(both.values[k] - one.values[k]));
  }
  return worst;
}

bool half_rate_equivalence_check(const SpinSystemSpec& spec, const std::vector<double>& times, double tol) {
  return half_rate_max_deviation(spec, times) <= tol;
}

}  // namespace rpbeats
