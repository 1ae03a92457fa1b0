#pragma once

#include <vector>

#include <Eigen/Dense>

#include "rpbeats/dynamics.hpp"
#include "rpbeats/hamiltonian.hpp"

namespace rpbeats {

struct RelaxationParams {
  double t = 0.0;  // ns
  double T1 = kInfinity;
  double T2 = kInfinity;
  double p_x = 0.0;
  double p_z = 0.0;
  double phi_x = 0.0;  // rad

  static RelaxationParams from_times(double t, double T1, double T2);
};

struct KrausChannel {
  std::vector<Eigen::Matrix2cd> operators;
  int target_site = 0;

  double completeness_error() const;
};

// Amplitude damping symmetrized over both decay directions, followed by a
// phase flip with probability p_z. Unital.
KrausChannel infinite_temperature_thermal_channel(const RelaxationParams& params, int target_site = 0);

Eigen::MatrixXcd apply_channel(const Eigen::MatrixXcd& rho, int n_sites, const KrausChannel& channel);
DensityMatrix apply_channel(const DensityMatrix& rho, const KrausChannel& channel);

enum class RelaxSites { Both, Electron1 };

// Applies the channel at each sample time to (electron 2, electron 1).
ElectronTrace relax(const ElectronTrace& trace, double T1, double T2, RelaxSites sites = RelaxSites::Both);

// Largest singlet-probability gap between relaxing both electrons at (T1,T2)
// and relaxing electron 1 alone at (T1/2,T2/2), over every initial sector.
double half_rate_max_deviation(const SpinSystemSpec& spec, const std::vector<double>& times, int threads = 1);
bool half_rate_equivalence_check(const SpinSystemSpec& spec, const std::vector<double>& times, double tol = 1e-10);

}  // namespace rpbeats
