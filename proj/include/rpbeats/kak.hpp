#pragma once

#include <array>
#include <cstdint>

#include <Eigen/Dense>

#include "rpbeats/circuit.hpp"

namespace rpbeats {

struct U3Params {
  double theta = 0.0, phi = 0.0, lambda = 0.0;
};

Eigen::Matrix2cd u3_matrix(const U3Params& p);
// U3 angles reproducing V up to a global phase.
U3Params u3_from_matrix(const Eigen::Matrix2cd& V);

// V = exp(i (a XX + b YY + c ZZ)) up to local gates and phase, synthesized as
//   L3 . CNOT . L2 . CNOT . L1 . CNOT . L0
// with every CNOT controlled by the first site. layers[k] = {first, second}.
struct KakDecomposition {
  std::array<std::array<U3Params, 2>, 4> layers;
  double a = 0.0, b = 0.0, c = 0.0;

  Circuit circuit(int n_sites, int first, int second) const;
  Eigen::Matrix4cd unitary() const;
};

KakDecomposition kak_decompose(const Eigen::Matrix4cd& U);

Eigen::Matrix4cd haar_random_unitary4(std::uint64_t seed);

// Two-site block via KAK on (aux, electron 1) plus Rz on electron 2.
Circuit partitioned_kak_circuit(HalfInt I, const SpinSystemSpec& spec, double t);

}  // namespace rpbeats
