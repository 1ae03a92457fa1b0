#pragma once

#include <complex>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace rpbeats {

using cplx = std::complex<double>;

Eigen::Matrix2cd pauli(char p);

// Tensor product of single-site Paulis; the first letter acts on the most
// significant site.
Eigen::MatrixXcd pauli_string_matrix(std::string_view ops);

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

double max_abs(const Eigen::MatrixXcd& m);
double hermiticity_error(const Eigen::MatrixXcd& m);

// Max elementwise deviation after aligning the global phase of `b` to `a`
// on the largest-magnitude element of `a`.
double phase_aligned_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

// exp(-i H t) for Hermitian H.
Eigen::MatrixXcd unitary_from_hermitian(const Eigen::MatrixXcd& H, double t);

// Reduced density matrix on the listed sites of an n-qubit register
// (site 0 most significant). Output keeps the listed order.
Eigen::MatrixXcd partial_trace_keep(const Eigen::MatrixXcd& rho, int n_sites, const std::vector<int>& keep);

// Two-qubit singlet (|01> - |10>)/sqrt2 with 0 = up.
Eigen::Vector4cd singlet_vector();
Eigen::Matrix4cd singlet_projector();

}  // namespace rpbeats
