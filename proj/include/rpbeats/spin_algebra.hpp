#pragma once

#include <map>
#include <vector>

#include <Eigen/Dense>

#include "rpbeats/half_int.hpp"

namespace rpbeats {

// Multiplicity of each total spin I for n coupled spin-1/2 particles.
using MultiplicityRow = std::map<HalfInt, long long>;

MultiplicityRow spin_addition_counts(int n);

// Adds one spin-1/2 to every total spin of a row.
MultiplicityRow add_half_spin(const MultiplicityRow& row);

// Sum of multiplicity * (2I+1); equals 2^n for a valid row.
long long state_count(const MultiplicityRow& row);

// Distinct total spins of a row, largest first.
std::vector<HalfInt> total_spins_descending(const MultiplicityRow& row);

// Orthogonal change of basis from the product basis |I,m>(x)|up/down>
// (m descending, up before down) to the coupled basis |I+-1/2, M>.
// Columns are coupled states; the matrix is symmetric.
Eigen::MatrixXd cg_block_matrix(HalfInt I);

// Eigenvalues of I.S (units of the hyperfine constant) in the column order
// of cg_block_matrix: I/2 for the stretched multiplet, -(I+1)/2 otherwise.
Eigen::VectorXd cg_block_eigenvalues(HalfInt I);

}  // namespace rpbeats
