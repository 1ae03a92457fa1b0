#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rpbeats/half_int.hpp"

namespace rpbeats {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct NuclearGroup {
  int count = 0;
  double hfc_mt = 0.0;
};

struct RelaxationTimes {
  double T1 = kInfinity;  // ns
  double T2 = kInfinity;  // ns
};

// Radical pair: nuclear groups couple to electron 1 (the cation).
struct SpinSystemSpec {
  std::vector<NuclearGroup> groups;
  double g1 = 2.0023;
  double g2 = 2.0023;
  double field_t = 0.0;
  RelaxationTimes relaxation;

  void validate() const;
  double hfc_angular(std::size_t group) const;
  double zeeman1() const;  // rad/ns, coefficient of -Z on electron 1
  double zeeman2() const;
};

struct BasisLabel {
  std::optional<HalfInt> I2, m2;
  HalfInt I, m;
  int e1 = 1;  // +1 up, -1 down
  int e2 = 1;
  bool padded = false;
};

// Register layout shared by every builder: electron 2 is the most
// significant qubit, then the nuclear register, electron 1 last.
struct BlockHamiltonian {
  Eigen::MatrixXcd matrix;
  std::vector<BasisLabel> labels;  // empty for the product-space oracle
  long long degeneracy = 1;
  int padded_rows = 0;
  int nuclear_dim = 0;     // includes padding, power of two
  int padded_nuclear = 0;  // nuclear basis states that are padding

  int dim() const { return static_cast<int>(matrix.rows()); }
  int qubits() const;
};

// Product-space Hamiltonian (one or two groups, at most 10 nuclei total).
// Nuclear spin order: last group first, spin 0 most significant.
BlockHamiltonian build_full_product(const SpinSystemSpec& spec);
BlockHamiltonian build_full_one_group(const SpinSystemSpec& spec);

// |I,m> for n spin-1/2 particles (up = bit 0, spin 0 most significant),
// built from singlet pairs on the leading spins and stretched remaining spins.
Eigen::VectorXd total_spin_state(int n_spins, HalfInt I, HalfInt m);

BlockHamiltonian build_reduced_one_group(const SpinSystemSpec& spec);
int reduced_index(int n_nuclei, HalfInt I, HalfInt m);
int degenerate_index(int n_nuclei, HalfInt I, HalfInt m, int copy = 0);
std::string bit_string(int index, int width);

struct PartitionParams {
  double x = 1.0, y = 0.0, lambda1 = 0.0, lambda2 = 0.0;
};
PartitionParams partition_parameters(HalfInt I);

// 8x8 Hamiltonian on (electron 2, auxiliary qubit, electron 1) for |I,I>.
BlockHamiltonian build_partitioned(HalfInt I, const SpinSystemSpec& spec);
// Hyperfine plus electron-1 Zeeman part acting on (auxiliary, electron 1).
Eigen::Matrix4cd partitioned_two_site_block(HalfInt I, const SpinSystemSpec& spec);

struct PauliTerm {
  double coeff = 0.0;
  std::string ops;
};
std::vector<PauliTerm> pauli_decompose_partitioned(HalfInt I, const SpinSystemSpec& spec);
Eigen::MatrixXcd pauli_sum(const std::vector<PauliTerm>& terms);

// Sector of fixed I2 for two groups; group 0 must have at most two nuclei.
BlockHamiltonian build_two_group_block(HalfInt I2, const SpinSystemSpec& spec);
std::vector<HalfInt> two_group_sectors(const SpinSystemSpec& spec);

}  // namespace rpbeats
