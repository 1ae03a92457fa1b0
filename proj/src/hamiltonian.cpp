#include "rpbeats/hamiltonian.hpp"

#include <bit>
#include <cmath>

#include "rpbeats/errors.hpp"
#include "rpbeats/linalg.hpp"
#include "rpbeats/spin_algebra.hpp"
#include "rpbeats/units.hpp"

namespace rpbeats {

namespace {

int next_pow2(int n) { return static_cast<int>(std::bit_ceil(static_cast<unsigned>(std::max(n, 1)))); }

void check_spin_in_row(int n_nuclei, HalfInt I, const char* who) {
  const auto row = spin_addition_counts(n_nuclei);
  if (!row.count(I))
    throw InvalidArgument(std::string(who) + ": I=" + I.str() + " not allowed for " + std::to_string(n_nuclei) +
                          " nuclei");
}

void check_m(HalfInt I, HalfInt m) {
  if (abs(m) > I || (I.twice() - m.twice()) % 2 != 0)
    throw InvalidArgument("invalid magnetic number m=" + m.str() + " for I=" + I.str());
}

// Sum_{I' > I} count(I') * (2I'+1) with count taken as 1 when `degenerate` is false.
int offset_before(int n_nuclei, HalfInt I, bool degenerate) {
  int off = 0;
  for (const auto& [J, count] : spin_addition_counts(n_nuclei))
    if (J > I) off += static_cast<int>(degenerate ? count : 1) * J.multiplicity();
  return off;
}

}  // namespace

void SpinSystemSpec::validate() const {
  if (groups.empty() || groups.size() > 2) throw InvalidArgument("spin system needs one or two nuclear groups");
  for (const auto& g : groups) {
    if (g.count < 1) throw InvalidArgument("nuclear group count must be >= 1");
    if (!std::isfinite(g.hfc_mt)) throw InvalidArgument("hyperfine constant must be finite");
  }
  if (!std::isfinite(g1) || !std::isfinite(g2) || !std::isfinite(field_t))
    throw InvalidArgument("g-factors and field must be finite");
  const double T1 = relaxation.T1, T2 = relaxation.T2;
  if (!(T1 > 0) || !(T2 > 0)) throw UnphysicalParameters("relaxation times must be positive");
  if (std::isfinite(T1) && std::isfinite(T2) && T2 > 2.0 * T1)
    throw UnphysicalParameters("T2 must not exceed 2*T1");
  if (std::isfinite(T1) && !std::isfinite(T2))
    throw UnphysicalParameters("finite T1 with infinite T2 is unphysical");
}

double SpinSystemSpec::hfc_angular(std::size_t group) const { return units::hfc_angular(groups.at(group).hfc_mt, g1); }
double SpinSystemSpec::zeeman1() const { return units::zeeman_half_angular(g1, field_t); }
double SpinSystemSpec::zeeman2() const { return units::zeeman_half_angular(g2, field_t); }

int BlockHamiltonian::qubits() const { return std::countr_zero(static_cast<unsigned>(dim())); }

BlockHamiltonian build_full_product(const SpinSystemSpec& spec) {
  spec.validate();
  int n_nuc = 0;
  for (const auto& g : spec.groups) n_nuc += g.count;
  if (n_nuc > 10) throw InvalidArgument("product-space oracle limited to 10 nuclei");
  const int n = n_nuc + 2;
  const Eigen::Index dim = Eigen::Index(1) << n;

  // bit position (from least significant) and coupling of every nucleus
  std::vector<std::pair<int, double>> nuclei;
  int site = 1;
  for (auto g = spec.groups.size(); g-- > 0;) {
    const double w = spec.hfc_angular(g);
    for (int k = 0; k < spec.groups[g].count; ++k) nuclei.emplace_back(n - 1 - site++, w);
  }
  const int e1_bit = 0, e2_bit = n - 1;
  const double wz1 = spec.zeeman1(), wz2 = spec.zeeman2();

  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(dim, dim);
  auto z = [](Eigen::Index b, int bit) { return ((b >> bit) & 1) ? -1.0 : 1.0; };
  for (Eigen::Index b = 0; b < dim; ++b) {
    double diag = -wz1 * z(b, e1_bit) - wz2 * z(b, e2_bit);
    for (const auto& [bit, w] : nuclei) {
      diag += 0.25 * w * z(b, bit) * z(b, e1_bit);
      if (((b >> bit) & 1) != ((b >> e1_bit) & 1)) {
        const Eigen::Index flipped = b ^ (Eigen::Index(1) << bit) ^ (Eigen::Index(1) << e1_bit);
        H(flipped, b) += 0.5 * w;
      }
    }
    H(b, b) += diag;
  }
  BlockHamiltonian out;
  out.matrix = std::move(H);
  out.nuclear_dim = 1 << n_nuc;
  return out;
}

BlockHamiltonian build_full_one_group(const SpinSystemSpec& spec) {
  spec.validate();
  if (spec.groups.size() != 1) throw InvalidArgument("build_full_one_group: exactly one nuclear group required");
  return build_full_product(spec);
}

Eigen::VectorXd total_spin_state(int n_spins, HalfInt I, HalfInt m) {
  if (n_spins < 1 || I.twice() > n_spins || (n_spins - I.twice()) % 2 != 0)
    throw InvalidArgument("total_spin_state: I=" + I.str() + " impossible for " + std::to_string(n_spins) + " spins");
  check_m(I, m);
  const Eigen::Index dim = Eigen::Index(1) << n_spins;
  const int pairs = (n_spins - I.twice()) / 2;
  Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
  v(0) = 1.0;
  for (int p = 0; p < pairs; ++p) {
    const int b0 = n_spins - 1 - 2 * p, b1 = n_spins - 2 - 2 * p;
    Eigen::VectorXd w = Eigen::VectorXd::Zero(dim);
    for (Eigen::Index b = 0; b < dim; ++b) {
      if (v(b) == 0.0) continue;
      // spins 2p, 2p+1 are up here; replace with (|ud> - |du>)/sqrt2
      w(b | (Eigen::Index(1) << b1)) += v(b) / std::sqrt(2.0);
      w(b | (Eigen::Index(1) << b0)) -= v(b) / std::sqrt(2.0);
    }
    v = w;
  }
  for (int k = 0; k < (I.twice() - m.twice()) / 2; ++k) {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(dim);
    for (Eigen::Index b = 0; b < dim; ++b) {
      if (v(b) == 0.0) continue;
      for (int bit = 0; bit < n_spins; ++bit)
        if (!((b >> bit) & 1)) w(b | (Eigen::Index(1) << bit)) += v(b);
    }
    v = w / w.norm();
  }
  return v;
}

int reduced_index(int n_nuclei, HalfInt I, HalfInt m) {
  check_spin_in_row(n_nuclei, I, "reduced_index");
  check_m(I, m);
  return offset_before(n_nuclei, I, false) + (I.twice() - m.twice()) / 2;
}

int degenerate_index(int n_nuclei, HalfInt I, HalfInt m, int copy) {
  check_spin_in_row(n_nuclei, I, "degenerate_index");
  check_m(I, m);
  if (copy < 0 || copy >= spin_addition_counts(n_nuclei).at(I))
    throw InvalidArgument("degenerate_index: copy out of range");
  return offset_before(n_nuclei, I, true) + copy * I.multiplicity() + (I.twice() - m.twice()) / 2;
}

std::string bit_string(int index, int width) {
  std::string s(static_cast<std::size_t>(width), '0');
  for (int k = 0; k < width; ++k)
    if ((index >> k) & 1) s[static_cast<std::size_t>(width - 1 - k)] = '1';
  return s;
}

namespace {

// Assemble [H' - wz2, 0; 0, H' + wz2] over a padded nuclear register, with
// H' on (nuclear real states) x (electron 1). Padded rows stay zero.
BlockHamiltonian assemble_with_e2(const Eigen::MatrixXcd& Hp, int real_nuclear, double wz2,
                                  const std::vector<BasisLabel>& inner_labels) {
  const int nuclear_dim = next_pow2(real_nuclear);
  const int half = 2 * nuclear_dim;
  const int real = 2 * real_nuclear;
  BlockHamiltonian out;
  out.matrix = Eigen::MatrixXcd::Zero(2 * half, 2 * half);
  for (int e = 0; e < 2; ++e) {
    const double sign = e == 0 ? -1.0 : 1.0;
    out.matrix.block(e * half, e * half, real, real) = Hp;
    out.matrix.block(e * half, e * half, real, real).diagonal().array() += sign * wz2;
  }
  out.nuclear_dim = nuclear_dim;
  out.padded_nuclear = nuclear_dim - real_nuclear;
  out.padded_rows = 4 * out.padded_nuclear;
  out.labels.reserve(static_cast<std::size_t>(2 * half));
  for (int e = 0; e < 2; ++e)
    for (int r = 0; r < half; ++r) {
      BasisLabel l;
      if (r < real) {
        l = inner_labels[static_cast<std::size_t>(r)];
      } else {
        l.padded = true;
        l.e1 = r % 2 == 0 ? 1 : -1;
      }
      l.e2 = e == 0 ? 1 : -1;
      out.labels.push_back(l);
    }
  return out;
}

}  // namespace

BlockHamiltonian build_reduced_one_group(const SpinSystemSpec& spec) {
  spec.validate();
  if (spec.groups.size() != 1) throw InvalidArgument("build_reduced_one_group: exactly one nuclear group required");
  const int N = spec.groups[0].count;
  const auto spins = total_spins_descending(spin_addition_counts(N));
  int real_nuclear = 0;
  for (auto I : spins) real_nuclear += I.multiplicity();

  const int d = 2 * real_nuclear;
  Eigen::MatrixXd U = Eigen::MatrixXd::Zero(d, d);
  Eigen::VectorXd lambda(d);
  std::vector<BasisLabel> labels;
  int off = 0;
  for (auto I : spins) {
    const int b = 2 * I.multiplicity();
    U.block(off, off, b, b) = cg_block_matrix(I);
    lambda.segment(off, b) = cg_block_eigenvalues(I);
    for (int k = 0; k < b; ++k) {
      BasisLabel l;
      l.I = I;
      l.m = I - HalfInt::from_int(k / 2);
      l.e1 = k % 2 == 0 ? 1 : -1;
      labels.push_back(l);
    }
    off += b;
  }
  const double wa = spec.hfc_angular(0);
  Eigen::MatrixXcd Hp = (wa * U * lambda.asDiagonal() * U).cast<cplx>();
  for (int r = 0; r < d; ++r) Hp(r, r) -= spec.zeeman1() * (r % 2 == 0 ? 1.0 : -1.0);
  auto out = assemble_with_e2(Hp, real_nuclear, spec.zeeman2(), labels);
  out.degeneracy = 1;
  return out;
}

PartitionParams partition_parameters(HalfInt I) {
  if (I.twice() < 0) throw InvalidArgument("partition_parameters: negative spin");
  PartitionParams p;
  if (I.twice() == 0) return p;
  const double n = I.multiplicity();
  p.x = std::sqrt(1.0 / n);
  p.y = std::sqrt((n - 1.0) / n);
  p.lambda1 = 0.5 * I.value();
  p.lambda2 = -0.5 * (I.value() + 1.0);
  return p;
}

Eigen::Matrix4cd partitioned_two_site_block(HalfInt I, const SpinSystemSpec& spec) {
  spec.validate();
  if (spec.groups.size() != 1) throw InvalidArgument("partitioned Hamiltonian needs one nuclear group");
  check_spin_in_row(spec.groups[0].count, I, "build_partitioned");
  const auto p = partition_parameters(I);
  Eigen::Matrix3d M;
  M << 1, 0, 0, 0, p.x, p.y, 0, p.y, -p.x;
  const Eigen::Matrix3d h = spec.hfc_angular(0) * M * Eigen::Vector3d(p.lambda1, p.lambda1, p.lambda2).asDiagonal() * M;
  Eigen::Matrix4cd H4 = Eigen::Matrix4cd::Zero();
  H4.topLeftCorner<3, 3>() = h.cast<cplx>();
  for (int r = 0; r < 4; ++r) H4(r, r) -= spec.zeeman1() * (r % 2 == 0 ? 1.0 : -1.0);
  return H4;
}

BlockHamiltonian build_partitioned(HalfInt I, const SpinSystemSpec& spec) {
  const Eigen::Matrix4cd H4 = partitioned_two_site_block(I, spec);
  BlockHamiltonian out;
  out.matrix = kron(Eigen::Matrix2cd::Identity(), H4) - spec.zeeman2() * kron(pauli('Z'), Eigen::Matrix4cd::Identity());
  out.nuclear_dim = 2;
  for (int r = 0; r < 8; ++r) {
    BasisLabel l;
    l.I = I;
    l.m = (r / 2) % 2 == 0 ? I : I - HalfInt::from_int(1);
    l.e1 = r % 2 == 0 ? 1 : -1;
    l.e2 = r < 4 ? 1 : -1;
    out.labels.push_back(l);
  }
  return out;
}

std::vector<PauliTerm> pauli_decompose_partitioned(HalfInt I, const SpinSystemSpec& spec) {
  spec.validate();
  if (spec.groups.size() != 1) throw InvalidArgument("partitioned Hamiltonian needs one nuclear group");
  check_spin_in_row(spec.groups[0].count, I, "pauli_decompose_partitioned");
  const auto p = partition_parameters(I);
  const double wa = spec.hfc_angular(0);
  const double l1 = p.lambda1, l2 = p.lambda2;
  const double mix = (l1 - l2) * (p.x * p.x - p.y * p.y) / 4.0;
  const double flip = wa * (l1 - l2) * p.x * p.y / 2.0;
  return {
      {wa * (2.0 * l1 + l2) / 4.0, "III"},
      {wa * (l1 / 4.0 + mix), "IZI"},
      {wa * (l1 / 4.0 - mix) - spec.zeeman1(), "IIZ"},
      {-wa * l2 / 4.0, "IZZ"},
      {flip, "IXX"},
      {flip, "IYY"},
      {-spec.zeeman2(), "ZII"},
  };
}

Eigen::MatrixXcd pauli_sum(const std::vector<PauliTerm>& terms) {
  if (terms.empty()) throw InvalidArgument("pauli_sum: no terms");
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(Eigen::Index(1) << terms[0].ops.size(), Eigen::Index(1) << terms[0].ops.size());
  for (const auto& t : terms) {
    if (t.ops.size() != terms[0].ops.size()) throw InvalidArgument("pauli_sum: inconsistent string lengths");
    H += t.coeff * pauli_string_matrix(t.ops);
  }
  return H;
}

std::vector<HalfInt> two_group_sectors(const SpinSystemSpec& spec) {
  if (spec.groups.size() != 2) throw InvalidArgument("two-group system required");
  return total_spins_descending(spin_addition_counts(spec.groups[1].count));
}

BlockHamiltonian build_two_group_block(HalfInt I2, const SpinSystemSpec& spec) {
  spec.validate();
  if (spec.groups.size() != 2) throw InvalidArgument("build_two_group_block: two nuclear groups required");
  const int c1 = spec.groups[0].count, c2 = spec.groups[1].count;
  if (c1 > 2) throw InvalidArgument("build_two_group_block: first group must have at most 2 nuclei");
  const auto row2 = spin_addition_counts(c2);
  if (!row2.count(I2)) throw InvalidArgument("build_two_group_block: I2=" + I2.str() + " out of range");

  const auto spins1 = total_spins_descending(spin_addition_counts(c1));
  int n1 = 0;
  for (auto I1 : spins1) n1 += I1.multiplicity();
  const int n2 = I2.multiplicity();
  const int real_nuclear = n1 * n2;
  const int d = 2 * real_nuclear;

  Eigen::MatrixXd block1 = Eigen::MatrixXd::Zero(2 * n1, 2 * n1);
  Eigen::VectorXd lam1(2 * n1);
  std::vector<std::pair<HalfInt, HalfInt>> states1;
  int off = 0;
  for (auto I1 : spins1) {
    const int b = 2 * I1.multiplicity();
    block1.block(off, off, b, b) = cg_block_matrix(I1);
    lam1.segment(off, b) = cg_block_eigenvalues(I1);
    for (int k = 0; k < I1.multiplicity(); ++k) states1.emplace_back(I1, I1 - HalfInt::from_int(k));
    off += b;
  }
  Eigen::MatrixXd U1 = Eigen::MatrixXd::Zero(d, d);
  Eigen::VectorXd L1(d);
  for (int k = 0; k < n2; ++k) {
    U1.block(k * 2 * n1, k * 2 * n1, 2 * n1, 2 * n1) = block1;
    L1.segment(k * 2 * n1, 2 * n1) = lam1;
  }

  const Eigen::MatrixXd cg2 = cg_block_matrix(I2);
  const Eigen::VectorXd lam2 = cg_block_eigenvalues(I2);
  Eigen::MatrixXd U2 = Eigen::MatrixXd::Zero(d, d);
  Eigen::VectorXd L2 = Eigen::VectorXd::Zero(d);
  auto embed = [&](int j, int x) { return 2 * n1 * (x / 2) + 2 * j + x % 2; };
  for (int j = 0; j < n1; ++j)
    for (int x = 0; x < 2 * n2; ++x) {
      L2(embed(j, x)) = lam2(x);
      for (int y = 0; y < 2 * n2; ++y) U2(embed(j, x), embed(j, y)) = cg2(x, y);
    }

  Eigen::MatrixXcd Hp = (spec.hfc_angular(0) * U1 * L1.asDiagonal() * U1 + spec.hfc_angular(1) * U2 * L2.asDiagonal() * U2)
                            .cast<cplx>();
  for (int r = 0; r < d; ++r) Hp(r, r) -= spec.zeeman1() * (r % 2 == 0 ? 1.0 : -1.0);

  std::vector<BasisLabel> labels;
  for (int k = 0; k < n2; ++k)
    for (int j = 0; j < n1; ++j)
      for (int s = 0; s < 2; ++s) {
        BasisLabel l;
        l.I2 = I2;
        l.m2 = I2 - HalfInt::from_int(k);
        l.I = states1[static_cast<std::size_t>(j)].first;
        l.m = states1[static_cast<std::size_t>(j)].second;
        l.e1 = s == 0 ? 1 : -1;
        labels.push_back(l);
      }
  auto out = assemble_with_e2(Hp, real_nuclear, spec.zeeman2(), labels);
  out.degeneracy = row2.at(I2);
  return out;
}

}  // namespace rpbeats
