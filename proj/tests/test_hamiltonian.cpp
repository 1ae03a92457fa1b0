#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "rpbeats/dynamics.hpp"
#include "rpbeats/errors.hpp"
#include "rpbeats/hamiltonian.hpp"
#include "rpbeats/linalg.hpp"
#include "rpbeats/spin_algebra.hpp"
#include "rpbeats/units.hpp"

using namespace rpbeats;

namespace {

SpinSystemSpec one_group(int n, double a_mt, double field, double g1 = 2.0028, double g2 = 2.0028) {
  SpinSystemSpec s;
  s.groups = {{n, a_mt}};
  s.g1 = g1;
  s.g2 = g2;
  s.field_t = field;
  return s;
}

// Single-site operator P on `site` of an n-site register (site 0 most significant).
Eigen::MatrixXcd site_op(char P, int site, int n) {
  std::string ops(static_cast<std::size_t>(n), 'I');
  ops[static_cast<std::size_t>(site)] = P;
  return pauli_string_matrix(ops);
}

// Product-space Hamiltonian written out from Pauli matrices: electron 2 at
// site 0, nuclei at 1..n, electron 1 last.
Eigen::MatrixXcd product_oracle(int n, double wa, double wz1, double wz2) {
  const int sites = n + 2;
  const int e1 = n + 1;
  const auto d = static_cast<Eigen::Index>(1) << sites;
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(d, d);
  for (int k = 1; k <= n; ++k)
    for (char P : {'X', 'Y', 'Z'}) H += 0.25 * wa * site_op(P, k, sites) * site_op(P, e1, sites);
  H -= wz1 * site_op('Z', e1, sites);
  H -= wz2 * site_op('Z', 0, sites);
  return H;
}

std::vector<double> sorted_eigenvalues(const Eigen::MatrixXcd& H) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
  std::vector<double> v(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  return v;
}

}  // namespace

TEST_CASE("unit conversions") {
  CHECK(units::gauss_to_mt(24.9) == doctest::Approx(2.49));
  CHECK(units::hfc_angular(2.49, 2.0028) == doctest::Approx(0.08794 * 2.0028 * 2.49).epsilon(1e-12));
  CHECK(units::zeeman_half_angular(2.0028, 0.3) == doctest::Approx(87.94 * 2.0028 * 0.3 / 2).epsilon(1e-12));
  const auto s = one_group(8, 2.49, 0.3);
  CHECK(s.zeeman1() == doctest::Approx(26.4189).epsilon(1e-5));
}

TEST_CASE("spin system validation") {
  auto s = one_group(8, 2.49, 0.0);
  CHECK_NOTHROW(s.validate());
  s.relaxation = {9.0, 20.0};
  CHECK_THROWS_AS(s.validate(), UnphysicalParameters);
  s.relaxation = {kInfinity, 9.0};
  CHECK_NOTHROW(s.validate());
  s.relaxation = {9.0, 18.0};
  CHECK_NOTHROW(s.validate());
  s.relaxation = {-1.0, 1.0};
  CHECK_THROWS(s.validate());
  s = one_group(8, 2.49, 0.0);
  s.groups.clear();
  CHECK_THROWS(s.validate());
  s.groups = {{1, 1.0}, {1, 1.0}, {1, 1.0}};
  CHECK_THROWS(s.validate());
  s.groups = {{0, 1.0}};
  CHECK_THROWS(s.validate());
  s.groups = {{2, std::nan("")}};
  CHECK_THROWS(s.validate());
}

TEST_CASE("product-space builder matches the Pauli-sum oracle") {
  for (int n : {1, 2, 3}) {
    const auto s = one_group(n, 1.7, 0.05, 2.0028, 2.0041);
    const auto H = build_full_one_group(s);
    const auto ref = product_oracle(n, s.hfc_angular(0), s.zeeman1(), s.zeeman2());
    CHECK(max_abs(H.matrix - ref) < 1e-13);
    CHECK(H.nuclear_dim == (1 << n));
  }
}

TEST_CASE("one nucleus at zero field: a/4 triplet and -3a/4 singlet") {
  const auto s = one_group(1, 3.0, 0.0);
  const double a = s.hfc_angular(0);
  const auto ev = sorted_eigenvalues(build_full_one_group(s).matrix);
  REQUIRE(ev.size() == 8);
  // electron 2 doubles every level
  CHECK(ev[0] == doctest::Approx(-0.75 * a));
  CHECK(ev[1] == doctest::Approx(-0.75 * a));
  for (int k = 2; k < 8; ++k) CHECK(ev[k] == doctest::Approx(0.25 * a));
}

TEST_CASE("octalin zero-field spectrum and multiplicities") {
  const auto s = one_group(8, 2.49, 0.0);
  const double a = s.hfc_angular(0);
  const auto ev = sorted_eigenvalues(build_full_one_group(s).matrix);
  std::map<int, int> counts;  // twice the energy in units of a
  for (double e : ev) {
    const double x = 2 * e / a;
    CHECK(std::abs(x - std::round(x)) < 1e-9);
    ++counts[static_cast<int>(std::lround(x))];
  }
  const std::map<int, int> want = {{0, 28}, {-2, 56}, {1, 112}, {-3, 80}, {2, 120},
                                   {-4, 42}, {3, 56}, {-5, 8},  {4, 10}};
  REQUIRE(counts.size() == want.size());
  for (const auto& [k, c] : want) CHECK(counts[k] == 2 * c);

  // reduced basis: same distinct levels plus padded zeros
  const auto R = build_reduced_one_group(s);
  for (double e : sorted_eigenvalues(R.matrix)) {
    const int k = static_cast<int>(std::lround(2 * e / a));
    CHECK(want.count(k) == 1);
  }
}

TEST_CASE("zero hyperfine, equal g: singlet is annihilated by the Zeeman sum") {
  const auto s = one_group(1, 0.0, 0.3);
  const auto H = build_full_one_group(s);
  for (Eigen::Index i = 0; i < H.dim(); ++i)
    for (Eigen::Index j = 0; j < H.dim(); ++j)
      if (i != j) CHECK(std::abs(H.matrix(i, j)) == 0.0);
  const Eigen::VectorXcd psi = initial_sector_vector(0, 2);
  CHECK((H.matrix * psi).norm() < 1e-13);
}

TEST_CASE("reduced one-group Hamiltonian structure") {
  for (double B : {0.0, 0.3}) {
    const auto s = one_group(8, 2.49, B);
    const auto H = build_reduced_one_group(s);
    CHECK(H.dim() == 128);
    CHECK(H.nuclear_dim == 32);
    CHECK(H.padded_nuclear == 7);
    CHECK(H.qubits() == 7);
    CHECK(hermiticity_error(H.matrix) <= 1e-13);
    int zero_rows = 0;
    for (Eigen::Index r = 0; r < H.dim(); ++r)
      if (H.labels[static_cast<std::size_t>(r)].padded) {
        CHECK(H.matrix.row(r).cwiseAbs().maxCoeff() == 0.0);
        CHECK(H.matrix.col(r).cwiseAbs().maxCoeff() == 0.0);
        ++zero_rows;
      }
    CHECK(zero_rows == 28);
  }
}

TEST_CASE("basis index conventions") {
  const auto I = [](int v) { return HalfInt::from_int(v); };
  CHECK(reduced_index(8, I(4), I(4)) == 0);
  CHECK(reduced_index(8, I(4), I(2)) == 2);
  CHECK(bit_string(reduced_index(8, I(4), I(2)), 5) == "00010");
  CHECK(reduced_index(8, I(2), I(2)) == 16);
  CHECK(bit_string(16, 5) == "10000");
  CHECK(reduced_index(8, I(0), I(0)) == 24);
  CHECK(bit_string(24, 5) == "11000");
  CHECK(degenerate_index(8, I(4), I(4)) == 0);
  CHECK(degenerate_index(8, I(4), I(2)) == 2);
  CHECK(bit_string(2, 8) == "00000010");
  CHECK(degenerate_index(8, I(2), I(2)) == 58);
  CHECK(degenerate_index(8, I(3), I(3), 1) == 16);
  CHECK_THROWS(reduced_index(8, I(5), I(5)));
  CHECK_THROWS(reduced_index(8, I(2), I(3)));
}

TEST_CASE("total-spin states are S^2 and S_z eigenvectors") {
  for (int n : {2, 3, 4, 5}) {
    Eigen::MatrixXcd S2 = Eigen::MatrixXcd::Zero(1 << n, 1 << n), Sz = S2;
    for (char P : {'X', 'Y', 'Z'}) {
      Eigen::MatrixXcd tot = Eigen::MatrixXcd::Zero(1 << n, 1 << n);
      for (int k = 0; k < n; ++k) tot += 0.5 * site_op(P, k, n);
      S2 += tot * tot;
      if (P == 'Z') Sz = tot;
    }
    for (const auto& [I, c] : spin_addition_counts(n))
      for (int k = 0; k < I.multiplicity(); ++k) {
        const HalfInt m = I - HalfInt::from_int(k);
        const Eigen::VectorXcd v = total_spin_state(n, I, m).cast<cplx>();
        CHECK(v.norm() == doctest::Approx(1.0));
        CHECK((S2 * v - I.value() * (I.value() + 1) * v).norm() < 1e-12);
        CHECK((Sz * v - m.value() * v).norm() < 1e-12);
      }
  }
}

TEST_CASE("partition parameters") {
  const auto p4 = partition_parameters(HalfInt::from_int(4));
  CHECK(p4.x == doctest::Approx(std::sqrt(1.0 / 9)));
  CHECK(p4.y == doctest::Approx(std::sqrt(8.0 / 9)));
  CHECK(p4.lambda1 == 2.0);
  CHECK(p4.lambda2 == -2.5);
  const auto p1 = partition_parameters(HalfInt::from_int(1));
  CHECK(p1.x == doctest::Approx(std::sqrt(1.0 / 3)));
  CHECK(p1.y == doctest::Approx(std::sqrt(2.0 / 3)));
  CHECK(p1.lambda1 == 0.5);
  CHECK(p1.lambda2 == -1.0);
  const auto p0 = partition_parameters(HalfInt::from_int(0));
  CHECK(p0.lambda1 == 0.0);
  CHECK(p0.lambda2 == 0.0);
  const auto s = one_group(8, 2.49, 0.0);
  CHECK(max_abs(partitioned_two_site_block(HalfInt::from_int(0), s)) == 0.0);
}

TEST_CASE("Pauli decomposition of the partitioned Hamiltonian") {
  for (double B : {0.0, 0.3}) {
    const auto s = one_group(8, 2.49, B);
    for (int Iv = 0; Iv <= 4; ++Iv) {
      const HalfInt I = HalfInt::from_int(Iv);
      const auto H = build_partitioned(I, s);
      const auto terms = pauli_decompose_partitioned(I, s);
      const std::vector<std::string> order = {"III", "IZI", "IIZ", "IZZ", "IXX", "IYY", "ZII"};
      REQUIRE(terms.size() == order.size());
      for (std::size_t k = 0; k < terms.size(); ++k) {
        CHECK(terms[k].ops == order[k]);
        // Hilbert-Schmidt projection as the oracle for each coefficient
        const double c = (pauli_string_matrix(terms[k].ops) * H.matrix).trace().real() / 8.0;
        CHECK(std::abs(terms[k].coeff - c) < 1e-13);
      }
      CHECK(max_abs(pauli_sum(terms) - H.matrix) <= 1e-13);
      const auto p = partition_parameters(I);
      const double xy = (p.lambda1 - p.lambda2) * p.x * p.y / 2.0 * s.hfc_angular(0);
      CHECK(terms[4].coeff == doctest::Approx(Iv == 0 ? 0.0 : xy));
      CHECK(terms[5].coeff == doctest::Approx(terms[4].coeff));
      if (B == 0.0) CHECK(terms[6].coeff == 0.0);
    }
  }
}

TEST_CASE("partitioned evolution equals the reduced basis for |I,I>") {
  const auto s = one_group(8, 2.49, 0.3);
  const auto times = uniform_grid(0.0, 20.0, 0.5);
  const auto R = build_reduced_one_group(s);
  const Propagator pr(R.matrix);
  for (int Iv = 0; Iv <= 4; ++Iv) {
    const HalfInt I = HalfInt::from_int(Iv);
    const Propagator pp(build_partitioned(I, s).matrix);
    const auto a = singlet_series(electron_trace(pp, initial_sector_vector(0, 2), times), "p");
    const auto b = singlet_series(electron_trace(pr, initial_sector_vector(reduced_index(8, I, I), 32), times), "r");
    for (std::size_t k = 0; k < times.size(); ++k) CHECK(std::abs(a.values[k] - b.values[k]) <= 1e-10);
  }
}

TEST_CASE("two-group sector blocks") {
  SpinSystemSpec s;
  s.groups = {{2, 0.65}, {12, 1.66}};
  s.g1 = s.g2 = 2.0028;
  s.field_t = 0.1;
  const auto sectors = two_group_sectors(s);
  REQUIRE(sectors.size() == 7);
  const auto b1 = build_two_group_block(HalfInt::from_int(1), s);
  CHECK(b1.dim() == 64);
  CHECK(b1.nuclear_dim == 16);
  CHECK(b1.padded_nuclear == 4);
  CHECK(b1.padded_rows == 16);
  CHECK(b1.degeneracy == 297);
  for (const auto& I2 : sectors) {
    const auto b = build_two_group_block(I2, s);
    CHECK(hermiticity_error(b.matrix) <= 1e-13);
    CHECK((b.dim() & (b.dim() - 1)) == 0);
    for (Eigen::Index r = 0; r < b.dim(); ++r)
      if (b.labels[static_cast<std::size_t>(r)].padded) CHECK(b.matrix.row(r).cwiseAbs().maxCoeff() == 0.0);
  }
  SpinSystemSpec big = s;
  big.groups = {{3, 0.65}, {12, 1.66}};
  CHECK_THROWS(build_two_group_block(HalfInt::from_int(1), big));
}
