#include <doctest.h>

#include <cmath>

#include "rpbeats/errors.hpp"
#include "rpbeats/spin_algebra.hpp"

using namespace rpbeats;

namespace {

// Number of spin-I multiplets among n spin-1/2: C(n, n/2 - I) - C(n, n/2 - I - 1).
long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

long long multiplets(int n, HalfInt I) {
  const int k = (n - I.twice()) / 2;
  return binomial(n, k) - binomial(n, k - 1);
}

}  // namespace

TEST_CASE("half-integer arithmetic") {
  const HalfInt a = HalfInt::from_twice(3);
  CHECK(a.value() == 1.5);
  CHECK(a.multiplicity() == 4);
  CHECK_FALSE(a.is_integer());
  CHECK((a + kHalf) == HalfInt::from_int(2));
  CHECK(abs(-a) == a);
  CHECK(a.str() == "3/2");
  CHECK(HalfInt::from_int(4).str() == "4");
}

TEST_CASE("spin addition rows match the binomial multiplet count") {
  for (int n = 1; n <= 16; ++n) {
    const auto row = spin_addition_counts(n);
    CHECK(state_count(row) == (1LL << n));
    for (const auto& [I, c] : row) {
      CHECK(I.twice() >= 0);
      CHECK((n - I.twice()) % 2 == 0);
      CHECK(c == multiplets(n, I));
    }
    CHECK(add_half_spin(row) == spin_addition_counts(n + 1));
  }
}

TEST_CASE("published rows") {
  const auto r8 = spin_addition_counts(8);
  CHECK(r8.at(HalfInt::from_int(0)) == 14);
  CHECK(r8.at(HalfInt::from_int(1)) == 28);
  CHECK(r8.at(HalfInt::from_int(2)) == 20);
  CHECK(r8.at(HalfInt::from_int(3)) == 7);
  CHECK(r8.at(HalfInt::from_int(4)) == 1);
  const auto r9 = spin_addition_counts(9);
  CHECK(r9.at(HalfInt::from_twice(1)) == 42);
  CHECK(r9.at(HalfInt::from_twice(3)) == 48);
  CHECK(r9.at(HalfInt::from_twice(9)) == 1);
  const auto r12 = spin_addition_counts(12);
  const long long want[] = {132, 297, 275, 154, 54, 11, 1};
  for (int I = 0; I <= 6; ++I) CHECK(r12.at(HalfInt::from_int(I)) == want[I]);
  CHECK(spin_addition_counts(1).size() == 1);
  CHECK(total_spins_descending(r8).front() == HalfInt::from_int(4));
}

TEST_CASE("spin addition rejects empty systems") {
  CHECK_THROWS_AS(spin_addition_counts(0), InvalidArgument);
  CHECK_THROWS_AS(spin_addition_counts(-3), InvalidArgument);
}

TEST_CASE("Clebsch-Gordan blocks") {
  const auto M0 = cg_block_matrix(HalfInt::from_int(0));
  CHECK(M0.rows() == 2);
  CHECK((M0 - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-15);

  const auto Mh = cg_block_matrix(kHalf);
  CHECK(Mh.rows() == 4);
  CHECK(std::abs(std::abs(Mh(1, 1)) - 1 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(std::abs(Mh(2, 1)) - 1 / std::sqrt(2.0)) < 1e-15);

  const auto M1 = cg_block_matrix(HalfInt::from_int(1));
  CHECK(M1.rows() == 6);
  for (Eigen::Index i = 0; i < 6; ++i)
    for (Eigen::Index j = 0; j < 6; ++j) {
      const double v = std::abs(M1(i, j));
      const bool allowed = v < 1e-15 || std::abs(v - 1) < 1e-15 || std::abs(v - std::sqrt(1.0 / 3)) < 1e-15 ||
                           std::abs(v - std::sqrt(2.0 / 3)) < 1e-15;
      CHECK(allowed);
    }

  for (int tw = 0; tw <= 16; ++tw) {
    const auto M = cg_block_matrix(HalfInt::from_twice(tw));
    const auto n = M.rows();
    CHECK(n == 2 * (tw + 1));
    CHECK((M.transpose() * M - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((M - M.transpose()).cwiseAbs().maxCoeff() < 1e-15);
  }
}

TEST_CASE("coupled eigenvalues of I.S") {
  for (int tw = 1; tw <= 12; ++tw) {
    const HalfInt I = HalfInt::from_twice(tw);
    const auto lam = cg_block_eigenvalues(I);
    int up = 0, down = 0;
    for (Eigen::Index k = 0; k < lam.size(); ++k) {
      if (std::abs(lam(k) - I.value() / 2) < 1e-15) ++up;
      else if (std::abs(lam(k) + (I.value() + 1) / 2) < 1e-15) ++down;
    }
    CHECK(up == tw + 2);
    CHECK(down == tw);
  }
  // stretched states of the I1 = 1 and I2 = 6 couplings
  CHECK(cg_block_eigenvalues(HalfInt::from_int(1))(0) == doctest::Approx(0.5));
  CHECK(cg_block_eigenvalues(HalfInt::from_int(6))(0) == doctest::Approx(3.0));
}

TEST_CASE("CG blocks diagonalize I.S in the product basis") {
  for (int tw = 0; tw <= 10; ++tw) {
    const HalfInt I = HalfInt::from_twice(tw);
    const int dm = tw + 1;
    Eigen::MatrixXd IS = Eigen::MatrixXd::Zero(2 * dm, 2 * dm);
    const double j = I.value();
    for (int a = 0; a < dm; ++a) {
      const double m = j - a;
      IS(2 * a, 2 * a) += 0.5 * m;
      IS(2 * a + 1, 2 * a + 1) -= 0.5 * m;
      // I+ S- : |m, up> -> |m+1, down>
      if (a > 0) {
        const double c = 0.5 * std::sqrt(j * (j + 1) - m * (m + 1));
        IS(2 * (a - 1) + 1, 2 * a) += c;
        IS(2 * a, 2 * (a - 1) + 1) += c;
      }
    }
    const auto M = cg_block_matrix(I);
    const Eigen::MatrixXd back = M * cg_block_eigenvalues(I).asDiagonal() * M.transpose();
    CHECK((back - IS).cwiseAbs().maxCoeff() < 1e-14);
  }
}
