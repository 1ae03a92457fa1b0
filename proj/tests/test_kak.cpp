#include <doctest.h>

#include <cmath>

#include "rpbeats/errors.hpp"
#include "rpbeats/kak.hpp"
#include "rpbeats/linalg.hpp"

using namespace rpbeats;

namespace {

double phase_distance(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B) {
  const cplx ov = (B.adjoint() * A).trace();
  const cplx ph = std::abs(ov) > 0 ? ov / std::abs(ov) : cplx(1.0);
  return max_abs(A - ph * B);
}

}  // namespace

TEST_CASE("U3 round trip") {
  for (auto [th, ph, la] : {std::tuple{0.0, 0.0, 0.0}, std::tuple{0.3, 1.2, -0.7}, std::tuple{M_PI, 0.4, 0.1},
                            std::tuple{2.0, -2.5, 3.0}}) {
    const Eigen::Matrix2cd V = u3_matrix({th, ph, la});
    CHECK(phase_distance(u3_matrix(u3_from_matrix(V)), V) < 1e-12);
  }
  const Eigen::Matrix2cd H = (pauli('X') + pauli('Z')) / std::sqrt(2.0);
  CHECK(phase_distance(u3_matrix(u3_from_matrix(H)), H) < 1e-12);
}

TEST_CASE("KAK of special gates") {
  const Eigen::Matrix4cd I = Eigen::Matrix4cd::Identity();
  CHECK(phase_distance(kak_decompose(I).unitary(), I) < 1e-10);

  Eigen::Matrix4cd cnot = Eigen::Matrix4cd::Zero();
  cnot(0, 0) = cnot(1, 1) = cnot(2, 3) = cnot(3, 2) = 1.0;
  const auto d = kak_decompose(cnot);
  CHECK(phase_distance(d.unitary(), cnot) < 1e-10);
  CHECK(phase_distance(circuit_unitary(d.circuit(2, 0, 1)), cnot) < 1e-10);

  Eigen::Matrix4cd swap = Eigen::Matrix4cd::Zero();
  swap(0, 0) = swap(1, 2) = swap(2, 1) = swap(3, 3) = 1.0;
  CHECK(phase_distance(kak_decompose(swap).unitary(), swap) < 1e-10);
}

TEST_CASE("KAK of Haar-random unitaries") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Eigen::Matrix4cd U = haar_random_unitary4(seed);
    CHECK(max_abs(U.adjoint() * U - Eigen::Matrix4cd::Identity()) < 1e-12);
    const auto d = kak_decompose(U);
    CHECK(phase_distance(d.unitary(), U) < 1e-9);
    // embedded with the sites reversed on a wider register
    const Eigen::MatrixXcd W = circuit_unitary(d.circuit(3, 2, 1));
    Circuit ref(3);
    ref.unitary({2, 1}, U);
    CHECK(phase_distance(W, circuit_unitary(ref)) < 1e-9);
  }
}

TEST_CASE("KAK rejects non-unitary input") {
  Eigen::Matrix4cd M = Eigen::Matrix4cd::Identity();
  M(0, 1) = 0.5;
  CHECK_THROWS_AS(kak_decompose(M), InvalidArgument);
}
