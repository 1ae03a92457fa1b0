#include "rpbeats/kak.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "rpbeats/errors.hpp"
#include "rpbeats/linalg.hpp"

namespace rpbeats {

namespace {

const double kPi = std::numbers::pi;

Eigen::Matrix4cd magic_basis() {
  const cplx i(0, 1);
  Eigen::Matrix4cd B;
  B << 1, 0, 0, i, 0, i, 1, 0, 0, i, -1, 0, 1, 0, 0, -i;
  return B / std::sqrt(2.0);
}

Eigen::Matrix2cd rz(double t) { return Gate{GateKind::Rz, {0}, {t}, {}, {}}.unitary(); }
Eigen::Matrix2cd ry(double t) {
  Eigen::Matrix2cd m;
  m << std::cos(t / 2), -std::sin(t / 2), std::sin(t / 2), std::cos(t / 2);
  return m;
}
Eigen::Matrix2cd hadamard() { return Gate{GateKind::H, {0}, {}, {}, {}}.unitary(); }

// Factor L = A (x) B (up to a scalar) through the rank-one rearrangement.
std::pair<Eigen::Matrix2cd, Eigen::Matrix2cd> tensor_factor(const Eigen::Matrix4cd& L) {
  Eigen::Matrix4cd R;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) R(2 * i + j, 2 * k + l) = L(2 * i + k, 2 * j + l);
  Eigen::JacobiSVD<Eigen::Matrix4cd> svd(R, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const double s = std::sqrt(svd.singularValues()(0));
  const Eigen::Vector4cd va = s * svd.matrixU().col(0);
  const Eigen::Vector4cd vb = s * svd.matrixV().col(0).conjugate();
  Eigen::Matrix2cd A, B;
  A << va(0), va(1), va(2), va(3);
  B << vb(0), vb(1), vb(2), vb(3);
  A /= std::sqrt(std::abs(A.determinant()));
  B /= std::sqrt(std::abs(B.determinant()));
  return {A, B};
}

}  // namespace

Eigen::Matrix2cd u3_matrix(const U3Params& p) {
  return Gate{GateKind::U3, {0}, {p.theta, p.phi, p.lambda}, {}, {}}.unitary();
}

U3Params u3_from_matrix(const Eigen::Matrix2cd& V) {
  const double c = std::abs(V(0, 0)), s = std::abs(V(1, 0));
  U3Params p;
  p.theta = 2.0 * std::atan2(s, c);
  const double tol = 1e-13;
  if (s < tol) {
    const double g = std::arg(V(0, 0));
    p.lambda = std::arg(V(1, 1)) - g;
  } else if (c < tol) {
    const double g = std::arg(V(1, 0));
    p.lambda = std::arg(-V(0, 1)) - g;
  } else {
    const double g = std::arg(V(0, 0));
    p.phi = std::arg(V(1, 0)) - g;
    p.lambda = std::arg(-V(0, 1)) - g;
  }
  return p;
}

KakDecomposition kak_decompose(const Eigen::Matrix4cd& U) {
  if (max_abs(U.adjoint() * U - Eigen::Matrix4cd::Identity()) > 1e-12)
    throw InvalidArgument("kak_decompose: input is not unitary");
  const Eigen::Matrix4cd Us = U / std::pow(U.determinant(), 0.25);
  const Eigen::Matrix4cd B = magic_basis();
  const Eigen::Matrix4cd Up = B.adjoint() * Us * B;
  const Eigen::Matrix4cd M2 = Up.transpose() * Up;

  // Re(M2) and Im(M2) commute; a generic real combination shares their eigenbasis.
  Eigen::Matrix4d P;
  Eigen::Vector4cd D;
  std::mt19937_64 rng(0x6b616bULL);
  std::uniform_real_distribution<double> unif(0.0, 2.0 * kPi);
  bool ok = false;
  for (int attempt = 0; attempt < 20 && !ok; ++attempt) {
    const double alpha = unif(rng);
    const Eigen::Matrix4d mix = std::cos(alpha) * M2.real() + std::sin(alpha) * M2.imag();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(0.5 * (mix + mix.transpose()));
    P = es.eigenvectors();
    const Eigen::Matrix4cd Dm = P.transpose().cast<cplx>() * M2 * P.cast<cplx>();
    D = Dm.diagonal();
    ok = max_abs(Dm - Eigen::Matrix4cd(D.asDiagonal())) < 1e-10;
  }
  if (!ok) throw NumericalError("kak_decompose: simultaneous diagonalization failed");
  if (P.determinant() < 0) P.col(0) *= -1.0;

  Eigen::Vector4d theta;
  for (int k = 0; k < 4; ++k) theta(k) = 0.5 * std::arg(D(k));
  const double total = theta.sum();
  if (std::abs(std::remainder(total, 2.0 * kPi)) > 1.0) theta(0) += kPi;

  Eigen::Vector4cd phase;
  for (int k = 0; k < 4; ++k) phase(k) = std::polar(1.0, theta(k));
  const Eigen::Matrix4cd K1 = Up * P.cast<cplx>() * phase.conjugate().asDiagonal();
  const Eigen::Matrix4cd K2 = P.transpose().cast<cplx>();

  const Eigen::Matrix4cd L1 = B * K1 * B.adjoint();
  const Eigen::Matrix4cd L2 = B * K2 * B.adjoint();

  // theta_k = g + a dXX_k + b dYY_k + c dZZ_k in the magic basis
  Eigen::Matrix4d sys;
  const char* names[] = {"XX", "YY", "ZZ"};
  for (int j = 0; j < 3; ++j) {
    const Eigen::Matrix4cd d = B.adjoint() * pauli_string_matrix(names[j]) * B;
    for (int k = 0; k < 4; ++k) sys(k, j + 1) = d(k, k).real();
  }
  sys.col(0).setOnes();
  const Eigen::Vector4d sol = sys.colPivHouseholderQr().solve(theta);

  KakDecomposition out;
  out.a = sol(1);
  out.b = sol(2);
  out.c = sol(3);

  const auto [A1, B1] = tensor_factor(L1);
  const auto [A2, B2] = tensor_factor(L2);
  const Eigen::Matrix2cd H = hadamard();
  const double t1 = kPi / 2 - 2 * out.c, t2 = 2 * out.a - kPi / 2, t3 = kPi / 2 - 2 * out.b;
  const Eigen::Matrix2cd layer_a[4] = {H * rz(-kPi / 2) * A2, H, H * rz(t1), A1 * H};
  const Eigen::Matrix2cd layer_b[4] = {H * B2, ry(t3) * H, H * ry(t2), B1 * rz(kPi / 2) * H};
  for (int k = 0; k < 4; ++k) out.layers[static_cast<std::size_t>(k)] = {u3_from_matrix(layer_a[k]), u3_from_matrix(layer_b[k])};
  return out;
}

Circuit KakDecomposition::circuit(int n_sites, int first, int second) const {
  Circuit c(n_sites);
  for (int k = 0; k < 4; ++k) {
    const auto& l = layers[static_cast<std::size_t>(k)];
    c.u3(first, l[0].theta, l[0].phi, l[0].lambda);
    c.u3(second, l[1].theta, l[1].phi, l[1].lambda);
    if (k < 3) c.cnot(first, second);
  }
  return c;
}

Eigen::Matrix4cd KakDecomposition::unitary() const { return circuit_unitary(circuit(2, 0, 1)); }

Eigen::Matrix4cd haar_random_unitary4(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::Matrix4cd Z;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) Z(i, j) = cplx(g(rng), g(rng)) / std::sqrt(2.0);
  Eigen::HouseholderQR<Eigen::Matrix4cd> qr(Z);
  Eigen::Matrix4cd Q = qr.householderQ();
  const Eigen::Matrix4cd R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < 4; ++k) Q.col(k) *= R(k, k) / std::abs(R(k, k));
  return Q;
}

Circuit partitioned_kak_circuit(HalfInt I, const SpinSystemSpec& spec, double t) {
  const Eigen::Matrix4cd U4 = unitary_from_hermitian(partitioned_two_site_block(I, spec), t);
  Circuit c = kak_decompose(U4).circuit(3, 1, 2);
  c.rz(0, -2.0 * spec.zeeman2() * t);
  return c;
}

}  // namespace rpbeats
