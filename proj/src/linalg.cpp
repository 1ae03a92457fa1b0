#include "rpbeats/linalg.hpp"

#include <cmath>

#include "rpbeats/errors.hpp"

namespace rpbeats {

Eigen::Matrix2cd pauli(char p) {
  const cplx i(0, 1);
  Eigen::Matrix2cd m;
  switch (p) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, -i, i, 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: throw InvalidArgument(std::string("unknown Pauli letter '") + p + "'");
  }
  return m;
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c)
      out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
  return out;
}

Eigen::MatrixXcd pauli_string_matrix(std::string_view ops) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
  for (char c : ops) m = kron(m, pauli(c));
  return m;
}

double max_abs(const Eigen::MatrixXcd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

double hermiticity_error(const Eigen::MatrixXcd& m) { return max_abs(m - m.adjoint()); }

double phase_aligned_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw InvalidArgument("phase_aligned_distance: shape mismatch");
  Eigen::Index r = 0, c = 0;
  a.cwiseAbs().maxCoeff(&r, &c);
  if (std::abs(b(r, c)) == 0.0) return max_abs(a - b);
  const cplx ph = a(r, c) / b(r, c);
  return max_abs(a - (ph / std::abs(ph)) * b);
}

Eigen::MatrixXcd unitary_from_hermitian(const Eigen::MatrixXcd& H, double t) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
  if (es.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
  const Eigen::VectorXcd ph = (es.eigenvalues().cast<cplx>() * cplx(0, -t)).array().exp();
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

Eigen::MatrixXcd partial_trace_keep(const Eigen::MatrixXcd& rho, int n_sites, const std::vector<int>& keep) {
  const Eigen::Index dim = Eigen::Index(1) << n_sites;
  if (rho.rows() != dim || rho.cols() != dim) throw InvalidArgument("partial_trace_keep: dimension mismatch");
  std::vector<int> traced;
  for (int s = 0; s < n_sites; ++s) {
    bool kept = false;
    for (int k : keep) kept |= (k == s);
    if (!kept) traced.push_back(s);
  }
  for (int k : keep)
    if (k < 0 || k >= n_sites) throw InvalidArgument("partial_trace_keep: site out of range");
  const int nk = static_cast<int>(keep.size());
  const int nt = static_cast<int>(traced.size());
  auto compose = [&](Eigen::Index kbits, Eigen::Index tbits) {
    Eigen::Index idx = 0;
    for (int j = 0; j < nk; ++j)
      if ((kbits >> (nk - 1 - j)) & 1) idx |= Eigen::Index(1) << (n_sites - 1 - keep[j]);
    for (int j = 0; j < nt; ++j)
      if ((tbits >> (nt - 1 - j)) & 1) idx |= Eigen::Index(1) << (n_sites - 1 - traced[j]);
    return idx;
  };
  const Eigen::Index dk = Eigen::Index(1) << nk, dt = Eigen::Index(1) << nt;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dk, dk);
  for (Eigen::Index a = 0; a < dk; ++a)
    for (Eigen::Index b = 0; b < dk; ++b) {
      cplx acc = 0;
      for (Eigen::Index e = 0; e < dt; ++e) acc += rho(compose(a, e), compose(b, e));
      out(a, b) = acc;
    }
  return out;
}

Eigen::Vector4cd singlet_vector() {
  const double r = 1.0 / std::sqrt(2.0);
  return Eigen::Vector4cd(0, r, -r, 0);
}

Eigen::Matrix4cd singlet_projector() {
  const Eigen::Vector4cd s = singlet_vector();
  return s * s.adjoint();
}

}  // namespace rpbeats
