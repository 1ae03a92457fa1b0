#include "rpbeats/spin_algebra.hpp"

#include <cmath>

#include "rpbeats/errors.hpp"

namespace rpbeats {

MultiplicityRow add_half_spin(const MultiplicityRow& row) {
  MultiplicityRow next;
  for (const auto& [I, count] : row) {
    next[I + kHalf] += count;
    if (I.twice() > 0) next[I - kHalf] += count;
  }
  return next;
}

MultiplicityRow spin_addition_counts(int n) {
  if (n <= 0) throw InvalidArgument("spin_addition_counts: n must be >= 1, got " + std::to_string(n));
  MultiplicityRow row{{kHalf, 1}};
  for (int k = 1; k < n; ++k) row = add_half_spin(row);
  return row;
}

long long state_count(const MultiplicityRow& row) {
  long long total = 0;
  for (const auto& [I, count] : row) total += count * I.multiplicity();
  return total;
}

std::vector<HalfInt> total_spins_descending(const MultiplicityRow& row) {
  std::vector<HalfInt> out;
  for (auto it = row.rbegin(); it != row.rend(); ++it) out.push_back(it->first);
  return out;
}

Eigen::MatrixXd cg_block_matrix(HalfInt I) {
  if (I.twice() < 0) throw InvalidArgument("cg_block_matrix: negative spin");
  const int d = 2 * I.multiplicity();
  const double twoI1 = I.multiplicity();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(d, d);
  M(0, 0) = 1.0;
  M(d - 1, d - 1) = 1.0;
  // Pairs |I,m> down and |I,m-1> up share M = m - 1/2.
  for (int k = 0; k < I.twice(); ++k) {
    const double Mz = I.value() - k - 0.5;
    const double c = std::sqrt((I.value() - Mz + 0.5) / twoI1);
    const double s = std::sqrt((I.value() + Mz + 0.5) / twoI1);
    const int i = 2 * k + 1;
    M(i, i) = c;
    M(i, i + 1) = s;
    M(i + 1, i) = s;
    M(i + 1, i + 1) = -c;
  }
  return M;
}

Eigen::VectorXd cg_block_eigenvalues(HalfInt I) {
  const int d = 2 * I.multiplicity();
  const double l1 = 0.5 * I.value();
  const double l2 = -0.5 * (I.value() + 1.0);
  Eigen::VectorXd v(d);
  for (int i = 0; i < d; ++i) v(i) = (i == 0 || i == d - 1 || i % 2 == 1) ? l1 : l2;
  return v;
}

}  // namespace rpbeats
