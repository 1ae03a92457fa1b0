#include <doctest.h>

#include <cmath>

#include "rpbeats/dynamics.hpp"
#include "rpbeats/errors.hpp"
#include "rpbeats/linalg.hpp"
#include "rpbeats/spin_algebra.hpp"

using namespace rpbeats;

namespace {

SpinSystemSpec octalin(double field) {
  SpinSystemSpec s;
  s.groups = {{8, 2.49}};
  s.g1 = s.g2 = 2.0028;
  s.field_t = field;
  return s;
}

}  // namespace

TEST_CASE("uniform grids") {
  const auto g = uniform_grid(0.0, 100.0, 0.1);
  CHECK(g.size() == 1001);
  CHECK(g.back() == doctest::Approx(100.0));
  CHECK(uniform_grid(0.0, 0.0, 0.1).size() == 1);
  CHECK_THROWS_AS(uniform_grid(0.0, 1.0, 0.0), InvalidArgument);
  CHECK_THROWS_AS(uniform_grid(2.0, 1.0, 0.1), InvalidArgument);
}

TEST_CASE("propagator agrees with direct exponentiation") {
  const auto H = build_reduced_one_group(octalin(0.3));
  const Propagator prop(H.matrix);
  CHECK(prop.block_count() > 1);
  for (double t : {0.0, 0.7, 13.0}) CHECK(max_abs(prop.unitary(t) - unitary_from_hermitian(H.matrix, t)) < 1e-11);
  const Eigen::VectorXcd psi0 = initial_sector_vector(reduced_index(8, HalfInt::from_int(3), HalfInt::from_int(1)), 32);
  const std::vector<double> ts = {0.0, 1.0, 2.5};
  const Eigen::MatrixXcd cols = prop.evolve_state(psi0, ts);
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const Eigen::VectorXcd ref = unitary_from_hermitian(H.matrix, ts[k]) * psi0;
    CHECK((cols.col(static_cast<Eigen::Index>(k)) - ref).norm() < 1e-11);
  }
  CHECK_THROWS_AS(Propagator(Eigen::MatrixXcd::Random(4, 4)), InvalidArgument);
}

TEST_CASE("density evolution preserves trace, hermiticity and positivity") {
  const auto H = build_reduced_one_group(octalin(0.0));
  const auto rho0 = initial_sector_state(reduced_index(8, HalfInt::from_int(2), HalfInt::from_int(0)), 32);
  for (const auto& r : evolve(H, rho0, {0.0, 3.0, 50.0})) CHECK_NOTHROW(r.validate());
  BlockHamiltonian zero;
  zero.matrix = Eigen::MatrixXcd::Zero(8, 8);
  zero.nuclear_dim = 2;
  const auto same = evolve(zero, initial_sector_state(1, 2), {0.0, 10.0});
  CHECK(max_abs(same[1].matrix - same[0].matrix) == 0.0);
}

TEST_CASE("singlet probability of reference states") {
  CHECK(singlet_probability(singlet_projector()) == doctest::Approx(1.0));
  CHECK(singlet_probability(Eigen::Matrix4cd(Eigen::Matrix4cd::Identity() / 4.0)) == doctest::Approx(0.25));
  const double r = 1 / std::sqrt(2.0);
  const Eigen::Vector4cd t0(0, r, r, 0);
  CHECK(std::abs(singlet_probability(Eigen::Matrix4cd(t0 * t0.adjoint()))) < 1e-15);
  // nuclear part irrelevant
  const auto rho = initial_sector_state(3, 4);
  CHECK(singlet_probability(rho, 0, 3) == doctest::Approx(1.0));
  CHECK_THROWS(singlet_probability(rho, 1, 1));
}

TEST_CASE("probability clamping") {
  const auto before = clamp_warning_count();
  CHECK(clamp_probability(0.5) == 0.5);
  CHECK(clamp_probability(-1e-12) == 0.0);
  CHECK(clamp_probability(1.0 + 1e-12) == 1.0);
  CHECK(clamp_warning_count() == before + 2);
  CHECK_THROWS_AS(clamp_probability(-1e-6), NumericalError);
  CHECK_THROWS_AS(clamp_probability(1.001), NumericalError);
}

TEST_CASE("I=0 sector stays in the singlet without a field") {
  const auto H = build_reduced_one_group(octalin(0.0));
  const Propagator prop(H.matrix);
  const auto s = singlet_series(
      electron_trace(prop, initial_sector_vector(reduced_index(8, HalfInt(), HalfInt()), 32), uniform_grid(0, 100, 1)),
      "S");
  for (double v : s.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("two electrons with equal g never leave the singlet") {
  SpinSystemSpec s;
  s.groups = {{1, 0.0}};
  s.g1 = s.g2 = 2.0028;
  s.field_t = 0.5;
  const auto H = build_full_one_group(s);
  const Propagator prop(H.matrix);
  const auto S = singlet_series(electron_trace(prop, initial_sector_vector(1, 2), uniform_grid(0, 50, 0.5)), "S");
  for (double v : S.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("maximally mixed nuclear state") {
  const auto rho = maximally_mixed_nuclear_state(2);
  CHECK(rho.matrix.rows() == 8);
  CHECK_NOTHROW(rho.validate());
  const Eigen::Matrix4cd expected = singlet_projector();
  CHECK(max_abs(electron_reduced(rho.matrix) - expected) < 1e-15);
  // nuclear marginal is identity/2
  const Eigen::MatrixXcd nuc = partial_trace_keep(rho.matrix, 3, {1});
  CHECK(max_abs(nuc - Eigen::MatrixXcd::Identity(2, 2) / 2.0) < 1e-15);

  // evolving the mixture equals the average of the pure evolutions
  const auto H = build_reduced_one_group(octalin(0.3));
  const Propagator prop(H.matrix);
  const auto times = uniform_grid(0, 10, 2.5);
  const auto mixed = evolve(H, maximally_mixed_nuclear_state(32), times);
  std::vector<int> all(32);
  for (int i = 0; i < 32; ++i) all[static_cast<std::size_t>(i)] = i;
  const auto avg = electron_trace_mixed(prop, 32, all, times);
  for (std::size_t k = 0; k < times.size(); ++k)
    CHECK(max_abs(electron_reduced(mixed[k].matrix) - avg.rho[k]) < 1e-12);
}

TEST_CASE("averaging weights") {
  const auto z = one_group_weights(8, FieldRegime::Zero);
  const auto h = one_group_weights(8, FieldRegime::High);
  const long long zw[] = {14, 84, 100, 49, 9};
  const long long hw[] = {70, 112, 56, 16, 2};
  for (int k = 0; k <= 4; ++k) {
    CHECK(z.at(HalfInt::from_int(k)) == zw[k]);
    CHECK(h.at(HalfInt::from_int(k)) == hw[k]);
  }
  for (int n = 1; n <= 12; ++n)
    for (auto r : {FieldRegime::Zero, FieldRegime::High}) {
      long long t = 0;
      for (const auto& [k, v] : one_group_weights(n, r)) t += v;
      CHECK(t == (1LL << n));
    }

  std::map<HalfInt, TimeSeries> ones;
  for (int k = 0; k <= 4; ++k) ones[HalfInt::from_int(k)] = TimeSeries{{0, 1}, {1, 1}, "S", true};
  const auto avg = weighted_average_one_group(ones, FieldRegime::Zero, 8);
  CHECK(avg.values[0] == doctest::Approx(1.0));
  CHECK(avg.values[1] == doctest::Approx(1.0));
}

TEST_CASE("exact and representative zero-field averages coincide") {
  const auto times = uniform_grid(0, 60, 0.5);
  const auto s = octalin(0.0);
  const auto a = singlet_series(mixed_electron_trace(s, times, AverageMode::Exact, FieldRegime::Zero), "a");
  const auto b = singlet_series(mixed_electron_trace(s, times, AverageMode::Representative, FieldRegime::Zero), "b");
  for (std::size_t k = 0; k < times.size(); ++k) CHECK(std::abs(a.values[k] - b.values[k]) < 1e-10);
}

TEST_CASE("two-group reassembly") {
  SpinSystemSpec s;
  s.groups = {{2, 0.65}, {12, 1.66}};
  s.g1 = s.g2 = 2.0028;
  const auto times = uniform_grid(0, 20, 1);
  std::map<HalfInt, TimeSeries> traces;
  std::map<HalfInt, SectorPadding> pads;
  for (const auto& I2 : two_group_sectors(s)) {
    const auto b = build_two_group_block(I2, s);
    const Propagator prop(b.matrix);
    std::vector<int> all(static_cast<std::size_t>(b.nuclear_dim));
    for (int i = 0; i < b.nuclear_dim; ++i) all[static_cast<std::size_t>(i)] = i;
    traces[I2] = singlet_series(electron_trace_mixed(prop, b.nuclear_dim, all, times), "S");
    pads[I2] = {b.padded_nuclear, b.nuclear_dim};
  }
  const auto S = reassemble_two_group(traces, pads);
  CHECK(S.values[0] == doctest::Approx(1.0).epsilon(1e-10));
  const auto direct = singlet_series(mixed_electron_trace(s, times, AverageMode::Exact, FieldRegime::Zero), "d");
  for (std::size_t k = 0; k < times.size(); ++k) CHECK(std::abs(S.values[k] - direct.values[k]) < 1e-12);

  // sectors sitting at their padding constant contribute nothing
  std::map<HalfInt, TimeSeries> pad_only;
  for (const auto& [I2, p] : pads)
    pad_only[I2] = TimeSeries{times, std::vector<double>(times.size(), double(p.padded) / p.nuclear_dim), "S", true};
  for (double v : reassemble_two_group(pad_only, pads).values) CHECK(std::abs(v) < 1e-15);
}
