#include <doctest.h>

#include <cmath>

#include "rpbeats/circuit.hpp"
#include "rpbeats/errors.hpp"
#include "rpbeats/linalg.hpp"

using namespace rpbeats;

TEST_CASE("singlet preparation and unpreparation") {
  const auto psi = run_statevector(singlet_prep(2, 0, 1));
  CHECK((psi - singlet_vector()).norm() < 1e-15);
  Circuit round = singlet_prep(2, 0, 1);
  round.append(singlet_unprep(2, 0, 1), {0, 1});
  CHECK(outcome_probability(run_statevector(round), 2, {0, 1}, 0b11) == doctest::Approx(1.0));
  // on a wider register with the pair at the ends
  const auto wide = run_statevector(singlet_prep(4, 0, 3));
  CHECK(outcome_probability(wide, 4, {1, 2}, 0b00) == doctest::Approx(1.0));
  const Eigen::MatrixXcd rho = wide * wide.adjoint();
  CHECK(max_abs(partial_trace_keep(rho, 4, {0, 3}) - singlet_projector()) < 1e-15);
}

TEST_CASE("text dump") {
  Circuit c = singlet_prep(2, 0, 1);
  c.rz(1, 0.5).delay(0, 35.5).maybe({GateKind::Z, {1}, {}, {}, {}}, 0.25);
  c.unitary({0, 1}, Eigen::MatrixXcd::Identity(4, 4));
  c.measure({0, 1});
  CHECK(c.dump() ==
        "SITES 2\n"
        "GATE X 0 -\n"
        "GATE X 1 -\n"
        "GATE H 0 -\n"
        "GATE CNOT 0,1 -\n"
        "GATE RZ 1 0.5\n"
        "GATE DELAY 0 35.5\n"
        "GATE Z 1 - p=0.25\n"
        "GATE UNITARY 0,1 dim=4\n"
        "MEASURE 0,1\n");
  CHECK(c.probabilistic_count() == 1);
}

TEST_CASE("circuit validation") {
  CHECK_THROWS_AS(Circuit(2).x(2).validate(), InvalidArgument);
  CHECK_THROWS_AS(Circuit(2).cnot(1, 1).validate(), InvalidArgument);
  CHECK_THROWS_AS(Circuit(2).add({GateKind::Rz, {0}, {}, {}, {}}).validate(), InvalidArgument);
  CHECK_THROWS_AS(Circuit(2).maybe({GateKind::X, {0}, {}, {}, {}}, 1.5).validate(), InvalidArgument);
  CHECK_THROWS_AS(Circuit(1).unitary({0}, Eigen::MatrixXcd::Identity(4, 4)).validate(), InvalidArgument);
  CHECK_THROWS_AS(run_statevector(Circuit(2).x(2)), InvalidArgument);
  Circuit p(1);
  p.maybe({GateKind::X, {0}, {}, {}, {}}, 0.5);
  CHECK_THROWS_AS(run_statevector(p), InvalidArgument);
  CHECK_THROWS(run_statevector(Circuit(kMaxStatevectorSites + 1)));
  CHECK_THROWS(run_density(Circuit(kMaxDensitySites + 1)));
}

TEST_CASE("probabilistic gates mix exactly") {
  Circuit c(1);
  c.maybe({GateKind::X, {0}, {}, {}, {}}, 0.3);
  const Eigen::MatrixXcd rho = run_density(c);
  CHECK(rho(0, 0).real() == doctest::Approx(0.7));
  CHECK(rho(1, 1).real() == doctest::Approx(0.3));
  CHECK(std::abs(rho(0, 1)) < 1e-15);
}

TEST_CASE("gate matrices") {
  const double t = 0.37;
  const Eigen::Matrix2cd rx = Gate{GateKind::Rx, {0}, {t}, {}, {}}.unitary();
  CHECK(max_abs(rx - unitary_from_hermitian(Eigen::MatrixXcd(pauli('X')) / 2.0, t)) < 1e-14);
  const Eigen::Matrix2cd rz = Gate{GateKind::Rz, {0}, {t}, {}, {}}.unitary();
  CHECK(max_abs(rz - unitary_from_hermitian(Eigen::MatrixXcd(pauli('Z')) / 2.0, t)) < 1e-14);
  const Eigen::MatrixXcd crx = Gate{GateKind::CRx, {0, 1}, {t}, {}, {}}.unitary();
  CHECK(max_abs(crx.topLeftCorner(2, 2) - Eigen::MatrixXcd::Identity(2, 2)) < 1e-15);
  CHECK(max_abs(crx.bottomRightCorner(2, 2) - rx) < 1e-15);
  // unitary of a two-site circuit respects site 0 as the most significant
  Circuit c(2);
  c.x(0);
  CHECK(std::abs(circuit_unitary(c)(2, 0) - 1.0) < 1e-15);
}

TEST_CASE("Rz encoding reproduces the singlet probability") {
  for (double S : {0.0, 0.25, 0.5, 0.8, 1.0}) {
    const auto c = rz_encode_circuit(S);
    CHECK(outcome_probability(run_statevector(c), 2, {0, 1}, 0b11) == doctest::Approx(S).epsilon(1e-12));
  }
  CHECK_THROWS_AS(rz_encode_circuit(1.1), InvalidArgument);
  TimeSeries ts{{0, 1, 2}, {1.0, 0.5, 0.1}, "S", true};
  CHECK(rz_encode_trace(ts).size() == 3);
}

TEST_CASE("Pauli exponentials") {
  for (const char* ops : {"XZ", "YY", "ZIZ", "XYZ", "IYI"}) {
    const PauliTerm term{0.83, ops};
    const int n = static_cast<int>(term.ops.size());
    const Eigen::MatrixXcd U = circuit_unitary(pauli_exponential(term, 0.6));
    const Eigen::MatrixXcd ref = unitary_from_hermitian(pauli_sum({term}), 0.6);
    CHECK(U.rows() == (1 << n));
    CHECK(max_abs(U - ref) < 1e-13);
  }
}

TEST_CASE("commuting terms need a single Trotter step") {
  const std::vector<PauliTerm> terms = {{0.4, "ZZI"}, {-0.9, "IZZ"}, {0.3, "ZIZ"}, {1.1, "XXX"}};
  const Eigen::MatrixXcd U = circuit_unitary(trotterized_pauli_evolution(terms, 2.0, 1));
  CHECK(max_abs(U - unitary_from_hermitian(pauli_sum(terms), 2.0)) < 1e-12);
  CHECK_THROWS(trotterized_pauli_evolution(terms, 1.0, 0));
}

TEST_CASE("ancilla Kraus circuit reproduces the channel") {
  const double r = 0.3;
  Eigen::Matrix2cd rho;
  rho << 0.6, cplx(r, 0.1), cplx(r, -0.1), 0.4;
  for (auto [t, T1, T2] : {std::tuple{0.0, 9.0, 9.0}, std::tuple{9.0, 9.0, 18.0}, std::tuple{4.0, 9.0, 9.0},
                           std::tuple{5.0, kInfinity, 7.0}}) {
    const auto p = RelaxationParams::from_times(t, T1, T2);
    Eigen::Matrix2cd anc = Eigen::Matrix2cd::Zero();
    anc(0, 0) = 1.0;
    const Eigen::MatrixXcd init = kron(rho, anc);
    const Eigen::MatrixXcd out = run_density(kraus_circuit(p, 2, 0, 1), nullptr, init);
    const Eigen::MatrixXcd got = partial_trace_keep(out, 2, {0});
    const Eigen::MatrixXcd ref = apply_channel(Eigen::MatrixXcd(rho), 1, infinite_temperature_thermal_channel(p));
    CHECK(max_abs(got - ref) < 1e-13);
  }
  // t = T1 with T2 = 2 T1 is pure amplitude mixing
  const auto p = RelaxationParams::from_times(9.0, 9.0, 18.0);
  CHECK(p.p_z == doctest::Approx(0.0));
}

TEST_CASE("echo sequences") {
  CHECK_THROWS_AS(echo_pulse_circuit(12, 35.5), InvalidArgument);
  const auto c = echo_pulse_circuit(8, 35.5);
  int x = 0;
  double delay = 0;
  for (const auto& g : c.gates) {
    if (g.kind == GateKind::X) ++x;
    if (g.kind == GateKind::Delay && g.sites[0] == 0) delay += g.params[0];
  }
  CHECK(x == 2 + 8);
  CHECK(delay == doctest::Approx(8 * 35.5));
  CHECK(outcome_probability(run_density(c), 2, {0, 1}, 0b11) == doctest::Approx(1.0));
  const auto noise = SyntheticQubitNoise::uniform(2, 50.0, 50.0);
  const double noisy = outcome_probability(run_density(c, &noise), 2, {0, 1}, 0b11);
  CHECK(noisy < 1.0);
  CHECK(noisy > 0.25);

  // the echo cancels a static phase drift
  auto drift = SyntheticQubitNoise::uniform(2, kInfinity, kInfinity);
  drift.drift_phase_rate = {0.01, -0.02};
  CHECK(outcome_probability(run_density(c, &drift), 2, {0, 1}, 0b11) == doctest::Approx(1.0).epsilon(1e-12));
  const auto bare = echo_pulse_circuit(8, 35.5, false);
  CHECK(outcome_probability(run_density(bare, &drift), 2, {0, 1}, 0b11) < 0.99);
}

TEST_CASE("delay counts") {
  CHECK(delay_count(100.0, 10.0, 0.5, 2.0) == doctest::Approx(40.0));
  CHECK(delay_count(100.0, 10.0, 0.5, 4.0) == doctest::Approx(2 * delay_count(100.0, 10.0, 0.5, 2.0)));
  CHECK(echo_delay_count(100.0, 10.0, 0.5, 2.0) == 40);
  CHECK(echo_delay_count(100.0, 10.0, 0.5, 2.2) % 8 == 0);
  CHECK_THROWS(delay_count(0.0, 10.0, 0.5, 1.0));
  CHECK_THROWS(delay_count(1.0, 10.0, 0.5, -1.0));
}

TEST_CASE("purification yields the maximally mixed marginal") {
  for (int n = 1; n <= 3; ++n) {
    const auto psi = run_statevector(purification_circuit(n));
    const Eigen::MatrixXcd rho = psi * psi.adjoint();
    std::vector<int> keep(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) keep[static_cast<std::size_t>(k)] = k;
    const Eigen::MatrixXcd marg = partial_trace_keep(rho, 2 * n, keep);
    CHECK(max_abs(marg - Eigen::MatrixXcd::Identity(1 << n, 1 << n) / double(1 << n)) < 1e-14);
  }
  CHECK_THROWS(purification_circuit(0));
}
