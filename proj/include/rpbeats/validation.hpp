#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "rpbeats/dynamics.hpp"
#include "rpbeats/hamiltonian.hpp"

namespace rpbeats {

struct CheckResult {
  std::string name;
  double observed = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckResult> checks;

  bool passed() const;
};

std::vector<std::string> validation_suites();
// Throws InvalidArgument listing the available suites for an unknown name.
SuiteReport run_validation_suite(const std::string& name, int threads = 1);
void print_report(std::ostream& os, const SuiteReport& report);

// Number of entry mismatches against the published counting tables.
int table_mismatches();

// Largest singlet-probability gap between the reduced, partitioned (|I,I> only)
// and product-space evolutions over every |I,m> of a one-group system.
double oracle_max_deviation(const SpinSystemSpec& spec, const std::vector<double>& times, int threads = 1);

// Two-group sector reassembly versus the product-space oracle, maximally mixed nuclei.
double two_group_oracle_max_deviation(const SpinSystemSpec& spec, const std::vector<double>& times, int threads = 1);

// Largest gap between traces that share I (zero field) or |m| (high field).
double degeneracy_max_deviation(const SpinSystemSpec& spec, const std::vector<double>& times, FieldRegime regime);

// Ancilla circuit versus closed-form channel on random two-site states.
double kraus_circuit_max_deviation(int n_states, std::uint64_t seed);

double kak_haar_max_deviation(int n_unitaries, std::uint64_t seed);
// KAK reconstruction of every partitioned two-site block at the given times.
double kak_partition_max_deviation(const SpinSystemSpec& spec, const std::vector<double>& times);
// Three-site KAK circuit against direct evolution of the partitioned Hamiltonian.
double kak_three_site_max_deviation(const SpinSystemSpec& spec, const std::vector<double>& times);

// Injection followed by correction over a grid of channel strengths; points
// whose correction denominators fall below min_denominator are skipped.
double correction_roundtrip_max_deviation(double min_denominator = 1e-3);
// Echo-pulse runs with and without deterministic drift.
double echo_drift_max_deviation();

// Ancilla-traced nuclear state of the purification circuit versus identity/2^n.
double purification_max_deviation(int n_nuclear_sites);
// Purified-circuit singlet probability versus the direct mixed-state result.
double purified_pipeline_max_deviation(const SpinSystemSpec& spec, const std::vector<double>& times);

// |S_trotter - S_exact| at time t for the partitioned |I,I> Pauli strings.
double trotter_singlet_error(HalfInt I, const SpinSystemSpec& spec, double t, int steps);

}  // namespace rpbeats
