// Acceptance checks, one per criterion. Usage: acceptance [--criterion N]
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "rpbeats/config.hpp"
#include "rpbeats/dynamics.hpp"
#include "rpbeats/pipeline.hpp"
#include "rpbeats/postprocess.hpp"
#include "rpbeats/relaxation.hpp"
#include "rpbeats/spin_algebra.hpp"
#include "rpbeats/validation.hpp"

using namespace rpbeats;

namespace {

constexpr int kThreads = 4;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what, double observed, double tol) {
    pass = pass && ok;
    detail << "\n    " << (ok ? "ok   " : "FAIL ") << what << ": " << observed << " (limit " << tol << ")";
  }
  void at_most(const std::string& what, double observed, double tol) { require(observed <= tol, what, observed, tol); }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SpinSystemSpec octalin(double field) {
  SpinSystemSpec s;
  s.groups = {{8, 2.49}};
  s.g1 = s.g2 = 2.0028;
  s.field_t = field;
  return s;
}

SpinSystemSpec dmb(double field) {
  SpinSystemSpec s;
  s.groups = {{2, 0.65}, {12, 1.66}};
  s.g1 = s.g2 = 2.0028;
  s.field_t = field;
  return s;
}

double nearest_extremum(const TimeSeries& s, const std::vector<std::size_t>& idx, double t) {
  double best = 1e300;
  for (auto i : idx) best = std::min(best, std::abs(s.times[i] - t));
  return best;
}

std::string num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

// 1. Counting tables, eigenvalue table, weights and partition parameters.
void criterion1(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const int bad = table_mismatches();
  o.at_most("table entry mismatches", bad, 0);
  o.at_most("runtime s", seconds_since(t0), 1.0);
}

// 2. Reduced, partitioned and product-space evolutions, all 25 states.
void criterion2(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto grid = uniform_grid(0.0, 100.0, 0.1);
  o.at_most("max |dS| B=0", oracle_max_deviation(octalin(0.0), grid, kThreads), 1e-9);
  o.at_most("max |dS| B=0.3T", oracle_max_deviation(octalin(0.3), grid, kThreads), 1e-9);
  o.at_most("runtime s", seconds_since(t0), 120.0);
}

// 3. Trace coincidence inside the reduction classes.
void criterion3(Outcome& o) {
  const auto grid = uniform_grid(0.0, 100.0, 0.1);
  o.at_most("zero field, equal I", degeneracy_max_deviation(octalin(0.0), grid, FieldRegime::Zero), 1e-10);
  o.at_most("B=0.3T, equal |m|", degeneracy_max_deviation(octalin(0.3), grid, FieldRegime::High), 1e-10);
}

// 4. Relaxed asymptotes at t_end = 10 max(T1, T2) over the finite times.
void criterion4(Outcome& o) {
  auto oc = preset_config("octalin");
  oc.noise = NoiseMethod::Kraus;
  oc.t_end = 10.0 * std::max(oc.zero.T1, oc.zero.T2);
  const auto s0 = run_simulate(oc, FieldRegime::Zero, kThreads);
  o.at_most("octalin zero field |S(90ns) - 1/4|", std::abs(s0.values.back() - 0.25), 0.01);

  auto dc = preset_config("dmb");
  dc.noise = NoiseMethod::Kraus;
  const double Tmax = std::isfinite(dc.high.T1) ? std::max(dc.high.T1, dc.high.T2) : dc.high.T2;
  dc.t_end = 10.0 * Tmax;
  dc.t_step = 0.5;
  const auto sb = run_simulate(dc, FieldRegime::High, kThreads);
  o.at_most("dmb high field |S(200ns) - 1/2|", std::abs(sb.values.back() - 0.5), 0.01);
}

// 5. Ancilla circuit versus Kraus channel, and per-gate identity noise on the pipeline.
void criterion5(Outcome& o) {
  o.at_most("64 random states, circuit vs channel", kraus_circuit_max_deviation(64, 2024), 1e-12);
  auto c = preset_config("octalin");
  for (auto regime : {FieldRegime::Zero, FieldRegime::High}) {
    c.noise = NoiseMethod::Kraus;
    const auto ref = run_simulate(c, regime, kThreads);
    double w = 0.0;
    for (auto m : {NoiseMethod::KrausCircuit, NoiseMethod::PerGate}) {
      c.noise = m;
      const auto s = run_simulate(c, regime, kThreads);
      for (std::size_t k = 0; k < s.size(); ++k) w = std::max(w, std::abs(s.values[k] - ref.values[k]));
    }
    o.at_most(std::string("octalin ") + to_string(regime) + " field, three noise methods", w, 1e-9);
  }
}

// 6. KAK synthesis.
void criterion6(Outcome& o) {
  o.at_most("100 Haar-random unitaries", kak_haar_max_deviation(100, 99), 1e-9);
  const auto ts = uniform_grid(0.5, 100.0, 4.5);
  for (double B : {0.0, 0.3}) {
    o.at_most("partitioned blocks B=" + num(B), kak_partition_max_deviation(octalin(B), ts), 1e-9);
    o.at_most("three-site circuit B=" + num(B), kak_three_site_max_deviation(octalin(B), ts), 1e-9);
  }
}

// 7. Purification.
void criterion7(Outcome& o) {
  for (int n = 1; n <= 4; ++n) o.at_most("traced ancillas n=" + std::to_string(n), purification_max_deviation(n), 1e-14);
  const auto ts = uniform_grid(0.0, 100.0, 5.0);
  for (double B : {0.0, 0.3})
    o.at_most("purified vs mixed octalin B=" + num(B), purified_pipeline_max_deviation(octalin(B), ts), 1e-10);
}

// 8. Two-group sectors.
void criterion8(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<long long> expected = {132, 297, 275, 154, 54, 11, 1};
  const auto row = spin_addition_counts(12);
  int bad = row.size() == expected.size() ? 0 : 1;
  for (std::size_t k = 0; k < expected.size(); ++k) {
    auto it = row.find(HalfInt::from_int(static_cast<int>(k)));
    if (it == row.end() || it->second != expected[k]) ++bad;
  }
  o.at_most("sector degeneracy mismatches", bad, 0);

  const auto grid = uniform_grid(0.0, 100.0, 0.1);
  const auto S = singlet_series(mixed_electron_trace(dmb(0.0), grid, AverageMode::Exact, FieldRegime::Zero, kThreads), "S");
  o.at_most("|S(0) - 1|", std::abs(S.values.front() - 1.0), 1e-10);
  const auto minima = find_minima(S.values, 0.01);
  const auto maxima = find_peaks(S.values, 0.01);
  for (double t : {2.0, 20.0, 40.0, 59.0})
    o.at_most("distance (ns) from " + num(t) + " ns to nearest local minimum", nearest_extremum(S, minima, t), 2.0);
  o.at_most("distance (ns) from 45 ns to nearest local maximum", nearest_extremum(S, maxima, 45.0), 2.0);

  SpinSystemSpec toy;
  toy.groups = {{2, 0.65}, {2, 1.66}};
  toy.g1 = 2.0028;
  toy.g2 = 2.0035;
  for (double B : {0.0, 0.1}) {
    toy.field_t = B;
    o.at_most("(2,2) toy vs product B=" + num(B), two_group_oracle_max_deviation(toy, grid, kThreads), 1e-9);
  }
  o.at_most("runtime s", seconds_since(t0), 300.0);
}

// 9. Correction/injection and echo drift.
void criterion9(Outcome& o) {
  o.at_most("inject then correct", correction_roundtrip_max_deviation(1e-3), 1e-10);
  o.at_most("echo drift cancellation", echo_drift_max_deviation(), 1e-9);
}

struct RatioPeak {
  double t_max = 0.0;
  std::size_t rank = 0;         // 1-based position of the global maximum among R peaks
  std::size_t ideal_rank = 0;   // 1-based rank of the nearest peak of the ideal ratio
};

RatioPeak ratio_peak(ExperimentConfig c, double step) {
  c.t_step = step;
  const auto r = run_trmfe(c, kThreads);
  const auto& R = r.ratio.ratio;
  RatioPeak out;
  const auto peaks = find_peaks(R.values, 1e-3);
  std::size_t best = 0;
  for (std::size_t k = 0; k < R.size(); ++k)
    if (R.values[k] > R.values[best]) best = k;
  out.t_max = R.times[best];
  for (std::size_t j = 0; j < peaks.size(); ++j)
    if (peaks[j] == best) out.rank = j + 1;
  const auto iB = ideal_intensity(r.S_B, *c.postprocess), i0 = ideal_intensity(r.S_0, *c.postprocess);
  std::vector<double> ideal(iB.size());
  for (std::size_t k = 0; k < ideal.size(); ++k) ideal[k] = iB.values[k] / i0.values[k];
  const auto ip = find_peaks(ideal, 0.01);
  double gap = 1e300;
  for (std::size_t j = 0; j < ip.size(); ++j)
    if (std::abs(iB.times[ip[j]] - out.t_max) < gap) {
      gap = std::abs(iB.times[ip[j]] - out.t_max);
      out.ideal_rank = j + 1;
    }
  return out;
}

// 10. Post-processing.
void criterion10(Outcome& o) {
  auto c = preset_config("octalin");
  const auto S0 = run_simulate(c, FieldRegime::Zero, kThreads);
  const auto same = observed_ratio(S0, S0, *c.postprocess);
  double w = 0.0;
  for (double v : same.ratio.values) w = std::max(w, std::abs(v - 1.0));
  o.at_most("identical inputs max |R - 1|", w, 1e-12);

  double mass = 0.0;
  for (double step : {0.1, 0.05, 0.03, 0.25}) {
    double s = 0.0;
    for (double k : boxcar_kernel(step, 1.0)) s += k;
    mass = std::max(mass, std::abs(s - 1.0));
  }
  o.at_most("boxcar mass |sum - 1|", mass, 1e-15);

  const auto coarse = ratio_peak(c, 0.1);
  const auto fine = ratio_peak(c, 0.05);
  o.require(coarse.rank == 2, "global maximum is R peak number", static_cast<double>(coarse.rank), 2);
  o.require(coarse.ideal_rank == 2, "nearest ideal-ratio peak number", static_cast<double>(coarse.ideal_rank), 2);
  o.at_most("peak shift under grid refinement (ns), at t=" + num(coarse.t_max),
            std::abs(coarse.t_max - fine.t_max), 0.5);
}

// 11. Both electrons at (T1, T2) versus electron 1 alone at half the times.
void criterion11(Outcome& o) {
  const auto grid = uniform_grid(0.0, 100.0, 0.1);
  auto s = octalin(0.0);
  s.relaxation = {9.0, 9.0};
  o.at_most("octalin zero field", half_rate_max_deviation(s, grid, kThreads), 1e-10);
  s = octalin(0.3);
  s.relaxation = {kInfinity, 9.0};
  o.at_most("octalin high field", half_rate_max_deviation(s, grid, kThreads), 1e-10);
  auto d = dmb(0.1);
  d.relaxation = {kInfinity, 20.0};
  o.at_most("dmb high field", half_rate_max_deviation(d, uniform_grid(0.0, 100.0, 0.5), kThreads), 1e-10);
}

// 12. First-order product formula convergence.
void criterion12(Outcome& o) {
  const auto spec = octalin(0.0);
  for (int I = 1; I <= 4; ++I) {
    double prev = trotter_singlet_error(HalfInt::from_int(I), spec, 10.0, 25);
    for (int steps : {50, 100, 200}) {
      const double e = trotter_singlet_error(HalfInt::from_int(I), spec, 10.0, steps);
      o.require(prev / e >= 1.8, "I=" + std::to_string(I) + " error ratio at " + std::to_string(steps) + " steps",
                prev / e, 1.8);
      prev = e;
    }
  }
  o.at_most("I=4, 100 steps, t=10ns |dS|", trotter_singlet_error(HalfInt::from_int(4), spec, 10.0, 100), 1e-3);
}

const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> kCriteria = {
    {"table reproduction", criterion1},
    {"oracle equivalence", criterion2},
    {"degeneracy structure", criterion3},
    {"relaxation asymptotes", criterion4},
    {"channel-circuit equivalence", criterion5},
    {"KAK round trip", criterion6},
    {"purification", criterion7},
    {"two-group structure", criterion8},
    {"correction/injection round trip", criterion9},
    {"post-processing", criterion10},
    {"half-rate equivalence", criterion11},
    {"Trotter convergence", criterion12},
};

bool run(std::size_t n) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    kCriteria[n - 1].second(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail << "\n    exception: " << e.what();
  }
  std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << n << " (" << kCriteria[n - 1].first << ", "
            << seconds_since(t0) << " s)" << o.detail.str() << "\n";
  return o.pass;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::size_t> which;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--criterion" && i + 1 < argc) {
      which.push_back(static_cast<std::size_t>(std::atoi(argv[++i])));
    } else {
      std::cerr << "usage: acceptance [--criterion N]\n";
      return 2;
    }
  }
  if (which.empty())
    for (std::size_t n = 1; n <= kCriteria.size(); ++n) which.push_back(n);
  bool ok = true;
  for (auto n : which) {
    if (n < 1 || n > kCriteria.size()) {
      std::cerr << "criterion must be 1.." << kCriteria.size() << "\n";
      return 2;
    }
    ok = run(n) && ok;
  }
  return ok ? 0 : 1;
}
