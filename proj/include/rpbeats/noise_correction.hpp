#pragma once

#include <Eigen/Dense>

namespace rpbeats {

// Bell-basis populations of the electron pair: singlet, T0, T+ = |up up>, T- = |down down>.
struct MeasurementStats {
  double S = 0.0, T0 = 0.0, Tp = 0.0, Tm = 0.0;

  double sum() const { return S + T0 + Tp + Tm; }
  void validate(double tol = 1e-12) const;
};

MeasurementStats bell_stats(const Eigen::Matrix4cd& rho_e);

// Undamped statistics from a noisy run and a delay-only reference run.
MeasurementStats noise_correction(const MeasurementStats& measured, const MeasurementStats& reference,
                                  double min_denominator = 1e-6);

// Noisy singlet probability S*S'' + T0*T0'' + T+*T+'' + T-*T-''.
double noise_injection(const MeasurementStats& undamped, const MeasurementStats& target);

// Full noisy statistics whose singlet entry is noise_injection and which the
// correction above inverts exactly.
MeasurementStats inject_noise_stats(const MeasurementStats& undamped, const MeasurementStats& channel);

}  // namespace rpbeats
