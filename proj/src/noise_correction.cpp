#include "rpbeats/noise_correction.hpp"

#include <cmath>
#include <string>

#include "rpbeats/errors.hpp"
#include "rpbeats/linalg.hpp"

namespace rpbeats {

void MeasurementStats::validate(double tol) const {
  for (double v : {S, T0, Tp, Tm})
    if (v < -tol) throw NumericalError("negative measurement probability");
  if (std::abs(sum() - 1.0) > tol) throw NumericalError("measurement probabilities do not sum to 1");
}

MeasurementStats bell_stats(const Eigen::Matrix4cd& rho_e) {
  const double r = 1.0 / std::sqrt(2.0);
  const Eigen::Vector4cd s = singlet_vector();
  const Eigen::Vector4cd t0(0, r, r, 0);
  MeasurementStats m;
  m.S = (s.adjoint() * rho_e * s)(0).real();
  m.T0 = (t0.adjoint() * rho_e * t0)(0).real();
  m.Tp = rho_e(0, 0).real();
  m.Tm = rho_e(3, 3).real();
  return m;
}

MeasurementStats noise_correction(const MeasurementStats& measured, const MeasurementStats& reference,
                                  double min_denominator) {
  const double dp = 1.0 - 4.0 * reference.Tp;
  const double dm = 1.0 - 4.0 * reference.Tm;
  const double ds = reference.S * reference.S - reference.T0 * reference.T0;
  for (double d : {dp, dm, ds})
    if (std::abs(d) < min_denominator)
      throw NumericalError("noise level unrecoverable: correction denominator " + std::to_string(d));
  MeasurementStats out;
  out.Tp = (measured.Tp - reference.Tp) / dp;
  out.Tm = (measured.Tm - reference.Tm) / dm;
  const double A = measured.S - out.Tp * reference.Tp - out.Tm * reference.Tm;
  const double B = measured.T0 - out.Tp * reference.Tp - out.Tm * reference.Tm;
  out.S = (A * reference.S - B * reference.T0) / ds;
  out.T0 = (B * reference.S - A * reference.T0) / ds;
  return out;
}

double noise_injection(const MeasurementStats& u, const MeasurementStats& t) {
  return u.S * t.S + u.T0 * t.T0 + u.Tp * t.Tp + u.Tm * t.Tm;
}

MeasurementStats inject_noise_stats(const MeasurementStats& u, const MeasurementStats& c) {
  MeasurementStats out;
  out.S = noise_injection(u, c);
  out.T0 = u.S * c.T0 + u.T0 * c.S + u.Tp * c.Tp + u.Tm * c.Tm;
  out.Tp = c.Tp + u.Tp * (1.0 - 4.0 * c.Tp);
  out.Tm = c.Tm + u.Tm * (1.0 - 4.0 * c.Tm);
  return out;
}

}  // namespace rpbeats
