#pragma once

#include <vector>

#include "rpbeats/dynamics.hpp"

namespace rpbeats {

struct FluorescenceParams {
  double theta = 0.35;  // recombination fraction
  double tau_f = 1.2;   // ns
  double t0 = 1.0;      // ns
  double t_g = 1.0;     // ns

  void validate() const;
};

// F(t) [theta S(t) + (1 - theta)/4] with F(t) = (t + t0)^(-3/2).
TimeSeries ideal_intensity(const TimeSeries& S, const FluorescenceParams& p);

// Step of a uniform grid; throws if the grid is not uniform.
double grid_step(const std::vector<double>& times);

// Boxcar of width t_g sampled on cells k*h +- h/2, k = -K..K; sums to 1.
std::vector<double> boxcar_kernel(double step, double t_g);

// (E * I)(t) with causal E(t) = exp(-t/tau_f), trapezoidal rule.
std::vector<double> convolve_exponential(const std::vector<double>& values, double step, double tau_f);
// Centered discrete convolution, zero outside the grid.
std::vector<double> convolve_centered(const std::vector<double>& values, const std::vector<double>& kernel);

TimeSeries observed_intensity(const TimeSeries& ideal, const FluorescenceParams& p);

struct RatioResult {
  TimeSeries ratio;
  TimeSeries intensity_B;
  TimeSeries intensity_0;
  double edge_until = 0.0;   // samples before this time are edge-affected
  double edge_after = 0.0;   // samples after this time see the right-hand zero extension
};

RatioResult observed_ratio(const TimeSeries& S_B, const TimeSeries& S_0, const FluorescenceParams& p);

// Indices of local maxima whose topographic prominence is at least min_prominence.
std::vector<std::size_t> find_peaks(const std::vector<double>& v, double min_prominence);
std::vector<std::size_t> find_minima(const std::vector<double>& v, double min_prominence);

}  // namespace rpbeats
