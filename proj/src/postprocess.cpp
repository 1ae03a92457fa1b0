#include "rpbeats/postprocess.hpp"

#include <algorithm>
#include <cmath>

#include "rpbeats/errors.hpp"

namespace rpbeats {

void FluorescenceParams::validate() const {
  if (!(theta >= 0.0 && theta <= 1.0)) throw InvalidArgument("theta must lie in [0,1]");
  if (!(tau_f > 0) || !(t0 > 0) || !(t_g > 0)) throw InvalidArgument("tau_f, t0 and t_g must be positive");
}

TimeSeries ideal_intensity(const TimeSeries& S, const FluorescenceParams& p) {
  p.validate();
  TimeSeries out{S.times, {}, "I_ideal", false};
  out.values.reserve(S.size());
  for (std::size_t k = 0; k < S.size(); ++k) {
    const double x = S.times[k] + p.t0;
    if (!(x > 0)) throw InvalidArgument("t + t0 must be positive");
    out.values.push_back(std::pow(x, -1.5) * (p.theta * S.values[k] + 0.25 * (1.0 - p.theta)));
  }
  return out;
}

double grid_step(const std::vector<double>& times) {
  if (times.size() < 2) throw InvalidArgument("grid needs at least two points");
  const double h = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
  for (std::size_t k = 1; k < times.size(); ++k)
    if (std::abs(times[k] - times[k - 1] - h) > 1e-9 * std::max(1.0, h)) throw InvalidArgument("grid is not uniform");
  return h;
}

std::vector<double> boxcar_kernel(double step, double t_g) {
  if (!(step > 0) || !(t_g > 0)) throw InvalidArgument("boxcar_kernel: positive step and width required");
  const double half = 0.5 * t_g;
  const int K = static_cast<int>(std::ceil(half / step + 0.5));
  std::vector<double> w(static_cast<std::size_t>(2 * K + 1), 0.0);
  for (int k = -K; k <= K; ++k) {
    const double lo = std::max(k * step - 0.5 * step, -half);
    const double hi = std::min(k * step + 0.5 * step, half);
    w[static_cast<std::size_t>(k + K)] = std::max(0.0, hi - lo) / t_g;
  }
  double sum = 0.0;
  for (double x : w) sum += x;
  for (double& x : w) x /= sum;
  return w;
}

std::vector<double> convolve_exponential(const std::vector<double>& values, double step, double tau_f) {
  const std::size_t n = values.size();
  std::vector<double> E(n);
  for (std::size_t k = 0; k < n; ++k) E[k] = std::exp(-static_cast<double>(k) * step / tau_f);
  // kernel below 1e-18 of its peak is dropped
  const auto reach = static_cast<std::size_t>(std::ceil(41.5 * tau_f / step));
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    double acc = 0.5 * (E[i] * values[0] + E[0] * values[i]);
    for (std::size_t j = i > reach ? i - reach : 1; j < i; ++j) acc += E[i - j] * values[j];
    out[i] = step * acc;
  }
  return out;
}

std::vector<double> convolve_centered(const std::vector<double>& values, const std::vector<double>& kernel) {
  const auto n = static_cast<long>(values.size());
  const long K = static_cast<long>(kernel.size() / 2);
  std::vector<double> out(values.size(), 0.0);
  for (long i = 0; i < n; ++i) {
    double acc = 0.0;
    for (long k = -K; k <= K; ++k) {
      const long j = i - k;
      if (j >= 0 && j < n) acc += kernel[static_cast<std::size_t>(k + K)] * values[static_cast<std::size_t>(j)];
    }
    out[static_cast<std::size_t>(i)] = acc;
  }
  return out;
}

TimeSeries observed_intensity(const TimeSeries& ideal, const FluorescenceParams& p) {
  p.validate();
  const double h = grid_step(ideal.times);
  if (h > std::min(p.tau_f, p.t_g) / 4.0 + 1e-12)
    throw InvalidArgument("grid too coarse: step must be <= min(tau_f, t_g)/4");
  TimeSeries out{ideal.times, {}, "I_observed", false};
  out.values = convolve_centered(convolve_exponential(ideal.values, h, p.tau_f), boxcar_kernel(h, p.t_g));
  return out;
}

RatioResult observed_ratio(const TimeSeries& S_B, const TimeSeries& S_0, const FluorescenceParams& p) {
  if (S_B.times.size() != S_0.times.size()) throw InvalidArgument("observed_ratio: grids differ");
  for (std::size_t k = 0; k < S_B.times.size(); ++k)
    if (std::abs(S_B.times[k] - S_0.times[k]) > 1e-12) throw InvalidArgument("observed_ratio: grids differ");
  RatioResult r;
  r.intensity_B = observed_intensity(ideal_intensity(S_B, p), p);
  r.intensity_0 = observed_intensity(ideal_intensity(S_0, p), p);
  r.intensity_B.label = "I_B";
  r.intensity_0.label = "I_0";
  const double peak = *std::max_element(r.intensity_0.values.begin(), r.intensity_0.values.end());
  if (!(peak > 0)) throw NumericalError("denominator intensity vanishes everywhere");
  const double floor = 1e-12 * peak;
  r.ratio.label = "R";
  for (std::size_t k = 0; k < S_B.size(); ++k) {
    if (r.intensity_0.values[k] > floor) {
      r.ratio.times.push_back(S_B.times[k]);
      r.ratio.values.push_back(r.intensity_B.values[k] / r.intensity_0.values[k]);
    }
  }
  r.edge_until = S_B.times.front() + p.t_g + 3.0 * p.tau_f;
  r.edge_after = S_B.times.back() - 0.5 * p.t_g;
  return r;
}

std::vector<std::size_t> find_peaks(const std::vector<double>& v, double min_prominence) {
  std::vector<std::size_t> out;
  const std::size_t n = v.size();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!(v[i] > v[i - 1] && v[i] >= v[i + 1])) continue;
    // lowest point on each side before reaching a higher sample
    double left = v[i], right = v[i];
    for (std::size_t j = i; j-- > 0;) {
      if (v[j] > v[i]) break;
      left = std::min(left, v[j]);
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      if (v[j] > v[i]) break;
      right = std::min(right, v[j]);
    }
    if (v[i] - std::max(left, right) >= min_prominence) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> find_minima(const std::vector<double>& v, double min_prominence) {
  std::vector<double> neg(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) neg[i] = -v[i];
  return find_peaks(neg, min_prominence);
}

}  // namespace rpbeats
