#pragma once

namespace rpbeats::units {

// Bohr magneton over hbar, rad s^-1 T^-1.
inline constexpr double kMuBOverHbar = 8.794e10;
// Same constant in rad ns^-1 mT^-1.
inline constexpr double kMuBOverHbarNsMt = kMuBOverHbar * 1e-9 * 1e-3;

inline constexpr double gauss_to_mt(double gauss) { return 0.1 * gauss; }

// Hyperfine constant in mT to angular frequency (rad/ns).
inline constexpr double hfc_angular(double a_mt, double g) { return kMuBOverHbarNsMt * g * a_mt; }

// Half the electron Zeeman splitting (rad/ns) for a field in tesla.
inline constexpr double zeeman_half_angular(double g, double field_t) {
  return kMuBOverHbar * 1e-9 * g * field_t / 2.0;
}

}  // namespace rpbeats::units
