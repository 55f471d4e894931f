#pragma once

#include <numbers>

namespace sagnacsim {

inline constexpr double kSpeedOfLightMps = 2.99792458e8;    // m/s
inline constexpr double kSpeedOfLightUmps = 2.99792458e14;  // um/s
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kPi = std::numbers::pi;

// transform-limited Gaussian pulse time-bandwidth product (FWHM x FWHM)
inline constexpr double kGaussianTbp = 0.441;

inline constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

// angular frequency [rad/s] of vacuum wavelength in nm
inline constexpr double omega_from_nm(double lambda_nm) {
  return kTwoPi * kSpeedOfLightUmps / (lambda_nm * 1e-3);
}

}  // namespace sagnacsim
