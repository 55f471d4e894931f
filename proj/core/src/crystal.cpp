#include "sagnacsim/crystal.hpp"

#include "sagnacsim/units.hpp"

#include <cmath>
#include <stdexcept>

namespace sagnacsim {

void CrystalConfig::validate() const {
  if (!(length_mm > 0.0)) {
    throw std::invalid_argument("crystal length must be positive");
  }
  if (!(poling_period_um > 0.0)) {
    throw std::invalid_argument("poling period must be positive");
  }
  if (signal_axis == idler_axis) {
    throw std::invalid_argument("type-II assignment needs signal and idler on different axes");
  }
  if (sellmeier_y.axis != Axis::Y || sellmeier_z.axis != Axis::Z) {
    throw std::invalid_argument("Sellmeier sets assigned to the wrong axis");
  }
}

double gvm_residual(const CrystalConfig& c, double pump_um) {
  const double ng_p = group_index(c.pump_set(), pump_um);
  const double ng_s = group_index(c.signal_set(), 2.0 * pump_um);
  const double ng_i = group_index(c.idler_set(), 2.0 * pump_um);
  return (2.0 * ng_p - ng_s - ng_i) / kSpeedOfLightMps;
}

double find_gvm_pump(const CrystalConfig& c, double lo_um, double hi_um) {
  if (!(lo_um < hi_um)) {
    throw std::invalid_argument("GVM bracket must satisfy lo < hi");
  }
  double f_lo = gvm_residual(c, lo_um);
  double f_hi = gvm_residual(c, hi_um);
  if (f_lo == 0.0) return lo_um;
  if (f_hi == 0.0) return hi_um;
  if (std::signbit(f_lo) == std::signbit(f_hi)) {
    throw std::invalid_argument("GVM bracket endpoints have the same residual sign");
  }
  double lo = lo_um, hi = hi_um;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // interval collapsed to adjacent doubles
    const double f_mid = gvm_residual(c, mid);
    if (f_mid == 0.0) return mid;
    if (std::signbit(f_mid) == std::signbit(f_lo)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
      f_hi = f_mid;
    }
  }
  return std::abs(f_lo) <= std::abs(f_hi) ? lo : hi;
}

double birefringent_mismatch(const CrystalConfig& c, double signal_um, double idler_um) {
  const double pump_um = 1.0 / (1.0 / signal_um + 1.0 / idler_um);
  const double k_p = refractive_index(c.pump_set(), pump_um) / pump_um;
  const double k_s = refractive_index(c.signal_set(), signal_um) / signal_um;
  const double k_i = refractive_index(c.idler_set(), idler_um) / idler_um;
  return kTwoPi * (k_p - k_s - k_i);
}

double qpm_mismatch(const CrystalConfig& c, double signal_um, double idler_um) {
  const double dk0 = birefringent_mismatch(c, signal_um, idler_um);
  const double grating = kTwoPi / c.poling_period_um;
  return dk0 - std::copysign(grating, dk0);
}

double poling_period_for(const CrystalConfig& c, double signal_um, double idler_um) {
  const double dk0 = birefringent_mismatch(c, signal_um, idler_um);
  if (dk0 == 0.0) {
    throw std::invalid_argument("pair is already birefringently phase matched; no finite poling period");
  }
  return kTwoPi / std::abs(dk0);
}

}  // namespace sagnacsim
