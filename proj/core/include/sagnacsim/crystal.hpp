#pragma once

#include "sagnacsim/sellmeier.hpp"

#include <string>

namespace sagnacsim {

/// Type-II quasi-phase-matched KTP crystal: geometry, poling and the
/// dispersion sets assigned to its two transverse axes.
struct CrystalConfig {
  double length_mm = 30.0;
  double poling_period_um = 46.1;
  Axis pump_axis = Axis::Y;
  Axis signal_axis = Axis::Y;
  Axis idler_axis = Axis::Z;
  SellmeierSet sellmeier_y;
  SellmeierSet sellmeier_z;
  std::string regime = "telecom-band";  // or "800-band"; selects the y source
  double temperature_c = 32.5;          // metadata only, no thermo-optic model

  const SellmeierSet& set_for_axis(Axis axis) const {
    return axis == Axis::Y ? sellmeier_y : sellmeier_z;
  }
  const SellmeierSet& pump_set() const { return set_for_axis(pump_axis); }
  const SellmeierSet& signal_set() const { return set_for_axis(signal_axis); }
  const SellmeierSet& idler_set() const { return set_for_axis(idler_axis); }

  /// L > 0, poling period > 0, signal and idler on different axes,
  /// Sellmeier sets on their declared axes. Throws std::invalid_argument.
  void validate() const;
};

/// 2/Vg_p(lp) - 1/Vg_s(2lp) - 1/Vg_i(2lp) in s/m, degenerate pair assumed.
/// Zero exactly at the group-velocity-matched pump wavelength.
double gvm_residual(const CrystalConfig& c, double pump_um);

/// Bracketing bisection for the root of gvm_residual. The bracket must
/// straddle a sign change; throws std::invalid_argument otherwise.
/// Bisects until the interval collapses to adjacent doubles (well past the
/// 1e-7 um requirement), capped at 200 iterations.
double find_gvm_pump(const CrystalConfig& c, double lo_um, double hi_um);

/// k_p - k_s - k_i in rad/um, collinear, 1/lp = 1/ls + 1/li.
double birefringent_mismatch(const CrystalConfig& c, double signal_um, double idler_um);

/// First-order QPM mismatch in rad/um. The grating vector enters with the
/// sign that opposes the birefringent mismatch, so a period returned by
/// poling_period_for zeroes it in either band (the mismatch changes sign
/// between the 800 band and the telecom band).
double qpm_mismatch(const CrystalConfig& c, double signal_um, double idler_um);

/// Period (um, positive) whose first-order grating exactly cancels the
/// birefringent mismatch of the given pair. Throws on zero mismatch.
double poling_period_for(const CrystalConfig& c, double signal_um, double idler_um);

}  // namespace sagnacsim
