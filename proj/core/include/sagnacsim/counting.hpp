#pragma once

#include "sagnacsim/polarization.hpp"
#include "sagnacsim/random.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace sagnacsim {

/// Detected-coincidence rate model anchored to a measured reference point
/// (the paper's 20 kcps at 10 mW, no polarizers). Detector/optics figures
/// are carried for bookkeeping; the anchor already includes them.
struct RateModel {
  double pair_rate_ref_cps = 20000.0;  // coincidences without polarizers at reference power
  double reference_power_mw = 10.0;
  double power_mw = 10.0;
  double detector_eff_1 = 0.70;
  double detector_eff_2 = 0.68;
  double dark_rate_1_cps = 1000.0;
  double dark_rate_2_cps = 1000.0;
  double optical_efficiency = 0.10;   // overall, incl. coupling
  double background_cps = 35.0;       // flat accidental+dark coincidence floor
  double repetition_rate_hz = 76e6;
  double dead_time_s = 40e-9;
  double timing_jitter_s = 68e-12;
  bool apply_dead_time = false;       // optional saturation correction

  void validate() const;

  /// Pair-coincidence rate scaled linearly to the configured pump power.
  double pair_rate_cps() const {
    return pair_rate_ref_cps * power_mw / reference_power_mw;
  }
};

/// One analyzer configuration. Angles are polarizer angles in degrees; for
/// settings that have no polarizer representation (circular tomography
/// projectors) they are NaN and only the id identifies the setting.
struct MeasurementSetting {
  std::string id;
  double theta1_deg = 0.0;
  double theta2_deg = 0.0;
};

struct CountRecord {
  MeasurementSetting setting;
  double accumulation_s = 1.0;
  std::uint64_t count = 0;
  double expected_rate_cps = 0.0;  // diagnostic
};

/// pair_rate * coincidence_prob + background, with the optional dead-time
/// saturation rate/(1 + rate*tau) applied when enabled.
double expected_rate(const TwoQubitState& rho, const MeasurementSetting& s,
                     const RateModel& m);

/// Shared kernel for non-polarizer settings (tomography projectors).
double expected_rate_from_prob(double prob, const RateModel& m);

/// One Poisson draw at the given rate; exposed so other simulations reuse
/// the same sampling path.
CountRecord draw_count(const MeasurementSetting& s, double rate_cps,
                       double accumulation_s, Rng& rng);

/// Poisson counts for every setting. Setting k draws from the substream
/// (seed, k), so results do not depend on evaluation order.
std::vector<CountRecord> simulate_counts(const TwoQubitState& rho,
                                         const std::vector<MeasurementSetting>& settings,
                                         const RateModel& m, double accumulation_s,
                                         std::uint64_t seed);

struct Estimate {
  double value = 0.0;
  double sigma = 0.0;
};

/// Fringe visibility from the extreme counts of one fringe's records, with
/// first-order Poisson error propagation. subtract_background_cps > 0
/// subtracts that flat rate (times accumulation) from every count first;
/// subtracted counts are floored at zero.
Estimate visibility_from_records(const std::vector<CountRecord>& records,
                                 double subtract_background_cps = 0.0);

/// The 16 canonical CHSH settings: for each angle pair (a,b), (a,b'),
/// (a',b), (a',b') the four outcomes (t1,t2), (t1,t2+90), (t1+90,t2),
/// (t1+90,t2+90), in that order.
std::vector<MeasurementSetting> chsh_settings(double a_deg = kChshA,
                                              double ap_deg = kChshAp,
                                              double b_deg = kChshB,
                                              double bp_deg = kChshBp);

/// S and its Poisson sigma from records in chsh_settings order.
Estimate chsh_from_records(const std::vector<CountRecord>& records,
                           double subtract_background_cps = 0.0);

}  // namespace sagnacsim
