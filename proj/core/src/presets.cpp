#include "sagnacsim/presets.hpp"

#include "sagnacsim/units.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace sagnacsim {

namespace {

// Residual phase error of the phase compensation, calibrated so the
// background-subtracted diagonal-basis visibility is 96.5%: V(45) = cos(dphi).
const double kPhaseOffsetRad = std::acos(0.965);

// Poling period that phase-matches the degenerate 800 nm pair with the
// Fan-y/Fradkin-z dispersion (2pi/|k_p - k_s - k_i|); no value is reported
// for this band, unlike the telecom 46.1 um.
constexpr double kBand800PolingUm = 9.2682;

}  // namespace

Eigen::Vector4cd bell_ket(BellTarget target) {
  return target == BellTarget::PsiMinus ? bell_psi_minus() : bell_psi_plus();
}

std::string to_string(BellTarget target) {
  return target == BellTarget::PsiMinus ? "psi-minus" : "psi-plus";
}

BellTarget bell_target_from_string(const std::string& s) {
  if (s == "psi-minus" || s == "psi_minus") return BellTarget::PsiMinus;
  if (s == "psi-plus" || s == "psi_plus") return BellTarget::PsiPlus;
  throw std::invalid_argument("unknown Bell target '" + s + "' (psi-minus | psi-plus)");
}

std::filesystem::path default_sellmeier_path() {
  if (const char* env = std::getenv("SAGNACSIM_DATA_FILE")) {
    return env;
  }
  std::vector<std::filesystem::path> candidates;
#ifdef SAGNACSIM_INSTALL_DATADIR
  candidates.emplace_back(std::filesystem::path(SAGNACSIM_INSTALL_DATADIR) / "ktp_sellmeier.txt");
#endif
#ifdef SAGNACSIM_SOURCE_DATA_DIR
  candidates.emplace_back(std::filesystem::path(SAGNACSIM_SOURCE_DATA_DIR) / "ktp_sellmeier.txt");
#endif
  candidates.emplace_back("data/ktp_sellmeier.txt");
  for (const auto& p : candidates) {
    if (std::filesystem::exists(p)) return p;
  }
  throw std::runtime_error(
      "cannot locate ktp_sellmeier.txt; set SAGNACSIM_DATA_FILE to its path");
}

std::vector<SellmeierSet> load_default_sellmeier_catalog() {
  return load_sellmeier_file(default_sellmeier_path());
}

namespace {

RateModel paper_rates() {
  RateModel m;
  m.pair_rate_ref_cps = 20000.0;
  m.reference_power_mw = 10.0;
  m.power_mw = 10.0;
  m.detector_eff_1 = 0.70;
  m.detector_eff_2 = 0.68;
  m.dark_rate_1_cps = 1000.0;
  m.dark_rate_2_cps = 1000.0;
  m.optical_efficiency = 0.10;
  m.background_cps = 35.0;
  m.repetition_rate_hz = 76e6;
  m.dead_time_s = 40e-9;
  m.timing_jitter_s = 68e-12;
  return m;
}

SourcePreset common_preset(const std::vector<SellmeierSet>& catalog) {
  SourcePreset p;
  p.phase_offset_rad = kPhaseOffsetRad;
  p.pump_ratio = 1.0;
  p.multipair_k = 0.35;
  p.mu_per_mw = 0.0014;
  p.extinction_ratio = 200.0;
  p.noise_enabled = true;
  p.rates = paper_rates();
  p.crystal.length_mm = 30.0;
  p.crystal.pump_axis = Axis::Y;
  p.crystal.signal_axis = Axis::Y;
  p.crystal.idler_axis = Axis::Z;
  p.crystal.sellmeier_z = find_sellmeier(catalog, "fradkin-z");
  return p;
}

}  // namespace

SourcePreset telecom_preset(const std::vector<SellmeierSet>& catalog) {
  SourcePreset p = common_preset(catalog);
  p.name = "telecom";
  p.crystal.sellmeier_y = find_sellmeier(catalog, "konig-y");
  p.crystal.regime = "telecom-band";
  p.crystal.poling_period_um = 46.1;
  p.crystal.temperature_c = 32.5;
  p.pump.center_nm = 792.0;
  p.pump.fwhm_nm = 0.4;
  p.grid = SpectralGrid::centered(1584.0, 6.0, 256);
  p.scan_lo_nm = 0.1;
  p.scan_hi_nm = 1.0;
  p.scan_steps = kDefaultScanSteps;
  p.crystal.validate();
  return p;
}

SourcePreset band800_preset(const std::vector<SellmeierSet>& catalog) {
  SourcePreset p = common_preset(catalog);
  p.name = "800nm";
  p.crystal.sellmeier_y = find_sellmeier(catalog, "fan-y");
  p.crystal.regime = "800-band";
  p.crystal.poling_period_um = kBand800PolingUm;
  p.crystal.temperature_c = 25.0;
  p.pump.center_nm = 400.0;
  p.pump.fwhm_nm = 0.014;
  p.grid = SpectralGrid::centered(800.0, 1.5, 256);
  p.scan_lo_nm = 0.005;
  p.scan_hi_nm = 0.05;
  p.scan_steps = kDefaultScanSteps;
  p.crystal.validate();
  return p;
}

SourcePreset preset_by_name(const std::string& name,
                            const std::vector<SellmeierSet>& catalog) {
  if (name == "telecom") return telecom_preset(catalog);
  if (name == "800nm") return band800_preset(catalog);
  throw std::invalid_argument("unknown preset '" + name + "' (telecom | 800nm)");
}

double preset_epsilon(const SourcePreset& p, double power_mw) {
  if (!p.noise_enabled) return 0.0;
  return multipair_epsilon(p.mu_per_mw * power_mw, p.multipair_k);
}

TwoQubitState make_source_state(const SourcePreset& p, BellTarget target,
                                double power_mw) {
  const double bell_phase = target == BellTarget::PsiMinus ? kPi : 0.0;
  if (!p.noise_enabled) {
    return sagnac_state({bell_phase, p.pump_ratio});
  }
  TwoQubitState rho = sagnac_state({bell_phase + p.phase_offset_rad, p.pump_ratio});
  rho = depolarize(rho, preset_epsilon(p, power_mw));
  rho = pbs_leak(rho, p.extinction_ratio);
  return rho;
}

double background_level_cps(const SourcePreset& p, double power_mw) {
  RateModel m = rates_at_power(p, power_mw);
  return m.background_cps + m.pair_rate_cps() * preset_epsilon(p, power_mw) / 4.0;
}

RateModel rates_at_power(const SourcePreset& p, double power_mw) {
  RateModel m = p.rates;
  m.power_mw = power_mw;
  return m;
}

}  // namespace sagnacsim
