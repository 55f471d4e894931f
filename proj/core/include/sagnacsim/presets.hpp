#pragma once

#include "sagnacsim/counting.hpp"
#include "sagnacsim/crystal.hpp"
#include "sagnacsim/polarization.hpp"
#include "sagnacsim/spectral.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace sagnacsim {

enum class BellTarget { PsiMinus, PsiPlus };

Eigen::Vector4cd bell_ket(BellTarget target);
std::string to_string(BellTarget target);
BellTarget bell_target_from_string(const std::string& s);

/// Everything a pipeline run needs: crystal + pump + grid for the spectral
/// side, source noise knobs and the counting rate model for the
/// polarization side.
struct SourcePreset {
  std::string name;
  CrystalConfig crystal;
  PumpConfig pump;
  SpectralGrid grid;

  // source state model
  double phase_offset_rad = 0.0;  // residual phase error on top of the Bell phase
  double pump_ratio = 1.0;
  double multipair_k = 0.35;      // eps = min(1, k * mu)
  double mu_per_mw = 0.0014;      // mean pairs per pulse per mW of pump
  double extinction_ratio = 200.0;
  bool noise_enabled = true;

  RateModel rates;

  // pump-FWHM scan defaults for this band
  double scan_lo_nm = 0.1;
  double scan_hi_nm = 1.0;
  int scan_steps = 25;
};

/// Locates the shipped Sellmeier table: $SAGNACSIM_DATA_FILE if set, then
/// the installed share directory, then the source-tree data directory.
std::filesystem::path default_sellmeier_path();

std::vector<SellmeierSet> load_default_sellmeier_catalog();

/// Telecom band (Fig.-2-style apparatus): 792 nm pump, degenerate 1584 nm,
/// 30 mm crystal, 46.1 um poling, Konig y / Fradkin z dispersion.
SourcePreset telecom_preset(const std::vector<SellmeierSet>& catalog);

/// 800 band: 400 nm pump, degenerate 800 nm, 30 mm crystal, poling pinned
/// to phase-match the degenerate pair, Fan y / Fradkin z dispersion.
SourcePreset band800_preset(const std::vector<SellmeierSet>& catalog);

SourcePreset preset_by_name(const std::string& name,
                            const std::vector<SellmeierSet>& catalog);

/// Multipair depolarizing weight at the given pump power.
double preset_epsilon(const SourcePreset& p, double power_mw);

/// Source state at the given power: ideal Bell phase plus the preset's
/// residual phase offset, then multipair depolarization, then the analyzer
/// extinction leak. noise_enabled = false yields the ideal Bell state.
TwoQubitState make_source_state(const SourcePreset& p, BellTarget target,
                                double power_mw);

/// Flat coincidence background at this power: dark/accidental floor plus
/// the angle-independent part contributed by the depolarizing weight
/// (pair_rate * eps / 4). This is the level background subtraction removes.
double background_level_cps(const SourcePreset& p, double power_mw);

RateModel rates_at_power(const SourcePreset& p, double power_mw);

}  // namespace sagnacsim
