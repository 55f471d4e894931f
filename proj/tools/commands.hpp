#pragma once

#include "run_config.hpp"

#include <cstdint>
#include <vector>

namespace sagnacsim::cli {

struct CommandContext {
  RunConfig config;
  BellTarget target = BellTarget::PsiMinus;
  double power_mw = 10.0;
  double time_s = 1.0;
  int resamples = 50;
  std::uint64_t seed = 0;
};

// exit codes: 0 success, 2 validation, 3 numerical failure
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

int cmd_jsa(const CommandContext& ctx);
int cmd_purity_scan(const CommandContext& ctx, double fwhm_lo_nm, double fwhm_hi_nm,
                    int steps);
int cmd_fringe(const CommandContext& ctx, const std::vector<double>& theta1_deg);
int cmd_chsh(const CommandContext& ctx);
int cmd_tomo(const CommandContext& ctx);
/// reconstruction from an existing count-record CSV (simulated or measured)
int cmd_tomo_from_records(const CommandContext& ctx,
                          const std::filesystem::path& records_path,
                          double subtract_cps);
int cmd_power_sweep(const CommandContext& ctx, const std::vector<double>& powers_mw);

}  // namespace sagnacsim::cli
