#include "commands.hpp"
#include "run_config.hpp"

#include "sagnacsim/presets.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace sagnacsim;
using namespace sagnacsim::cli;

struct CommonOpts {
  std::string preset = "telecom";
  std::string config_path;
  std::string out_dir;
  std::string format = "csv";
  std::string sellmeier_path;
  std::string state = "psi-minus";
  double power_mw = 10.0;
  double time_s = 1.0;
  std::uint64_t seed = 0;
  bool no_noise = false;
};

void add_common(CLI::App* sub, CommonOpts& o) {
  sub->add_option("--preset", o.preset, "Source preset: telecom | 800nm")
      ->capture_default_str();
  sub->add_option("--config", o.config_path,
                  "Sectioned key=value config file overriding the preset");
  sub->add_option("--out", o.out_dir, "Output directory")->required();
  sub->add_option("--format", o.format, "Data file format: csv | json")
      ->capture_default_str();
  sub->add_option("--sellmeier-data", o.sellmeier_path,
                  "Path to the Sellmeier table file");
}

void add_stochastic(CLI::App* sub, CommonOpts& o) {
  sub->add_option("--seed", o.seed, "RNG seed (required: runs are reproducible)")
      ->required();
  sub->add_option("--time", o.time_s, "Accumulation time per setting, seconds")
      ->capture_default_str();
  sub->add_option("--power", o.power_mw, "Pump power in mW")->capture_default_str();
  sub->add_option("--state", o.state, "Target Bell state: psi-minus | psi-plus")
      ->capture_default_str();
  sub->add_flag("--no-noise", o.no_noise, "Disable the source noise model");
}

CommandContext make_context(const CommonOpts& o) {
  if (!o.sellmeier_path.empty()) {
    setenv("SAGNACSIM_DATA_FILE", o.sellmeier_path.c_str(), 1);
  }
  const auto catalog = load_default_sellmeier_catalog();
  CommandContext ctx;
  ctx.config = build_run_config(
      o.preset,
      o.config_path.empty() ? std::nullopt
                            : std::make_optional<std::filesystem::path>(o.config_path),
      catalog);
  if (!o.out_dir.empty()) ctx.config.out_dir = o.out_dir;
  if (!o.format.empty()) ctx.config.format = o.format;
  ctx.config.validate_for_output();
  ctx.target = bell_target_from_string(o.state);
  ctx.power_mw = o.power_mw;
  ctx.time_s = o.time_s;
  ctx.seed = o.seed;
  if (o.no_noise) {
    ctx.config.preset.noise_enabled = false;
    ctx.config.preset.rates.background_cps = 0.0;  // dark floor is noise too
  }
  if (!(ctx.time_s > 0.0)) throw std::invalid_argument("--time must be positive");
  return ctx;
}

std::pair<double, double> parse_range(const std::string& text, const char* what) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw std::invalid_argument(std::string(what) + ": expected LO:HI, got '" + text + "'");
  }
  return {std::stod(text.substr(0, colon)), std::stod(text.substr(colon + 1))};
}

std::vector<double> parse_powers(const std::string& text) {
  // LO:HI:STEP inclusive ladder
  const auto c1 = text.find(':');
  const auto c2 = text.find(':', c1 == std::string::npos ? 0 : c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos) {
    throw std::invalid_argument("--powers: expected LO:HI:STEP, got '" + text + "'");
  }
  const double lo = std::stod(text.substr(0, c1));
  const double hi = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
  const double step = std::stod(text.substr(c2 + 1));
  if (!(step > 0.0) || hi < lo) {
    throw std::invalid_argument("--powers: need LO <= HI and STEP > 0");
  }
  std::vector<double> out;
  for (double p = lo; p <= hi + 1e-9; p += step) out.push_back(p);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulator for a pulsed Sagnac-loop polarization-entangled photon source"};
  app.require_subcommand(1);

  CommonOpts jsa_o, scan_o, fringe_o, chsh_o, tomo_o, sweep_o;

  auto* jsa = app.add_subcommand("jsa", "Joint spectral amplitude, purity and marginals");
  add_common(jsa, jsa_o);

  auto* scan = app.add_subcommand("purity-scan", "Purity vs pump bandwidth scan");
  add_common(scan, scan_o);
  std::string fwhm_range;
  int scan_steps = 0;
  scan->add_option("--fwhm-range", fwhm_range, "Scan range LO:HI in nm (preset default)");
  scan->add_option("--steps", scan_steps, "Ladder steps (preset default)");

  auto* fr = app.add_subcommand("fringe", "Polarization-correlation fringes with counts");
  add_common(fr, fringe_o);
  add_stochastic(fr, fringe_o);
  std::vector<double> theta1 = {0.0, 45.0, 90.0, 135.0};
  fr->add_option("--theta1", theta1, "Fixed analyzer angles in degrees")
      ->capture_default_str();

  auto* ch = app.add_subcommand("chsh", "CHSH S from simulated counts");
  add_common(ch, chsh_o);
  add_stochastic(ch, chsh_o);

  auto* tm = app.add_subcommand("tomo", "Maximum-likelihood state tomography");
  add_common(tm, tomo_o);
  add_stochastic(tm, tomo_o);
  int resamples = 50;
  std::string records_file;
  double subtract_cps = 0.0;
  tm->add_option("--resamples", resamples, "Bootstrap resamples")->capture_default_str();
  tm->add_option("--records", records_file,
                 "Reconstruct from an existing count-record CSV instead of simulating");
  tm->add_option("--subtract", subtract_cps,
                 "Flat background rate (cps) to subtract from --records counts");

  auto* sw = app.add_subcommand("power-sweep", "Visibility vs pump power");
  add_common(sw, sweep_o);
  add_stochastic(sw, sweep_o);
  std::string powers = "10:100:10";
  sw->add_option("--powers", powers, "Power ladder LO:HI:STEP in mW")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return sagnacsim::cli::kExitValidation;
  }

  try {
    if (jsa->parsed()) {
      return cmd_jsa(make_context(jsa_o));
    }
    if (scan->parsed()) {
      auto ctx = make_context(scan_o);
      double lo = ctx.config.preset.scan_lo_nm, hi = ctx.config.preset.scan_hi_nm;
      if (!fwhm_range.empty()) std::tie(lo, hi) = parse_range(fwhm_range, "--fwhm-range");
      const int steps = scan_steps > 0 ? scan_steps : ctx.config.preset.scan_steps;
      return cmd_purity_scan(ctx, lo, hi, steps);
    }
    if (fr->parsed()) {
      auto ctx = make_context(fringe_o);
      ctx.power_mw = fringe_o.power_mw;
      return cmd_fringe(ctx, theta1);
    }
    if (ch->parsed()) {
      return cmd_chsh(make_context(chsh_o));
    }
    if (tm->parsed()) {
      auto ctx = make_context(tomo_o);
      if (resamples < 2) throw std::invalid_argument("--resamples must be at least 2");
      ctx.resamples = resamples;
      if (!records_file.empty()) {
        return cmd_tomo_from_records(ctx, records_file, subtract_cps);
      }
      return cmd_tomo(ctx);
    }
    if (sw->parsed()) {
      return cmd_power_sweep(make_context(sweep_o), parse_powers(powers));
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return sagnacsim::cli::kExitValidation;
  } catch (const std::domain_error& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return sagnacsim::cli::kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return sagnacsim::cli::kExitNumerical;
  }
  return sagnacsim::cli::kExitValidation;
}
