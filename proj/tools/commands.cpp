#include "commands.hpp"

#include "sagnacsim/io.hpp"
#include "sagnacsim/tomography.hpp"
#include "sagnacsim/units.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace sagnacsim::cli {

namespace {

using nlohmann::json;

/// All outputs are composed in memory first and written together, each file
/// atomically, so a failing computation leaves nothing behind.
class OutputSet {
 public:
  OutputSet(const std::filesystem::path& dir, std::string format)
      : dir_(dir), format_(std::move(format)) {}

  void add_text(const std::string& name, std::string content) {
    files_[name] = std::move(content);
  }
  void add_json(const std::string& name, const json& j) { files_[name] = j.dump(2) + "\n"; }

  /// tabular payload: CSV or a JSON records file depending on --format
  void add_table(const std::string& base, const std::string& csv, const json& as_json) {
    if (format_ == "csv") {
      add_text(base + ".csv", csv);
    } else {
      add_json(base + ".json", as_json);
    }
  }

  void commit() const {
    std::filesystem::create_directories(dir_);
    for (const auto& [name, content] : files_) {
      write_text_atomic(dir_ / name, content);
    }
  }

 private:
  std::filesystem::path dir_;
  std::string format_;
  std::map<std::string, std::string> files_;
};

json grid_json(const SpectralGrid& g) {
  return {{"signal_lo_nm", g.signal_lo_nm}, {"signal_hi_nm", g.signal_hi_nm},
          {"signal_points", g.signal_points}, {"idler_lo_nm", g.idler_lo_nm},
          {"idler_hi_nm", g.idler_hi_nm}, {"idler_points", g.idler_points}};
}

json crystal_json(const CrystalConfig& c) {
  return {{"length_mm", c.length_mm},
          {"poling_period_um", c.poling_period_um},
          {"pump_axis", to_string(c.pump_axis)},
          {"signal_axis", to_string(c.signal_axis)},
          {"idler_axis", to_string(c.idler_axis)},
          {"sellmeier_y", c.sellmeier_y.source},
          {"sellmeier_z", c.sellmeier_z.source},
          {"regime", c.regime},
          {"temperature_c", c.temperature_c}};
}

json pump_json(const PumpConfig& p) {
  return {{"center_nm", p.center_nm}, {"fwhm_nm", p.fwhm_nm}, {"shape", "gaussian"}};
}

json estimate_json(const Estimate& e) {
  return {{"value", e.value}, {"sigma", e.sigma}};
}

json source_json(const CommandContext& ctx) {
  const auto& p = ctx.config.preset;
  return {{"preset", p.name},
          {"state", to_string(ctx.target)},
          {"power_mw", ctx.power_mw},
          {"noise_enabled", p.noise_enabled},
          {"phase_offset_rad", p.phase_offset_rad},
          {"multipair_epsilon", preset_epsilon(p, ctx.power_mw)},
          {"extinction_ratio", p.extinction_ratio},
          {"background_level_cps", background_level_cps(p, ctx.power_mw)}};
}

json matrix_json(const Eigen::MatrixXcd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row.push_back({m(i, j).real(), m(i, j).imag()});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string marginal_csv(const MarginalSpectrum& m) {
  std::ostringstream os;
  os.precision(12);
  os << "wavelength_nm,intensity\n";
  for (std::size_t i = 0; i < m.wavelength_nm.size(); ++i) {
    os << m.wavelength_nm[i] << ',' << m.intensity[i] << '\n';
  }
  return os.str();
}

json marginal_json(const MarginalSpectrum& m) {
  return {{"wavelength_nm", m.wavelength_nm},
          {"intensity", m.intensity},
          {"fwhm_nm", m.fwhm_nm}};
}

}  // namespace

int cmd_jsa(const CommandContext& ctx) {
  const auto& p = ctx.config.preset;
  const auto jsa = compute_jsa(p.crystal, p.pump, p.grid);
  const auto sch = schmidt(jsa);
  const auto [marg_s, marg_i] = marginals(jsa);

  OutputSet out(ctx.config.out_dir, ctx.config.format);
  out.add_table("jsi", jsa_csv(jsa, JsaComponent::Intensity),
                {{"grid", grid_json(jsa.grid)},
                 {"intensity", matrix_json(jsa.amplitude.cwiseAbs2().cast<std::complex<double>>())}});
  out.add_table("jsa_re", jsa_csv(jsa, JsaComponent::Real),
                {{"grid", grid_json(jsa.grid)}, {"amplitude", matrix_json(jsa.amplitude)}});
  out.add_table("jsa_im", jsa_csv(jsa, JsaComponent::Imag),
                {{"grid", grid_json(jsa.grid)}, {"amplitude", matrix_json(jsa.amplitude)}});
  out.add_table("marginal_signal", marginal_csv(marg_s), marginal_json(marg_s));
  out.add_table("marginal_idler", marginal_csv(marg_i), marginal_json(marg_i));

  json summary{{"command", "jsa"},
               {"preset", p.name},
               {"crystal", crystal_json(p.crystal)},
               {"pump", pump_json(p.pump)},
               {"grid", grid_json(p.grid)},
               {"purity", sch.purity},
               {"schmidt_number", sch.schmidt_number},
               {"normalization", jsa.total_intensity()},
               {"marginal_fwhm_signal_nm", marg_s.fwhm_nm},
               {"marginal_fwhm_idler_nm", marg_i.fwhm_nm}};
  out.add_json("summary.json", summary);
  out.commit();
  return kExitOk;
}

int cmd_purity_scan(const CommandContext& ctx, double fwhm_lo_nm, double fwhm_hi_nm,
                    int steps) {
  const auto& p = ctx.config.preset;
  const auto res = purity_scan(p.crystal, p.pump, fwhm_lo_nm, fwhm_hi_nm, steps, p.grid);

  std::ostringstream csv;
  csv.precision(12);
  csv << "pump_fwhm_nm,purity\n";
  json curve = json::array();
  for (const auto& pt : res.curve) {
    csv << pt.fwhm_nm << ',' << pt.purity << '\n';
    curve.push_back({{"pump_fwhm_nm", pt.fwhm_nm}, {"purity", pt.purity}});
  }

  OutputSet out(ctx.config.out_dir, ctx.config.format);
  out.add_table("scan", csv.str(), curve);
  out.add_json("summary.json", json{{"command", "purity-scan"},
                                    {"preset", p.name},
                                    {"crystal", crystal_json(p.crystal)},
                                    {"pump_center_nm", p.pump.center_nm},
                                    {"grid", grid_json(p.grid)},
                                    {"fwhm_lo_nm", fwhm_lo_nm},
                                    {"fwhm_hi_nm", fwhm_hi_nm},
                                    {"steps", steps},
                                    {"best_fwhm_nm", res.best_fwhm_nm},
                                    {"best_purity", res.best_purity}});
  out.commit();
  return kExitOk;
}

int cmd_fringe(const CommandContext& ctx, const std::vector<double>& theta1_deg) {
  const auto& p = ctx.config.preset;
  const auto rho = make_source_state(p, ctx.target, ctx.power_mw);
  const RateModel rates = rates_at_power(p, ctx.power_mw);
  const double bg = background_level_cps(p, ctx.power_mw);

  OutputSet out(ctx.config.out_dir, ctx.config.format);
  json per_angle = json::array();
  for (std::size_t i = 0; i < theta1_deg.size(); ++i) {
    const double t1 = theta1_deg[i];
    std::vector<MeasurementSetting> settings;
    std::vector<double> sweep;
    for (double t2 = 0.0; t2 < 360.0; t2 += 5.0) {
      std::ostringstream id;
      id << "t1=" << t1 << ",t2=" << t2;
      settings.push_back({id.str(), t1, t2});
      sweep.push_back(t2);
    }
    const auto records =
        simulate_counts(rho, settings, rates, ctx.time_s, substream_seed(ctx.seed, i));
    const auto raw = visibility_from_records(records);
    const auto sub = visibility_from_records(records, bg);
    const auto model = fringe(rho, t1, sweep);

    std::ostringstream base;
    base << "records_theta1_" << t1;
    out.add_table(base.str(), count_records_csv(records), count_records_json(records));
    std::ostringstream model_base;
    model_base << "model_theta1_" << t1;
    out.add_table(model_base.str(), fringe_csv(sweep, model),
                  json{{"theta2_deg", sweep}, {"probability", model}});

    per_angle.push_back({{"theta1_deg", t1},
                         {"visibility_raw", estimate_json(raw)},
                         {"visibility_subtracted", estimate_json(sub)},
                         {"analytic_visibility", visibility(model)}});
  }

  out.add_json("summary.json", json{{"command", "fringe"},
                                    {"source", source_json(ctx)},
                                    {"accumulation_s", ctx.time_s},
                                    {"seed", ctx.seed},
                                    {"fringes", per_angle}});
  out.commit();
  return kExitOk;
}

int cmd_chsh(const CommandContext& ctx) {
  const auto& p = ctx.config.preset;
  const auto rho = make_source_state(p, ctx.target, ctx.power_mw);
  const RateModel rates = rates_at_power(p, ctx.power_mw);
  const double bg = background_level_cps(p, ctx.power_mw);

  const auto records = simulate_counts(rho, chsh_settings(), rates, ctx.time_s, ctx.seed);
  const auto raw = chsh_from_records(records);
  const auto sub = chsh_from_records(records, bg);
  const double analytic = chsh_s(rho, kChshA, kChshAp, kChshB, kChshBp);

  OutputSet out(ctx.config.out_dir, ctx.config.format);
  out.add_table("records", count_records_csv(records), count_records_json(records));
  out.add_json("summary.json",
               json{{"command", "chsh"},
                    {"source", source_json(ctx)},
                    {"accumulation_s", ctx.time_s},
                    {"seed", ctx.seed},
                    {"angles", {{"a", kChshA}, {"a_prime", kChshAp}, {"b", kChshB}, {"b_prime", kChshBp}}},
                    {"S_raw", estimate_json(raw)},
                    {"S_subtracted", estimate_json(sub)},
                    {"S_analytic", analytic},
                    {"sigma_violation_raw", (raw.value - 2.0) / raw.sigma},
                    {"sigma_violation_subtracted", (sub.value - 2.0) / sub.sigma}});
  out.commit();
  return kExitOk;
}

namespace {

std::vector<CountRecord> subtract_records(std::vector<CountRecord> records, double bg_cps) {
  for (auto& rec : records) {
    const double sub = static_cast<double>(rec.count) - bg_cps * rec.accumulation_s;
    rec.count = static_cast<std::uint64_t>(std::llround(std::max(0.0, sub)));
  }
  return records;
}

json tomo_result_json(const TomographyResult& res, const BootstrapErrors& errs) {
  return {{"fidelity", res.fidelity_to_target},
          {"sigma_fidelity", errs.sigma_fidelity},
          {"concurrence", res.concurrence},
          {"sigma_concurrence", errs.sigma_concurrence},
          {"log_likelihood", res.log_likelihood},
          {"iterations", res.iterations},
          {"converged", res.converged},
          {"bootstrap_resamples", errs.resamples},
          {"bootstrap_failures", errs.failures}};
}

}  // namespace

int cmd_tomo(const CommandContext& ctx) {
  const auto& p = ctx.config.preset;
  const auto rho = make_source_state(p, ctx.target, ctx.power_mw);
  const RateModel rates = rates_at_power(p, ctx.power_mw);
  const double bg = background_level_cps(p, ctx.power_mw);
  const auto target_ket = bell_ket(ctx.target);

  const auto records = simulate_tomo_counts(rho, rates, ctx.time_s, ctx.seed);
  const auto records_sub = subtract_records(records, bg);

  const auto res_raw = mle_reconstruct(records, target_ket);
  const auto res_sub = mle_reconstruct(records_sub, target_ket);
  const auto errs_raw =
      bootstrap_errors(records, target_ket, ctx.resamples, substream_seed(ctx.seed, 1001));
  const auto errs_sub =
      bootstrap_errors(records_sub, target_ket, ctx.resamples, substream_seed(ctx.seed, 1002));

  OutputSet out(ctx.config.out_dir, ctx.config.format);
  out.add_table("records", count_records_csv(records), count_records_json(records));
  out.add_text("rho_re.csv", state_csv(res_sub.rho, false));
  out.add_text("rho_im.csv", state_csv(res_sub.rho, true));
  out.add_json("state_subtracted.json", state_json(res_sub.rho));
  out.add_json("state_raw.json", state_json(res_raw.rho));
  out.add_json("summary.json", json{{"command", "tomo"},
                                    {"source", source_json(ctx)},
                                    {"accumulation_s", ctx.time_s},
                                    {"seed", ctx.seed},
                                    {"target", to_string(ctx.target)},
                                    {"raw", tomo_result_json(res_raw, errs_raw)},
                                    {"subtracted", tomo_result_json(res_sub, errs_sub)}});
  out.commit();
  return (res_raw.converged && res_sub.converged) ? kExitOk : kExitNumerical;
}

int cmd_tomo_from_records(const CommandContext& ctx,
                          const std::filesystem::path& records_path,
                          double subtract_cps) {
  std::ifstream in(records_path);
  if (!in) {
    throw std::invalid_argument("cannot open records file: " + records_path.string());
  }
  std::stringstream ss;
  ss << in.rdbuf();
  const auto records = count_records_from_csv(ss.str());
  const auto target_ket = bell_ket(ctx.target);

  const bool subtract = subtract_cps > 0.0;
  const auto working = subtract ? subtract_records(records, subtract_cps) : records;
  const auto res = mle_reconstruct(working, target_ket);
  const auto errs =
      bootstrap_errors(working, target_ket, ctx.resamples, substream_seed(ctx.seed, 1001));

  OutputSet out(ctx.config.out_dir, ctx.config.format);
  out.add_table("records", count_records_csv(records), count_records_json(records));
  out.add_text("rho_re.csv", state_csv(res.rho, false));
  out.add_text("rho_im.csv", state_csv(res.rho, true));
  out.add_json("state.json", state_json(res.rho));
  out.add_json("summary.json", json{{"command", "tomo"},
                                    {"records_file", records_path.string()},
                                    {"subtract_background_cps", subtract_cps},
                                    {"seed", ctx.seed},
                                    {"target", to_string(ctx.target)},
                                    {"result", tomo_result_json(res, errs)}});
  out.commit();
  return res.converged ? kExitOk : kExitNumerical;
}

int cmd_power_sweep(const CommandContext& ctx, const std::vector<double>& powers_mw) {
  const auto& p = ctx.config.preset;

  std::ostringstream csv;
  csv.precision(12);
  csv << "power_mw,v_raw,v_raw_sigma,v_subtracted,v_subtracted_sigma,status\n";
  json rows = json::array();
  std::vector<double> fit_p, fit_v;
  bool monotone = true;
  double prev_raw = 2.0;
  for (std::size_t i = 0; i < powers_mw.size(); ++i) {
    const double power = powers_mw[i];
    json row{{"power_mw", power}};
    if (!(power > 0.0)) {
      csv << power << ",,,,," << "error: nonpositive power\n";
      row["status"] = "error: nonpositive power";
      rows.push_back(std::move(row));
      continue;
    }
    const auto rho = make_source_state(p, ctx.target, power);
    const RateModel rates = rates_at_power(p, power);
    const double bg = background_level_cps(p, power);
    // extrema of the diagonal-basis fringe for the psi- source
    const std::vector<MeasurementSetting> settings = {{"min", 45.0, 45.0},
                                                      {"max", 45.0, 135.0}};
    const auto records =
        simulate_counts(rho, settings, rates, ctx.time_s, substream_seed(ctx.seed, i));
    try {
      const auto raw = visibility_from_records(records);
      const auto sub = visibility_from_records(records, bg);
      csv << power << ',' << raw.value << ',' << raw.sigma << ',' << sub.value << ','
          << sub.sigma << ",ok\n";
      row["visibility_raw"] = estimate_json(raw);
      row["visibility_subtracted"] = estimate_json(sub);
      row["status"] = "ok";
      fit_p.push_back(power);
      fit_v.push_back(raw.value);
      if (raw.value >= prev_raw) monotone = false;
      prev_raw = raw.value;
    } catch (const std::exception& e) {
      csv << power << ",,,,,error: " << e.what() << '\n';
      row["status"] = std::string("error: ") + e.what();
    }
    rows.push_back(std::move(row));
  }

  json fit = nullptr;
  if (fit_p.size() >= 2) {
    const double n = static_cast<double>(fit_p.size());
    double sp = 0, sv = 0, spp = 0, spv = 0;
    for (std::size_t i = 0; i < fit_p.size(); ++i) {
      sp += fit_p[i];
      sv += fit_v[i];
      spp += fit_p[i] * fit_p[i];
      spv += fit_p[i] * fit_v[i];
    }
    const double slope = (n * spv - sp * sv) / (n * spp - sp * sp);
    const double intercept = (sv - slope * sp) / n;
    double ss_res = 0, ss_tot = 0;
    const double mean = sv / n;
    for (std::size_t i = 0; i < fit_p.size(); ++i) {
      const double r = fit_v[i] - (slope * fit_p[i] + intercept);
      ss_res += r * r;
      ss_tot += (fit_v[i] - mean) * (fit_v[i] - mean);
    }
    fit = json{{"slope_per_mw", slope},
               {"intercept", intercept},
               {"r_squared", ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 0.0}};
  }

  OutputSet out(ctx.config.out_dir, ctx.config.format);
  out.add_table("sweep", csv.str(), rows);
  out.add_json("summary.json", json{{"command", "power-sweep"},
                                    {"source", source_json(ctx)},
                                    {"accumulation_s", ctx.time_s},
                                    {"seed", ctx.seed},
                                    {"rows", rows},
                                    {"raw_linear_fit", fit},
                                    {"raw_monotone_decreasing", monotone}});
  out.commit();
  return kExitOk;
}

}  // namespace sagnacsim::cli
