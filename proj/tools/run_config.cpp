#include "run_config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace sagnacsim::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& section, const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw std::invalid_argument("[" + section + "] " + key + ": not a number: '" + v + "'");
  }
}

int to_int(const std::string& section, const std::string& key, const std::string& v) {
  const double d = to_double(section, key, v);
  const int i = static_cast<int>(d);
  if (static_cast<double>(i) != d) {
    throw std::invalid_argument("[" + section + "] " + key + ": not an integer: '" + v + "'");
  }
  return i;
}

bool to_bool(const std::string& section, const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw std::invalid_argument("[" + section + "] " + key + ": not a boolean: '" + v + "'");
}

}  // namespace

IniData parse_ini(const std::string& text) {
  IniData data;
  std::istringstream in(text);
  std::string line, section;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto comment = line.find_first_of("#;");
    if (comment != std::string::npos) line.erase(comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw std::invalid_argument("config line " + std::to_string(lineno) +
                                    ": unterminated section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) {
        throw std::invalid_argument("config line " + std::to_string(lineno) +
                                    ": empty section name");
      }
      data[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key = value");
    }
    if (section.empty()) {
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": key outside any [section]");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": empty key or value");
    }
    data[section][key] = value;
  }
  return data;
}

IniData load_ini(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_ini(ss.str());
}

void RunConfig::validate_for_output() const {
  if (out_dir.empty()) throw std::invalid_argument("output directory is required");
  if (format != "csv" && format != "json") {
    throw std::invalid_argument("format must be csv or json, got '" + format + "'");
  }
}

namespace {

void apply_ini(SourcePreset& p, RunConfig& rc, const IniData& ini,
               const std::vector<SellmeierSet>& catalog) {
  const std::set<std::string> known_sections = {"crystal", "pump", "grid", "noise",
                                                "rate-model", "output", "seed", "scan"};
  for (const auto& [section, kvs] : ini) {
    if (!known_sections.count(section)) {
      throw std::invalid_argument("unknown config section [" + section + "]");
    }
    for (const auto& [key, value] : kvs) {
      if (section == "crystal") {
        if (key == "length_mm") p.crystal.length_mm = to_double(section, key, value);
        else if (key == "poling_period_um") p.crystal.poling_period_um = to_double(section, key, value);
        else if (key == "pump_axis") p.crystal.pump_axis = axis_from_string(value);
        else if (key == "signal_axis") p.crystal.signal_axis = axis_from_string(value);
        else if (key == "idler_axis") p.crystal.idler_axis = axis_from_string(value);
        else if (key == "sellmeier_y") p.crystal.sellmeier_y = find_sellmeier(catalog, value);
        else if (key == "sellmeier_z") p.crystal.sellmeier_z = find_sellmeier(catalog, value);
        else if (key == "regime") p.crystal.regime = value;
        else if (key == "temperature_c") p.crystal.temperature_c = to_double(section, key, value);
        else throw std::invalid_argument("unknown key [crystal] " + key);
      } else if (section == "pump") {
        if (key == "center_nm") p.pump.center_nm = to_double(section, key, value);
        else if (key == "fwhm_nm") p.pump.fwhm_nm = to_double(section, key, value);
        else if (key == "shape") {
          if (value != "gaussian") {
            throw std::invalid_argument("[pump] shape: only 'gaussian' is supported");
          }
        } else throw std::invalid_argument("unknown key [pump] " + key);
      } else if (section == "grid") {
        if (key == "center_nm" || key == "half_span_nm" || key == "points") {
          // applied together below once all three are known
        } else throw std::invalid_argument("unknown key [grid] " + key);
      } else if (section == "noise") {
        if (key == "enabled") p.noise_enabled = to_bool(section, key, value);
        else if (key == "phase_offset_rad") p.phase_offset_rad = to_double(section, key, value);
        else if (key == "pump_ratio") p.pump_ratio = to_double(section, key, value);
        else if (key == "multipair_k") p.multipair_k = to_double(section, key, value);
        else if (key == "mu_per_mw") p.mu_per_mw = to_double(section, key, value);
        else if (key == "extinction_ratio") p.extinction_ratio = to_double(section, key, value);
        else throw std::invalid_argument("unknown key [noise] " + key);
      } else if (section == "rate-model") {
        if (key == "pair_rate_ref_cps") p.rates.pair_rate_ref_cps = to_double(section, key, value);
        else if (key == "reference_power_mw") p.rates.reference_power_mw = to_double(section, key, value);
        else if (key == "power_mw") p.rates.power_mw = to_double(section, key, value);
        else if (key == "detector_eff_1") p.rates.detector_eff_1 = to_double(section, key, value);
        else if (key == "detector_eff_2") p.rates.detector_eff_2 = to_double(section, key, value);
        else if (key == "dark_rate_1_cps") p.rates.dark_rate_1_cps = to_double(section, key, value);
        else if (key == "dark_rate_2_cps") p.rates.dark_rate_2_cps = to_double(section, key, value);
        else if (key == "optical_efficiency") p.rates.optical_efficiency = to_double(section, key, value);
        else if (key == "background_cps") p.rates.background_cps = to_double(section, key, value);
        else if (key == "repetition_rate_hz") p.rates.repetition_rate_hz = to_double(section, key, value);
        else if (key == "dead_time_s") p.rates.dead_time_s = to_double(section, key, value);
        else if (key == "timing_jitter_s") p.rates.timing_jitter_s = to_double(section, key, value);
        else if (key == "apply_dead_time") p.rates.apply_dead_time = to_bool(section, key, value);
        else throw std::invalid_argument("unknown key [rate-model] " + key);
      } else if (section == "output") {
        if (key == "directory") rc.out_dir = value;
        else if (key == "format") rc.format = value;
        else throw std::invalid_argument("unknown key [output] " + key);
      } else if (section == "seed") {
        if (key == "value") rc.seed = static_cast<std::uint64_t>(std::stoull(value));
        else throw std::invalid_argument("unknown key [seed] " + key);
      } else if (section == "scan") {
        if (key == "lo_nm") p.scan_lo_nm = to_double(section, key, value);
        else if (key == "hi_nm") p.scan_hi_nm = to_double(section, key, value);
        else if (key == "steps") p.scan_steps = to_int(section, key, value);
        else throw std::invalid_argument("unknown key [scan] " + key);
      }
    }
  }

  // grid keys act together so a partial override cannot desynchronize axes
  if (const auto it = ini.find("grid"); it != ini.end() && !it->second.empty()) {
    double center = 0.5 * (p.grid.signal_lo_nm + p.grid.signal_hi_nm);
    double half = 0.5 * (p.grid.signal_hi_nm - p.grid.signal_lo_nm);
    int points = p.grid.signal_points;
    for (const auto& [key, value] : it->second) {
      if (key == "center_nm") center = to_double("grid", key, value);
      else if (key == "half_span_nm") half = to_double("grid", key, value);
      else if (key == "points") points = to_int("grid", key, value);
    }
    p.grid = SpectralGrid::centered(center, half, points);
  }
}

}  // namespace

RunConfig build_run_config(const std::string& preset_name,
                           const std::optional<std::filesystem::path>& config_path,
                           const std::vector<SellmeierSet>& catalog) {
  RunConfig rc;
  rc.preset = preset_by_name(preset_name, catalog);
  if (config_path) {
    apply_ini(rc.preset, rc, load_ini(*config_path), catalog);
  }
  rc.preset.crystal.validate();
  rc.preset.pump.validate();
  rc.preset.grid.validate();
  rc.preset.rates.validate();
  return rc;
}

}  // namespace sagnacsim::cli
