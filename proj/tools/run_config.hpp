#pragma once

#include "sagnacsim/presets.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>

namespace sagnacsim::cli {

/// Sectioned key = value text (# or ; comments). Unknown sections or keys
/// are validation errors so typos cannot silently fall back to defaults.
using IniData = std::map<std::string, std::map<std::string, std::string>>;

IniData parse_ini(const std::string& text);
IniData load_ini(const std::filesystem::path& path);

struct RunConfig {
  SourcePreset preset;
  std::filesystem::path out_dir;
  std::string format = "csv";  // data files: csv | json (summary is always JSON)
  std::optional<std::uint64_t> seed;

  void validate_for_output() const;
};

/// preset defaults -> config file overrides; flags are applied by the CLI
/// on top of the result.
RunConfig build_run_config(const std::string& preset_name,
                           const std::optional<std::filesystem::path>& config_path,
                           const std::vector<SellmeierSet>& catalog);

}  // namespace sagnacsim::cli
