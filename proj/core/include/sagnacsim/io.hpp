#pragma once

#include "sagnacsim/counting.hpp"
#include "sagnacsim/polarization.hpp"
#include "sagnacsim/spectral.hpp"

#include <nlohmann/json_fwd.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace sagnacsim {

/// Writes via a temporary file in the same directory plus rename, so a
/// failed command never leaves a partial output behind.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

enum class JsaComponent { Intensity, Real, Imag };

/// Grid-header CSV: first row carries the idler axis, first column the
/// signal axis; matrix rows are signal-major.
std::string jsa_csv(const JointSpectrum& jsa, JsaComponent component);

/// Fringe curve CSV: angle_deg, probability.
std::string fringe_csv(const std::vector<double>& theta2_deg,
                       const std::vector<double>& probability);

/// Count records CSV: setting_id, theta1_deg, theta2_deg, accumulation_s,
/// count. Angles of non-polarizer settings are written as empty fields.
std::string count_records_csv(const std::vector<CountRecord>& records);
std::vector<CountRecord> count_records_from_csv(const std::string& text);

nlohmann::json count_records_json(const std::vector<CountRecord>& records);

/// Density matrix as row-major [re, im] pairs in the HH,HV,VH,VV basis.
nlohmann::json state_json(const TwoQubitState& state);
TwoQubitState state_from_json(const nlohmann::json& j);

/// Density matrix CSV (one component): 4x4 numeric block with basis header.
std::string state_csv(const TwoQubitState& state, bool imaginary_part);

}  // namespace sagnacsim
