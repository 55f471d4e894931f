#include "sagnacsim/io.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace sagnacsim {

void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + tmp.string());
    out << content;
    if (!out.flush()) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string jsa_csv(const JointSpectrum& jsa, JsaComponent component) {
  const auto& g = jsa.grid;
  std::ostringstream os;
  os.precision(12);
  os << "signal_nm\\idler_nm";
  for (int j = 0; j < g.idler_points; ++j) os << ',' << g.idler_nm(j);
  os << '\n';
  for (int i = 0; i < g.signal_points; ++i) {
    os << g.signal_nm(i);
    for (int j = 0; j < g.idler_points; ++j) {
      const auto f = jsa.amplitude(i, j);
      double v = 0.0;
      switch (component) {
        case JsaComponent::Intensity: v = std::norm(f); break;
        case JsaComponent::Real: v = f.real(); break;
        case JsaComponent::Imag: v = f.imag(); break;
      }
      os << ',' << v;
    }
    os << '\n';
  }
  return os.str();
}

std::string fringe_csv(const std::vector<double>& theta2_deg,
                       const std::vector<double>& probability) {
  if (theta2_deg.size() != probability.size()) {
    throw std::invalid_argument("fringe CSV: angle and probability lengths differ");
  }
  std::ostringstream os;
  os.precision(12);
  os << "theta2_deg,probability\n";
  for (std::size_t i = 0; i < theta2_deg.size(); ++i) {
    os << theta2_deg[i] << ',' << probability[i] << '\n';
  }
  return os.str();
}

std::string count_records_csv(const std::vector<CountRecord>& records) {
  std::ostringstream os;
  os.precision(12);
  os << "setting_id,theta1_deg,theta2_deg,accumulation_s,count\n";
  for (const auto& r : records) {
    os << r.setting.id << ',';
    if (std::isfinite(r.setting.theta1_deg)) os << r.setting.theta1_deg;
    os << ',';
    if (std::isfinite(r.setting.theta2_deg)) os << r.setting.theta2_deg;
    os << ',' << r.accumulation_s << ',' << r.count << '\n';
  }
  return os.str();
}

std::vector<CountRecord> count_records_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty count-record CSV");
  std::vector<CountRecord> records;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.size() != 5) {
      throw std::runtime_error("count-record CSV line " + std::to_string(lineno) +
                               ": expected 5 fields");
    }
    CountRecord rec;
    rec.setting.id = fields[0];
    const double nan = std::numeric_limits<double>::quiet_NaN();
    rec.setting.theta1_deg = fields[1].empty() ? nan : std::stod(fields[1]);
    rec.setting.theta2_deg = fields[2].empty() ? nan : std::stod(fields[2]);
    rec.accumulation_s = std::stod(fields[3]);
    rec.count = std::stoull(fields[4]);
    records.push_back(std::move(rec));
  }
  return records;
}

nlohmann::json count_records_json(const std::vector<CountRecord>& records) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : records) {
    nlohmann::json j{{"setting_id", r.setting.id},
                     {"accumulation_s", r.accumulation_s},
                     {"count", r.count},
                     {"expected_rate_cps", r.expected_rate_cps}};
    if (std::isfinite(r.setting.theta1_deg)) j["theta1_deg"] = r.setting.theta1_deg;
    if (std::isfinite(r.setting.theta2_deg)) j["theta2_deg"] = r.setting.theta2_deg;
    arr.push_back(std::move(j));
  }
  return arr;
}

nlohmann::json state_json(const TwoQubitState& state) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < 4; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < 4; ++j) {
      const auto v = state.matrix()(i, j);
      row.push_back({v.real(), v.imag()});
    }
    rows.push_back(std::move(row));
  }
  return {{"basis", {"HH", "HV", "VH", "VV"}},
          {"rho", rows},
          {"purity", state.purity()},
          {"pure", state.is_pure()}};
}

TwoQubitState state_from_json(const nlohmann::json& j) {
  const auto& rows = j.at("rho");
  if (rows.size() != 4) throw std::runtime_error("state JSON: rho must be 4x4");
  Eigen::Matrix4cd rho;
  for (int i = 0; i < 4; ++i) {
    const auto& row = rows.at(i);
    if (row.size() != 4) throw std::runtime_error("state JSON: rho must be 4x4");
    for (int k = 0; k < 4; ++k) {
      const auto& cell = row.at(k);
      rho(i, k) = std::complex<double>(cell.at(0).get<double>(), cell.at(1).get<double>());
    }
  }
  return TwoQubitState(rho);
}

std::string state_csv(const TwoQubitState& state, bool imaginary_part) {
  static const char* basis[4] = {"HH", "HV", "VH", "VV"};
  std::ostringstream os;
  os.precision(12);
  os << "basis";
  for (const char* b : basis) os << ',' << b;
  os << '\n';
  for (int i = 0; i < 4; ++i) {
    os << basis[i];
    for (int j = 0; j < 4; ++j) {
      const auto v = state.matrix()(i, j);
      os << ',' << (imaginary_part ? v.imag() : v.real());
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace sagnacsim
