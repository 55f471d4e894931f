#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace sagnacsim {

enum class Axis { Y, Z };

std::string to_string(Axis axis);
Axis axis_from_string(const std::string& s);

/// One dispersion record: n^2(lambda) = a - d*lambda^2 + sum_k b_k/(1 - c_k/lambda^2),
/// lambda in micrometers, valid only inside [window_lo_um, window_hi_um].
struct SellmeierSet {
  std::string source;  // e.g. "fan-y", "konig-y", "fradkin-z"
  Axis axis = Axis::Y;
  double window_lo_um = 0.0;
  double window_hi_um = 0.0;
  double a = 0.0;
  double d = 0.0;
  std::vector<std::pair<double, double>> poles;  // (b_k, c_k)

  bool in_window(double lambda_um) const {
    return lambda_um >= window_lo_um && lambda_um <= window_hi_um;
  }
};

// central-difference step for group_index, in um
inline constexpr double kGroupIndexStepUm = 1e-4;

double refractive_index(const SellmeierSet& set, double lambda_um);

/// n_g = n - lambda * dn/dlambda, derivative by central difference of
/// step kGroupIndexStepUm; lambda +- step must stay inside the window.
double group_index(const SellmeierSet& set, double lambda_um);

/// Parses the whitespace-separated table format documented in
/// data/ktp_sellmeier.txt. Throws std::runtime_error on malformed input.
std::vector<SellmeierSet> load_sellmeier_file(const std::filesystem::path& path);

/// Lookup by source tag; throws std::runtime_error if absent.
const SellmeierSet& find_sellmeier(const std::vector<SellmeierSet>& sets,
                                   const std::string& source);

}  // namespace sagnacsim
