#pragma once

#include "sagnacsim/polarization.hpp"
#include "sagnacsim/presets.hpp"
#include "sagnacsim/sellmeier.hpp"

#include <random>
#include <vector>

namespace sagnacsim::test {

inline const std::vector<SellmeierSet>& catalog() {
  static const std::vector<SellmeierSet> sets =
      load_sellmeier_file(SAGNACSIM_TEST_DATA_FILE);
  return sets;
}

inline const SourcePreset& telecom() {
  static const SourcePreset p = telecom_preset(catalog());
  return p;
}

inline const SourcePreset& band800() {
  static const SourcePreset p = band800_preset(catalog());
  return p;
}

/// constant-index stub set: n(lambda) = n0 everywhere in [0.1, 10] um
inline SellmeierSet constant_index_set(double n0, Axis axis) {
  SellmeierSet s;
  s.source = "stub-const";
  s.axis = axis;
  s.window_lo_um = 0.1;
  s.window_hi_um = 10.0;
  s.a = n0 * n0;
  s.d = 0.0;
  return s;
}

/// Ginibre-ensemble random density matrix (full rank almost surely).
inline Eigen::Matrix4cd random_density_matrix(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::Matrix4cd g;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g(i, j) = std::complex<double>(gauss(rng), gauss(rng));
  Eigen::Matrix4cd rho = g * g.adjoint();
  rho /= rho.trace().real();
  return rho;
}

/// Haar-ish random pure two-qubit state.
inline Eigen::Vector4cd random_pure_ket(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::Vector4cd k;
  for (int i = 0; i < 4; ++i) k(i) = std::complex<double>(gauss(rng), gauss(rng));
  return k.normalized();
}

}  // namespace sagnacsim::test
