#pragma once

#include "sagnacsim/crystal.hpp"

#include <Eigen/Dense>

#include <complex>
#include <utility>
#include <vector>

namespace sagnacsim {

struct PumpConfig {
  double center_nm = 792.0;
  double fwhm_nm = 0.4;  // spectral intensity FWHM
  enum class Shape { Gaussian } shape = Shape::Gaussian;

  void validate() const;
};

/// Transform-limited Gaussian pulse duration (intensity FWHM, ps) for a
/// spectral intensity FWHM in nm at the given center wavelength.
double fwhm_nm_to_ps(double center_nm, double fwhm_nm);

/// Gaussian pump spectral amplitude at the pair (signal, idler): a function
/// of the summed angular-frequency detuning from the degenerate center.
/// Peak value 1 on the energy-conservation ridge; |amp|^2 falls to 1/2 when
/// the sum detuning equals half the pump's angular-frequency FWHM.
double pump_envelope(const PumpConfig& p, double signal_nm, double idler_nm);

/// sinc(dk L/2) * exp(i dk L/2); magnitude <= 1 with equality iff dk = 0.
std::complex<double> phasematching_amplitude(const CrystalConfig& c,
                                             double signal_nm, double idler_nm);

struct SpectralGrid {
  double signal_lo_nm = 0.0, signal_hi_nm = 0.0;
  int signal_points = 0;
  double idler_lo_nm = 0.0, idler_hi_nm = 0.0;
  int idler_points = 0;

  static SpectralGrid centered(double center_nm, double half_span_nm, int points);

  void validate() const;
  double signal_nm(int i) const;
  double idler_nm(int j) const;
  double signal_step_nm() const;
  double idler_step_nm() const;
  double cell_area_nm2() const { return signal_step_nm() * idler_step_nm(); }
};

/// Complex joint spectral amplitude sampled on a grid; rows are signal
/// wavelengths, columns idler (signal-major export order).
struct JointSpectrum {
  SpectralGrid grid;
  Eigen::MatrixXcd amplitude;
  bool normalized = false;

  /// sum |f|^2 * cell area
  double total_intensity() const;
};

/// Pointwise pump_envelope * phasematching_amplitude, normalized so that
/// sum |f|^2 * cell = 1. Deterministic.
JointSpectrum compute_jsa(const CrystalConfig& c, const PumpConfig& p,
                          const SpectralGrid& g);

struct SchmidtResult {
  Eigen::VectorXd coefficients;  // descending, sum to 1
  double purity = 0.0;           // sum of squares
  double schmidt_number = 0.0;   // 1/purity
};

/// SVD of the amplitude matrix; Schmidt coefficients are the squared
/// singular values renormalized to unit sum.
SchmidtResult schmidt(const JointSpectrum& jsa);

struct MarginalSpectrum {
  std::vector<double> wavelength_nm;
  std::vector<double> intensity;  // normalized to unit sum
  double fwhm_nm = 0.0;           // linear interpolation between grid points
};

std::pair<MarginalSpectrum, MarginalSpectrum> marginals(const JointSpectrum& jsa);

struct PurityScanPoint {
  double fwhm_nm = 0.0;
  double purity = 0.0;
};

struct PurityScanResult {
  double best_fwhm_nm = 0.0;
  double best_purity = 0.0;
  std::vector<PurityScanPoint> curve;  // ordered by FWHM ascending
};

inline constexpr int kDefaultScanSteps = 25;

/// Evaluates schmidt(compute_jsa(...)) over a log-spaced pump-FWHM ladder.
/// Ladder points run in parallel; the curve is ordered by FWHM regardless
/// of completion order.
PurityScanResult purity_scan(const CrystalConfig& c, const PumpConfig& pump,
                             double fwhm_lo_nm, double fwhm_hi_nm, int steps,
                             const SpectralGrid& g);

}  // namespace sagnacsim
