#include "sagnacsim/spectral.hpp"

#include "sagnacsim/units.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>

namespace sagnacsim {

void PumpConfig::validate() const {
  if (!(center_nm > 0.0)) throw std::invalid_argument("pump center wavelength must be positive");
  if (!(fwhm_nm > 0.0)) throw std::invalid_argument("pump spectral FWHM must be positive");
}

double fwhm_nm_to_ps(double center_nm, double fwhm_nm) {
  if (!(fwhm_nm > 0.0)) throw std::invalid_argument("spectral FWHM must be positive");
  const double dt_s = kGaussianTbp * (center_nm * 1e-9) * (center_nm * 1e-9) /
                      (kSpeedOfLightMps * fwhm_nm * 1e-9);
  return dt_s * 1e12;
}

double pump_envelope(const PumpConfig& p, double signal_nm, double idler_nm) {
  p.validate();
  const double w_half = omega_from_nm(p.center_nm) / 2.0;  // degenerate center
  const double nu = (omega_from_nm(signal_nm) - w_half) + (omega_from_nm(idler_nm) - w_half);
  // intensity FWHM in angular frequency, first order in fwhm/center
  const double dw_fwhm = kTwoPi * kSpeedOfLightUmps * (p.fwhm_nm * 1e-3) /
                         ((p.center_nm * 1e-3) * (p.center_nm * 1e-3));
  const double sigma = dw_fwhm / (2.0 * std::sqrt(std::log(2.0)));
  return std::exp(-nu * nu / (2.0 * sigma * sigma));
}

namespace {

double sinc(double x) {
  if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

}  // namespace

std::complex<double> phasematching_amplitude(const CrystalConfig& c,
                                             double signal_nm, double idler_nm) {
  const double dk = qpm_mismatch(c, signal_nm * 1e-3, idler_nm * 1e-3);  // rad/um
  const double x = dk * (c.length_mm * 1e3) / 2.0;
  return sinc(x) * std::exp(std::complex<double>(0.0, x));
}

SpectralGrid SpectralGrid::centered(double center_nm, double half_span_nm, int points) {
  SpectralGrid g;
  g.signal_lo_nm = g.idler_lo_nm = center_nm - half_span_nm;
  g.signal_hi_nm = g.idler_hi_nm = center_nm + half_span_nm;
  g.signal_points = g.idler_points = points;
  g.validate();
  return g;
}

void SpectralGrid::validate() const {
  if (signal_points < 2 || idler_points < 2) {
    throw std::invalid_argument("spectral grid needs at least 2 points per axis");
  }
  if (!(signal_lo_nm > 0.0) || !(idler_lo_nm > 0.0) ||
      !(signal_hi_nm > signal_lo_nm) || !(idler_hi_nm > idler_lo_nm)) {
    throw std::invalid_argument("spectral grid ranges must be positive and ordered");
  }
}

double SpectralGrid::signal_nm(int i) const {
  return signal_lo_nm + signal_step_nm() * i;
}

double SpectralGrid::idler_nm(int j) const {
  return idler_lo_nm + idler_step_nm() * j;
}

double SpectralGrid::signal_step_nm() const {
  return (signal_hi_nm - signal_lo_nm) / (signal_points - 1);
}

double SpectralGrid::idler_step_nm() const {
  return (idler_hi_nm - idler_lo_nm) / (idler_points - 1);
}

double JointSpectrum::total_intensity() const {
  return amplitude.squaredNorm() * grid.cell_area_nm2();
}

JointSpectrum compute_jsa(const CrystalConfig& c, const PumpConfig& p,
                          const SpectralGrid& g) {
  c.validate();
  p.validate();
  g.validate();
  JointSpectrum out;
  out.grid = g;
  out.amplitude.resize(g.signal_points, g.idler_points);
  for (int i = 0; i < g.signal_points; ++i) {
    const double ls = g.signal_nm(i);
    for (int j = 0; j < g.idler_points; ++j) {
      const double li = g.idler_nm(j);
      out.amplitude(i, j) = pump_envelope(p, ls, li) * phasematching_amplitude(c, ls, li);
    }
  }
  const double norm = std::sqrt(out.total_intensity());
  if (!(norm > 0.0)) {
    throw std::runtime_error("joint spectrum vanishes on the whole grid; check pump/grid consistency");
  }
  out.amplitude /= norm;
  out.normalized = true;
  return out;
}

SchmidtResult schmidt(const JointSpectrum& jsa) {
  if (jsa.amplitude.size() == 0 || jsa.amplitude.squaredNorm() == 0.0) {
    throw std::invalid_argument("cannot Schmidt-decompose an all-zero spectrum");
  }
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(jsa.amplitude);
  Eigen::VectorXd lambda = svd.singularValues().array().square();
  lambda /= lambda.sum();
  SchmidtResult res;
  res.coefficients = lambda;
  res.purity = lambda.squaredNorm();
  res.schmidt_number = 1.0 / res.purity;
  return res;
}

namespace {

double fwhm_by_interpolation(const std::vector<double>& x, const std::vector<double>& y) {
  const double peak = *std::max_element(y.begin(), y.end());
  const double half = peak / 2.0;
  const int n = static_cast<int>(y.size());
  int first = -1, last = -1;
  for (int i = 0; i < n; ++i) {
    if (y[i] >= half) {
      if (first < 0) first = i;
      last = i;
    }
  }
  double left = x[first];
  if (first > 0) {
    const double t = (half - y[first - 1]) / (y[first] - y[first - 1]);
    left = x[first - 1] + t * (x[first] - x[first - 1]);
  }
  double right = x[last];
  if (last < n - 1) {
    const double t = (half - y[last]) / (y[last + 1] - y[last]);
    right = x[last] + t * (x[last + 1] - x[last]);
  }
  return right - left;
}

MarginalSpectrum make_marginal(const Eigen::VectorXd& intensity,
                               const SpectralGrid& g, bool is_signal) {
  MarginalSpectrum m;
  const int n = static_cast<int>(intensity.size());
  m.wavelength_nm.resize(n);
  m.intensity.resize(n);
  const double total = intensity.sum();
  for (int i = 0; i < n; ++i) {
    m.wavelength_nm[i] = is_signal ? g.signal_nm(i) : g.idler_nm(i);
    m.intensity[i] = intensity(i) / total;
  }
  m.fwhm_nm = fwhm_by_interpolation(m.wavelength_nm, m.intensity);
  return m;
}

}  // namespace

std::pair<MarginalSpectrum, MarginalSpectrum> marginals(const JointSpectrum& jsa) {
  if (jsa.grid.signal_points < 2 || jsa.grid.idler_points < 2) {
    throw std::invalid_argument("marginals need at least a 2x2 grid");
  }
  const Eigen::MatrixXd intensity = jsa.amplitude.cwiseAbs2();
  const Eigen::VectorXd sig = intensity.rowwise().sum();
  const Eigen::VectorXd idl = intensity.colwise().sum();
  return {make_marginal(sig, jsa.grid, true), make_marginal(idl, jsa.grid, false)};
}

PurityScanResult purity_scan(const CrystalConfig& c, const PumpConfig& pump,
                             double fwhm_lo_nm, double fwhm_hi_nm, int steps,
                             const SpectralGrid& g) {
  if (!(fwhm_lo_nm > 0.0) || !(fwhm_hi_nm > fwhm_lo_nm)) {
    throw std::invalid_argument("FWHM scan range must be positive and ordered");
  }
  if (steps < 3) throw std::invalid_argument("FWHM scan needs at least 3 steps");

  std::vector<double> ladder(steps);
  const double ratio = std::log(fwhm_hi_nm / fwhm_lo_nm);
  for (int k = 0; k < steps; ++k) {
    ladder[k] = fwhm_lo_nm * std::exp(ratio * k / (steps - 1));
  }

  std::vector<std::future<double>> jobs;
  jobs.reserve(steps);
  for (int k = 0; k < steps; ++k) {
    jobs.push_back(std::async(std::launch::async, [&, k] {
      PumpConfig p = pump;
      p.fwhm_nm = ladder[k];
      return schmidt(compute_jsa(c, p, g)).purity;
    }));
  }

  PurityScanResult res;
  res.curve.resize(steps);
  for (int k = 0; k < steps; ++k) {
    res.curve[k] = {ladder[k], jobs[k].get()};
    if (res.curve[k].purity > res.best_purity) {
      res.best_purity = res.curve[k].purity;
      res.best_fwhm_nm = res.curve[k].fwhm_nm;
    }
  }
  return res;
}

}  // namespace sagnacsim
