#include "sagnacsim/polarization.hpp"

#include "sagnacsim/units.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sagnacsim {

namespace {

constexpr double kHermTol = 1e-12;
constexpr double kTraceTol = 1e-12;
constexpr double kPsdTol = -1e-10;

Eigen::Vector2cd polarizer_ket(double theta_deg) {
  const double t = deg_to_rad(theta_deg);
  return {std::cos(t), std::sin(t)};
}

Eigen::Matrix4cd kron2(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  Eigen::Matrix4cd out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

}  // namespace

TwoQubitState::TwoQubitState(const Eigen::Matrix4cd& rho) : rho_(rho) {
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > kHermTol) {
    throw std::invalid_argument("density matrix is not Hermitian");
  }
  if (std::abs(rho.trace().real() - 1.0) > kTraceTol || std::abs(rho.trace().imag()) > kTraceTol) {
    throw std::invalid_argument("density matrix trace is not 1");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < kPsdTol) {
    throw std::invalid_argument("density matrix is not positive semidefinite");
  }
}

TwoQubitState TwoQubitState::pure(const Eigen::Vector4cd& ket) {
  const double n = ket.norm();
  if (!(n > 0.0)) throw std::invalid_argument("cannot normalize the zero ket");
  const Eigen::Vector4cd k = ket / n;
  return TwoQubitState(k * k.adjoint());
}

Eigen::Vector4cd bell_psi_minus() {
  Eigen::Vector4cd k;
  k << 0.0, 1.0 / std::numbers::sqrt2, -1.0 / std::numbers::sqrt2, 0.0;
  return k;
}

Eigen::Vector4cd bell_psi_plus() {
  Eigen::Vector4cd k;
  k << 0.0, 1.0 / std::numbers::sqrt2, 1.0 / std::numbers::sqrt2, 0.0;
  return k;
}

void SagnacParams::validate() const {
  if (!std::isfinite(pump_ratio) || pump_ratio < 0.0) {
    throw std::invalid_argument("pump ratio must be finite and nonnegative");
  }
  if (!std::isfinite(phase_rad)) {
    throw std::invalid_argument("relative phase must be finite");
  }
}

void NoiseParams::validate() const {
  if (!(white_noise >= 0.0 && white_noise <= 1.0)) {
    throw std::invalid_argument("white-noise weight must lie in [0, 1]");
  }
  if (!(mean_pairs_per_pulse >= 0.0)) {
    throw std::invalid_argument("mean pair number must be nonnegative");
  }
  if (!(extinction_ratio > 1.0)) {
    throw std::invalid_argument("extinction ratio must exceed 1");
  }
}

TwoQubitState sagnac_state(const SagnacParams& p) {
  p.validate();
  const double phi = p.phase_rad - kTwoPi * std::floor(p.phase_rad / kTwoPi);
  Eigen::Vector4cd ket = Eigen::Vector4cd::Zero();
  ket(1) = 1.0;  // |HV>
  ket(2) = p.pump_ratio * std::exp(std::complex<double>(0.0, phi));
  return TwoQubitState::pure(ket);
}

TwoQubitState depolarize(const TwoQubitState& rho, double eps) {
  if (!(eps >= 0.0 && eps <= 1.0)) {
    throw std::invalid_argument("depolarizing weight must lie in [0, 1]");
  }
  return TwoQubitState((1.0 - eps) * rho.matrix() +
                       eps * 0.25 * Eigen::Matrix4cd::Identity());
}

double multipair_epsilon(double mean_pairs_per_pulse, double k) {
  if (!(mean_pairs_per_pulse >= 0.0)) {
    throw std::invalid_argument("mean pair number must be nonnegative");
  }
  return std::min(1.0, k * mean_pairs_per_pulse);
}

TwoQubitState pbs_leak(const TwoQubitState& rho, double extinction_ratio) {
  if (!(extinction_ratio > 1.0)) {
    throw std::invalid_argument("extinction ratio must exceed 1");
  }
  const double q = 1.0 / (1.0 + extinction_ratio);
  Eigen::Matrix2cd x = Eigen::Matrix2cd::Zero();
  x(0, 1) = x(1, 0) = 1.0;
  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  const Eigen::Matrix4cd x1 = kron2(x, id);
  const Eigen::Matrix4cd x2 = kron2(id, x);
  Eigen::Matrix4cd m = rho.matrix();
  m = (1.0 - q) * m + q * (x1 * m * x1).eval();
  m = (1.0 - q) * m + q * (x2 * m * x2).eval();
  return TwoQubitState(m);
}

double projection_prob(const TwoQubitState& rho, const Eigen::Vector4cd& ket) {
  const double p = (ket.adjoint() * rho.matrix() * ket)(0).real();
  return std::clamp(p, 0.0, 1.0);
}

double coincidence_prob(const TwoQubitState& rho, double theta1_deg, double theta2_deg) {
  const Eigen::Vector2cd a = polarizer_ket(theta1_deg);
  const Eigen::Vector2cd b = polarizer_ket(theta2_deg);
  Eigen::Vector4cd ket;
  ket << a(0) * b(0), a(0) * b(1), a(1) * b(0), a(1) * b(1);
  return projection_prob(rho, ket);
}

std::vector<double> fringe(const TwoQubitState& rho, double theta1_deg,
                           const std::vector<double>& theta2_sweep_deg) {
  if (theta2_sweep_deg.empty()) {
    throw std::invalid_argument("fringe sweep must not be empty");
  }
  std::vector<double> out;
  out.reserve(theta2_sweep_deg.size());
  for (double t2 : theta2_sweep_deg) out.push_back(coincidence_prob(rho, theta1_deg, t2));
  return out;
}

double visibility(const std::vector<double>& curve) {
  if (curve.size() < 2) throw std::invalid_argument("visibility needs at least 2 points");
  const auto [mn, mx] = std::minmax_element(curve.begin(), curve.end());
  if (*mx <= 0.0) throw std::invalid_argument("visibility of an all-zero curve is undefined");
  return (*mx - *mn) / (*mx + *mn);
}

double correlation(const TwoQubitState& rho, double theta1_deg, double theta2_deg) {
  const double p_pp = coincidence_prob(rho, theta1_deg, theta2_deg);
  const double p_oo = coincidence_prob(rho, theta1_deg + 90.0, theta2_deg + 90.0);
  const double p_po = coincidence_prob(rho, theta1_deg, theta2_deg + 90.0);
  const double p_op = coincidence_prob(rho, theta1_deg + 90.0, theta2_deg);
  return p_pp + p_oo - p_po - p_op;
}

double chsh_s(const TwoQubitState& rho, double a_deg, double ap_deg,
              double b_deg, double bp_deg) {
  return std::abs(correlation(rho, a_deg, b_deg) - correlation(rho, a_deg, bp_deg) +
                  correlation(rho, ap_deg, b_deg) + correlation(rho, ap_deg, bp_deg));
}

}  // namespace sagnacsim
