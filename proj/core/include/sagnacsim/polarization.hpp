#pragma once

#include <Eigen/Dense>

#include <vector>

namespace sagnacsim {

/// Two-photon polarization density matrix in the {HH, HV, VH, VV} basis.
/// Construction validates hermiticity (1e-12), unit trace (1e-12) and
/// positive semidefiniteness (min eigenvalue >= -1e-10).
class TwoQubitState {
 public:
  explicit TwoQubitState(const Eigen::Matrix4cd& rho);

  static TwoQubitState pure(const Eigen::Vector4cd& ket);

  const Eigen::Matrix4cd& matrix() const { return rho_; }
  double purity() const { return (rho_ * rho_).trace().real(); }
  bool is_pure() const { return purity() > 1.0 - 1e-9; }

 private:
  Eigen::Matrix4cd rho_;
};

Eigen::Vector4cd bell_psi_minus();
Eigen::Vector4cd bell_psi_plus();

/// Sagnac-loop output parameters: |HV> + e^{i phase} ratio |VH>, normalized.
struct SagnacParams {
  double phase_rad = 0.0;   // reduced to [0, 2pi)
  double pump_ratio = 1.0;  // >= 0; 0 collapses to the product state |HV>

  void validate() const;
};

/// Noise knobs of the source model.
struct NoiseParams {
  double white_noise = 0.0;           // depolarizing weight in [0, 1]
  double mean_pairs_per_pulse = 0.0;  // mu >= 0
  double extinction_ratio = 200.0;    // r : 1, r > 1

  void validate() const;
};

TwoQubitState sagnac_state(const SagnacParams& p);

/// (1 - eps) rho + eps I/4
TwoQubitState depolarize(const TwoQubitState& rho, double eps);

/// First-order accidental model: eps = min(1, k * mu).
double multipair_epsilon(double mean_pairs_per_pulse, double k);

/// Polarizer-leak channel: each photon independently has its orthogonal
/// polarization transmitted with probability 1/(1+r). Local CPTP map
/// applied to both qubits.
TwoQubitState pbs_leak(const TwoQubitState& rho, double extinction_ratio);

/// <theta1, theta2| rho |theta1, theta2> with |theta> = cos t |H> + sin t |V>.
double coincidence_prob(const TwoQubitState& rho, double theta1_deg, double theta2_deg);

/// Probability of projecting onto an arbitrary normalized two-photon ket.
double projection_prob(const TwoQubitState& rho, const Eigen::Vector4cd& ket);

std::vector<double> fringe(const TwoQubitState& rho, double theta1_deg,
                           const std::vector<double>& theta2_sweep_deg);

/// (max - min) / (max + min) of a nonnegative curve.
double visibility(const std::vector<double>& curve);

/// Correlation E(t1,t2) = p(t1,t2) + p(t1+90,t2+90) - p(t1,t2+90) - p(t1+90,t2).
double correlation(const TwoQubitState& rho, double theta1_deg, double theta2_deg);

/// |E(a,b) - E(a,b') + E(a',b) + E(a',b')|
double chsh_s(const TwoQubitState& rho, double a_deg, double ap_deg,
              double b_deg, double bp_deg);

inline constexpr double kChshA = 0.0;
inline constexpr double kChshAp = 45.0;
inline constexpr double kChshB = 22.5;
inline constexpr double kChshBp = 67.5;

}  // namespace sagnacsim
