#pragma once

#include "sagnacsim/counting.hpp"
#include "sagnacsim/polarization.hpp"

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace sagnacsim {

/// Product projector |k1>|k2> built from the single-qubit analyzer states
/// H, V, D=(H+V)/sqrt2, A=(H-V)/sqrt2, R=(H+iV)/sqrt2, L=(H-iV)/sqrt2.
struct Projector {
  std::string label;  // e.g. "HH", "DR"
  Eigen::Vector2cd ket1;
  Eigen::Vector2cd ket2;

  Eigen::Vector4cd ket() const;
};

Eigen::Vector2cd analyzer_ket(char basis);

/// The 16 product projectors {H,V,D,R} x {H,V,D,R}; the first four are
/// HH, HV, VH, VV and the set is informationally complete.
std::array<Projector, 16> tomo_settings();

/// Linear inversion of normalized counts through the projector dual basis.
/// Hermitian with unit trace, but not necessarily positive. Records are
/// matched to projectors by setting id; all 16 labels must be present.
Eigen::Matrix4cd linear_reconstruct(const std::vector<CountRecord>& records);

struct TomographyResult {
  TwoQubitState rho;
  double fidelity_to_target = 0.0;
  double concurrence = 0.0;
  double log_likelihood = 0.0;
  int iterations = 0;
  bool converged = false;
};

inline constexpr int kMleMaxIterations = 10000;
inline constexpr double kMleRelTolerance = 1e-10;

/// Maximum-likelihood reconstruction: rho(T) = T^dag T / Tr(T^dag T) with T
/// lower triangular (16 real parameters), Poisson log-likelihood, quasi-Newton
/// ascent initialized from linear inversion projected onto the PSD cone.
/// Physical by construction. Non-convergence is reported via the flag, with
/// the best iterate returned.
TomographyResult mle_reconstruct(const std::vector<CountRecord>& records,
                                 const Eigen::Vector4cd& target,
                                 const std::optional<Eigen::Matrix4cd>& init = std::nullopt);

/// F = <psi| rho |psi>
double fidelity(const TwoQubitState& rho, const Eigen::Vector4cd& target);

/// Wootters concurrence from the spin-flipped spectrum.
double concurrence(const TwoQubitState& rho);

struct BootstrapErrors {
  double sigma_fidelity = 0.0;
  double sigma_concurrence = 0.0;
  int resamples = 0;
  int failures = 0;
};

/// Poisson-resamples the counts, reruns the MLE per resample and reports the
/// sample standard deviations. Seeded-deterministic; throws if more than 10%
/// of the resamples fail to converge.
BootstrapErrors bootstrap_errors(const std::vector<CountRecord>& records,
                                 const Eigen::Vector4cd& target, int n_resamples,
                                 std::uint64_t seed);

/// Same aggregation with a caller-supplied resampler (called with the copy
/// to mutate and the resample index). An identity resampler yields exactly
/// zero sigma, which pins the aggregation path in tests.
BootstrapErrors bootstrap_errors(const std::vector<CountRecord>& records,
                                 const Eigen::Vector4cd& target, int n_resamples,
                                 std::uint64_t seed,
                                 const std::function<void(std::vector<CountRecord>&,
                                                          std::uint64_t)>& resample);

/// Simulated counts for the 16 tomography settings (projector probabilities
/// through the same rate model and substream scheme as simulate_counts).
std::vector<CountRecord> simulate_tomo_counts(const TwoQubitState& rho,
                                              const RateModel& m,
                                              double accumulation_s,
                                              std::uint64_t seed);

}  // namespace sagnacsim
