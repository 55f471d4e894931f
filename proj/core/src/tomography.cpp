#include "sagnacsim/tomography.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>

namespace sagnacsim {

namespace {

constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

}  // namespace

Eigen::Vector2cd analyzer_ket(char basis) {
  using c = std::complex<double>;
  switch (basis) {
    case 'H': return {c(1, 0), c(0, 0)};
    case 'V': return {c(0, 0), c(1, 0)};
    case 'D': return {c(kInvSqrt2, 0), c(kInvSqrt2, 0)};
    case 'A': return {c(kInvSqrt2, 0), c(-kInvSqrt2, 0)};
    case 'R': return {c(kInvSqrt2, 0), c(0, kInvSqrt2)};
    case 'L': return {c(kInvSqrt2, 0), c(0, -kInvSqrt2)};
    default: throw std::invalid_argument(std::string("unknown analyzer basis '") + basis + "'");
  }
}

Eigen::Vector4cd Projector::ket() const {
  Eigen::Vector4cd k;
  k << ket1(0) * ket2(0), ket1(0) * ket2(1), ket1(1) * ket2(0), ket1(1) * ket2(1);
  return k;
}

std::array<Projector, 16> tomo_settings() {
  // HH, HV, VH, VV first (complete H/V basis used for flux normalization)
  static const char* labels[16] = {"HH", "HV", "VH", "VV", "HD", "HR", "VD", "VR",
                                   "DH", "DV", "RH", "RV", "DD", "DR", "RD", "RR"};
  std::array<Projector, 16> out;
  for (int i = 0; i < 16; ++i) {
    out[i].label = labels[i];
    out[i].ket1 = analyzer_ket(labels[i][0]);
    out[i].ket2 = analyzer_ket(labels[i][1]);
  }
  return out;
}

namespace {

/// records matched to tomo_settings() by id; returns counts in canonical order.
std::array<double, 16> counts_by_label(const std::vector<CountRecord>& records) {
  if (records.size() != 16) {
    throw std::invalid_argument("tomography needs exactly 16 records");
  }
  const auto settings = tomo_settings();
  std::map<std::string, double> by_id;
  for (const auto& r : records) {
    if (!by_id.emplace(r.setting.id, static_cast<double>(r.count)).second) {
      throw std::invalid_argument("duplicate tomography setting id: " + r.setting.id);
    }
  }
  std::array<double, 16> counts{};
  for (int i = 0; i < 16; ++i) {
    const auto it = by_id.find(settings[i].label);
    if (it == by_id.end()) {
      throw std::invalid_argument("missing tomography setting: " + settings[i].label);
    }
    counts[i] = it->second;
  }
  return counts;
}

double flux_normalization(const std::array<double, 16>& counts) {
  // HH + HV + VH + VV spans a complete basis, so their sum estimates the flux
  const double n = counts[0] + counts[1] + counts[2] + counts[3];
  if (!(n > 0.0)) throw std::invalid_argument("tomography records have zero total counts");
  return n;
}

}  // namespace

Eigen::Matrix4cd linear_reconstruct(const std::vector<CountRecord>& records) {
  const auto counts = counts_by_label(records);
  const double flux = flux_normalization(counts);
  const auto settings = tomo_settings();

  // p_nu = Tr(rho P_nu) = sum_{mn} rho_mn (P_nu)_nm, row-major vectorization
  Eigen::MatrixXcd a(16, 16);
  Eigen::VectorXcd p(16);
  for (int nu = 0; nu < 16; ++nu) {
    const Eigen::Vector4cd k = settings[nu].ket();
    const Eigen::Matrix4cd proj = k * k.adjoint();
    for (int m = 0; m < 4; ++m)
      for (int n = 0; n < 4; ++n) a(nu, 4 * m + n) = proj(n, m);
    p(nu) = counts[nu] / flux;
  }
  const Eigen::VectorXcd x = a.fullPivLu().solve(p);
  Eigen::Matrix4cd rho;
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n) rho(m, n) = x(4 * m + n);
  rho = 0.5 * (rho + rho.adjoint()).eval();
  rho /= rho.trace().real();
  return rho;
}

namespace {

// ---- Cholesky parameterization -------------------------------------------
// x in R^16 -> lower-triangular T: 4 real diagonal entries, then the strict
// lower triangle row by row as (re, im) pairs.

Eigen::Matrix4cd t_from_params(const Eigen::VectorXd& x) {
  using c = std::complex<double>;
  Eigen::Matrix4cd t = Eigen::Matrix4cd::Zero();
  t(0, 0) = x(0); t(1, 1) = x(1); t(2, 2) = x(2); t(3, 3) = x(3);
  int k = 4;
  for (int i = 1; i < 4; ++i) {
    for (int j = 0; j < i; ++j) {
      t(i, j) = c(x(k), x(k + 1));
      k += 2;
    }
  }
  return t;
}

Eigen::VectorXd params_from_t(const Eigen::Matrix4cd& t) {
  Eigen::VectorXd x(16);
  x(0) = t(0, 0).real(); x(1) = t(1, 1).real();
  x(2) = t(2, 2).real(); x(3) = t(3, 3).real();
  int k = 4;
  for (int i = 1; i < 4; ++i) {
    for (int j = 0; j < i; ++j) {
      x(k) = t(i, j).real();
      x(k + 1) = t(i, j).imag();
      k += 2;
    }
  }
  return x;
}

/// lower-triangular T with T^dag T = rho (rho positive definite): reversal
/// trick around the standard upper Cholesky factor.
Eigen::Matrix4cd lower_factor(const Eigen::Matrix4cd& rho) {
  Eigen::Matrix4cd rev = Eigen::Matrix4cd::Zero();
  for (int i = 0; i < 4; ++i) rev(i, 3 - i) = 1.0;
  const Eigen::Matrix4cd flipped = rev * rho * rev;
  const Eigen::Matrix4cd l = Eigen::LLT<Eigen::Matrix4cd>(flipped).matrixL();
  return (rev * l.adjoint() * rev).eval();  // lower, (.)^dag (.) = rho
}

struct Likelihood {
  std::array<Eigen::Vector4cd, 16> kets;
  std::array<double, 16> counts;
  double flux = 0.0;

  // negative Poisson log-likelihood and its gradient in the 16 parameters
  double operator()(const Eigen::VectorXd& x, Eigen::VectorXd* grad) const {
    const Eigen::Matrix4cd t = t_from_params(x);
    const double tau = t.squaredNorm();
    if (!(tau > 0.0)) {
      if (grad) grad->setZero(16);
      return 1e300;
    }
    double nll = 0.0;
    Eigen::Matrix4cd g = Eigen::Matrix4cd::Zero();  // d(nll)/dT*
    for (int nu = 0; nu < 16; ++nu) {
      const Eigen::Vector4cd tk = t * kets[nu];
      const double p = std::max(tk.squaredNorm() / tau, 1e-300);
      const double expected = flux * p;
      nll -= counts[nu] * std::log(expected) - expected;
      if (grad) {
        const double w = counts[nu] / p - flux;
        g -= (w / tau) * (tk * kets[nu].adjoint() - p * t);
      }
    }
    if (grad) {
      grad->resize(16);
      (*grad)(0) = 2.0 * g(0, 0).real(); (*grad)(1) = 2.0 * g(1, 1).real();
      (*grad)(2) = 2.0 * g(2, 2).real(); (*grad)(3) = 2.0 * g(3, 3).real();
      int k = 4;
      for (int i = 1; i < 4; ++i) {
        for (int j = 0; j < i; ++j) {
          (*grad)(k) = 2.0 * g(i, j).real();
          (*grad)(k + 1) = 2.0 * g(i, j).imag();
          k += 2;
        }
      }
    }
    return nll;
  }
};

struct LbfgsOutcome {
  Eigen::VectorXd x;
  double f = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// limited-memory BFGS with backtracking Armijo line search
LbfgsOutcome lbfgs_minimize(const Likelihood& fn, Eigen::VectorXd x0,
                            int max_iter, double rel_tol) {
  constexpr int kHistory = 8;
  constexpr double kArmijo = 1e-4;

  Eigen::VectorXd x = std::move(x0), grad(16);
  double f = fn(x, &grad);
  std::vector<Eigen::VectorXd> s_hist, y_hist;
  std::vector<double> rho_hist;

  LbfgsOutcome out;
  for (int iter = 0; iter < max_iter; ++iter) {
    // two-loop recursion
    Eigen::VectorXd q = grad;
    const int h = static_cast<int>(s_hist.size());
    std::vector<double> alpha(h);
    for (int i = h - 1; i >= 0; --i) {
      alpha[i] = rho_hist[i] * s_hist[i].dot(q);
      q -= alpha[i] * y_hist[i];
    }
    if (h > 0) {
      const double gamma = s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
      q *= gamma;
    }
    for (int i = 0; i < h; ++i) {
      const double beta = rho_hist[i] * y_hist[i].dot(q);
      q += (alpha[i] - beta) * s_hist[i];
    }
    Eigen::VectorXd dir = -q;
    double slope = grad.dot(dir);
    if (!(slope < 0.0)) {  // stale curvature; steepest descent restart
      s_hist.clear(); y_hist.clear(); rho_hist.clear();
      dir = -grad;
      slope = -grad.squaredNorm();
      if (slope == 0.0) {
        out.converged = true;
        break;
      }
    }

    double step = 1.0;
    double f_new = f;
    Eigen::VectorXd x_new = x;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      x_new = x + step * dir;
      f_new = fn(x_new, nullptr);
      if (std::isfinite(f_new) && f_new <= f + kArmijo * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    out.iterations = iter + 1;
    if (!accepted) break;  // line search stalled at numerical floor

    Eigen::VectorXd grad_new(16);
    fn(x_new, &grad_new);
    const Eigen::VectorXd s = x_new - x;
    const Eigen::VectorXd y = grad_new - grad;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      s_hist.push_back(s);
      y_hist.push_back(y);
      rho_hist.push_back(1.0 / sy);
      if (static_cast<int>(s_hist.size()) > kHistory) {
        s_hist.erase(s_hist.begin());
        y_hist.erase(y_hist.begin());
        rho_hist.erase(rho_hist.begin());
      }
    }

    const double improvement = f - f_new;
    x = std::move(x_new);
    grad = std::move(grad_new);
    const double f_old = f;
    f = f_new;
    if (improvement <= rel_tol * (std::abs(f_old) + 1e-30)) {
      out.converged = true;
      break;
    }
  }
  out.x = std::move(x);
  out.f = f;
  return out;
}

Eigen::Matrix4cd psd_projection(const Eigen::Matrix4cd& herm) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(herm);
  Eigen::Vector4d ev = es.eigenvalues().cwiseMax(1e-6);
  Eigen::Matrix4cd rho = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
  rho /= rho.trace().real();
  return rho;
}

}  // namespace

TomographyResult mle_reconstruct(const std::vector<CountRecord>& records,
                                 const Eigen::Vector4cd& target,
                                 const std::optional<Eigen::Matrix4cd>& init) {
  Likelihood fn;
  fn.counts = counts_by_label(records);
  fn.flux = flux_normalization(fn.counts);
  const auto settings = tomo_settings();
  for (int i = 0; i < 16; ++i) fn.kets[i] = settings[i].ket();

  Eigen::Matrix4cd rho0 = init ? psd_projection(0.5 * (*init + init->adjoint()))
                               : psd_projection(linear_reconstruct(records));
  const Eigen::VectorXd x0 = params_from_t(lower_factor(rho0));

  const auto opt = lbfgs_minimize(fn, x0, kMleMaxIterations, kMleRelTolerance);

  const Eigen::Matrix4cd t = t_from_params(opt.x);
  Eigen::Matrix4cd rho = t.adjoint() * t;
  rho = 0.5 * (rho + rho.adjoint()).eval();
  rho /= rho.trace().real();

  TomographyResult res{TwoQubitState(rho), 0.0, 0.0, -opt.f, opt.iterations, opt.converged};
  res.fidelity_to_target = fidelity(res.rho, target);
  res.concurrence = concurrence(res.rho);
  return res;
}

double fidelity(const TwoQubitState& rho, const Eigen::Vector4cd& target) {
  const Eigen::Vector4cd k = target.normalized();
  return std::clamp((k.adjoint() * rho.matrix() * k)(0).real(), 0.0, 1.0);
}

double concurrence(const TwoQubitState& rho) {
  Eigen::Matrix4d flip = Eigen::Matrix4d::Zero();  // sigma_y x sigma_y
  flip(0, 3) = -1.0; flip(1, 2) = 1.0; flip(2, 1) = 1.0; flip(3, 0) = -1.0;
  const Eigen::Matrix4cd m = rho.matrix() * flip * rho.matrix().conjugate() * flip;
  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(m, false);
  Eigen::Vector4d lambda = es.eigenvalues().real().cwiseMax(0.0).cwiseSqrt();
  std::sort(lambda.data(), lambda.data() + 4, std::greater<double>());
  return std::max(0.0, lambda(0) - lambda(1) - lambda(2) - lambda(3));
}

BootstrapErrors bootstrap_errors(const std::vector<CountRecord>& records,
                                 const Eigen::Vector4cd& target, int n_resamples,
                                 std::uint64_t seed) {
  return bootstrap_errors(records, target, n_resamples, seed,
                          [](std::vector<CountRecord>& recs, std::uint64_t sub) {
                            Rng rng(sub);
                            for (auto& rec : recs) {
                              rec.count = rng.poisson(static_cast<double>(rec.count));
                            }
                          });
}

BootstrapErrors bootstrap_errors(const std::vector<CountRecord>& records,
                                 const Eigen::Vector4cd& target, int n_resamples,
                                 std::uint64_t seed,
                                 const std::function<void(std::vector<CountRecord>&,
                                                          std::uint64_t)>& resample) {
  if (n_resamples < 2) {
    throw std::invalid_argument("bootstrap needs at least 2 resamples");
  }
  std::vector<double> fids, concs;
  int failures = 0;
  for (int r = 0; r < n_resamples; ++r) {
    std::vector<CountRecord> resampled = records;
    resample(resampled, substream_seed(seed, static_cast<std::uint64_t>(r)));
    try {
      const auto res = mle_reconstruct(resampled, target);
      if (!res.converged) {
        ++failures;
        continue;
      }
      fids.push_back(res.fidelity_to_target);
      concs.push_back(res.concurrence);
    } catch (const std::exception&) {
      ++failures;
    }
  }
  if (failures * 10 > n_resamples) {
    throw std::runtime_error("bootstrap aborted: more than 10% of resamples failed (" +
                             std::to_string(failures) + "/" + std::to_string(n_resamples) + ")");
  }
  auto sample_std = [](const std::vector<double>& v) {
    const double n = static_cast<double>(v.size());
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= n;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / (n - 1.0));
  };
  BootstrapErrors out;
  out.resamples = n_resamples;
  out.failures = failures;
  out.sigma_fidelity = sample_std(fids);
  out.sigma_concurrence = sample_std(concs);
  return out;
}

std::vector<CountRecord> simulate_tomo_counts(const TwoQubitState& rho,
                                              const RateModel& m,
                                              double accumulation_s,
                                              std::uint64_t seed) {
  if (!(accumulation_s > 0.0)) {
    throw std::invalid_argument("accumulation time must be positive");
  }
  m.validate();
  const auto settings = tomo_settings();
  std::vector<CountRecord> records;
  records.reserve(16);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t k = 0; k < settings.size(); ++k) {
    Rng rng(substream_seed(seed, k));
    const double rate = expected_rate_from_prob(
        projection_prob(rho, settings[k].ket()), m);
    MeasurementSetting s{settings[k].label, nan, nan};
    // linear analyzer settings still have polarizer angles
    auto angle_of = [](char b) {
      switch (b) {
        case 'H': return 0.0;
        case 'V': return 90.0;
        case 'D': return 45.0;
        case 'A': return 135.0;
        default: return std::numeric_limits<double>::quiet_NaN();
      }
    };
    s.theta1_deg = angle_of(settings[k].label[0]);
    s.theta2_deg = angle_of(settings[k].label[1]);
    records.push_back(draw_count(s, rate, accumulation_s, rng));
  }
  return records;
}

}  // namespace sagnacsim
