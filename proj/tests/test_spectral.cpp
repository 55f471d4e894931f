#include "sagnacsim/spectral.hpp"

#include "sagnacsim/units.hpp"
#include "helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <cstring>

using namespace sagnacsim;
using test::band800;
using test::telecom;

namespace {
// golden values from the independent numpy oracle
constexpr double kTelecomPurity = 0.8244;       // 0.4 nm pump, 1584 +- 6 nm, 256^2
constexpr double kTelecomMarginalFwhm = 1.13;   // nm
constexpr double kBand800Purity = 0.1541;       // 0.014 nm pump, 800 +- 1.5 nm, 256^2
constexpr double kPulsePin400 = 16.8116;        // ps
constexpr double kPulsePin775 = 2.2088;         // ps
}  // namespace

TEST_CASE("time-bandwidth pins") {
  CHECK(fwhm_nm_to_ps(400.0, 0.014) == doctest::Approx(kPulsePin400).epsilon(1e-4));
  CHECK(fwhm_nm_to_ps(775.0, 0.4) == doctest::Approx(kPulsePin775).epsilon(1e-4));
  CHECK(std::abs(fwhm_nm_to_ps(400.0, 0.014) - 16.8) < 0.1);
  CHECK(std::abs(fwhm_nm_to_ps(775.0, 0.4) - 2.3) < 0.1);
  // inverse proportionality
  CHECK(fwhm_nm_to_ps(775.0, 0.8) == doctest::Approx(fwhm_nm_to_ps(775.0, 0.4) / 2.0));
  CHECK_THROWS_AS(fwhm_nm_to_ps(775.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(fwhm_nm_to_ps(775.0, -0.1), std::invalid_argument);
}

TEST_CASE("pump envelope peaks on the energy ridge and halves at the FWHM point") {
  const PumpConfig p{792.0, 0.4};
  // 1/ls + 1/li = 1/792 with ls = 1570
  const double ls = 1570.0;
  const double li = 1.0 / (1.0 / 792.0 - 1.0 / ls);
  CHECK(pump_envelope(p, ls, li) == doctest::Approx(1.0).epsilon(1e-12));

  // sum-frequency detuning of half the pump angular-frequency FWHM
  const double dw = kTwoPi * kSpeedOfLightUmps * (p.fwhm_nm * 1e-3) /
                    ((p.center_nm * 1e-3) * (p.center_nm * 1e-3));
  const double w_target = omega_from_nm(792.0) + dw / 2.0;
  const double li2 = 1e3 * kTwoPi * kSpeedOfLightUmps / (w_target - omega_from_nm(ls));
  const double amp = pump_envelope(p, ls, li2);
  CHECK(amp * amp == doctest::Approx(0.5).epsilon(1e-9));

  // symmetric under signal/idler exchange
  CHECK(pump_envelope(p, 1580.0, 1587.3) ==
        doctest::Approx(pump_envelope(p, 1587.3, 1580.0)).epsilon(1e-14));
}

TEST_CASE("phasematching amplitude: unit magnitude iff matched, first sinc zero at pi") {
  CrystalConfig c = telecom().crystal;
  c.poling_period_um = poling_period_for(c, 1.584, 1.584);
  const auto phi0 = phasematching_amplitude(c, 1584.0, 1584.0);
  CHECK(std::abs(phi0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::arg(phi0) == doctest::Approx(0.0).epsilon(1e-12));

  // locate the idler where dk L/2 = pi by bisection and check the null
  const double length_um = c.length_mm * 1e3;
  auto x_of = [&](double li_nm) {
    return qpm_mismatch(c, 1.584, li_nm * 1e-3) * length_um / 2.0;
  };
  double lo = 1584.0, hi = 1592.0;
  REQUIRE(x_of(lo) < kPi);
  REQUIRE(x_of(hi) > kPi);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (x_of(mid) < kPi ? lo : hi) = mid;
  }
  CHECK(std::abs(phasematching_amplitude(c, 1584.0, lo)) < 1e-9);

  // off the contour the magnitude drops below 1
  CHECK(std::abs(phasematching_amplitude(c, 1584.0, 1585.0)) < 1.0);
}

TEST_CASE("phase-matched contour is positively correlated for the telecom config") {
  const auto& c = telecom().crystal;
  auto matched_idler = [&](double ls_nm) {
    double lo = 1578.0, hi = 1590.0;
    auto dk = [&](double li_nm) { return qpm_mismatch(c, ls_nm * 1e-3, li_nm * 1e-3); };
    REQUIRE(dk(lo) * dk(hi) < 0.0);
    for (int i = 0; i < 100; ++i) {
      const double mid = 0.5 * (lo + hi);
      (dk(mid) * dk(lo) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };
  double prev = matched_idler(1580.0);
  for (double ls : {1582.0, 1584.0, 1586.0, 1588.0}) {
    const double li = matched_idler(ls);
    CHECK(li > prev);  // +45-degree class ridge
    prev = li;
  }
}

TEST_CASE("spectral grid validation") {
  CHECK_THROWS_AS(SpectralGrid::centered(1584.0, 6.0, 1), std::invalid_argument);
  SpectralGrid g;
  g.signal_lo_nm = -1.0;
  g.signal_hi_nm = 1.0;
  g.signal_points = g.idler_points = 4;
  g.idler_lo_nm = 1.0;
  g.idler_hi_nm = 2.0;
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
  g = SpectralGrid::centered(1584.0, 6.0, 16);
  CHECK(g.signal_nm(0) == doctest::Approx(1578.0));
  CHECK(g.signal_nm(15) == doctest::Approx(1590.0));
}

TEST_CASE("compute_jsa normalization, determinism and telecom purity pin") {
  const auto& p = telecom();
  const auto jsa = compute_jsa(p.crystal, p.pump, p.grid);
  CHECK(jsa.normalized);
  CHECK(jsa.total_intensity() == doctest::Approx(1.0).epsilon(1e-9));

  const auto res = schmidt(jsa);
  CHECK(res.purity == doctest::Approx(kTelecomPurity).epsilon(2e-3));
  CHECK(res.schmidt_number == doctest::Approx(1.0 / res.purity).epsilon(1e-12));
  CHECK(res.coefficients.sum() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(res.coefficients.minCoeff() >= 0.0);
  // descending order
  for (int i = 1; i < res.coefficients.size(); ++i) {
    CHECK(res.coefficients(i) <= res.coefficients(i - 1) + 1e-15);
  }

  // bit-identical recomputation
  const auto jsa2 = compute_jsa(p.crystal, p.pump, p.grid);
  CHECK(std::memcmp(jsa.amplitude.data(), jsa2.amplitude.data(),
                    sizeof(std::complex<double>) * 256 * 256) == 0);
}

TEST_CASE("800-band purity pin") {
  const auto& p = band800();
  const auto res = schmidt(compute_jsa(p.crystal, p.pump, p.grid));
  CHECK(res.purity == doctest::Approx(kBand800Purity).epsilon(2e-3));
  CHECK(std::abs(res.purity - 0.16) < 0.03);
}

TEST_CASE("short-crystal limit reduces the JSA to the pump envelope") {
  CrystalConfig c = telecom().crystal;
  c.length_mm = 1e-3;
  const auto& p = telecom();
  const auto g = SpectralGrid::centered(1584.0, 2.0, 64);
  const auto jsa = compute_jsa(c, p.pump, g);
  // compare |f| against the normalized envelope
  Eigen::MatrixXd env(g.signal_points, g.idler_points);
  for (int i = 0; i < g.signal_points; ++i)
    for (int j = 0; j < g.idler_points; ++j)
      env(i, j) = pump_envelope(p.pump, g.signal_nm(i), g.idler_nm(j));
  env /= std::sqrt(env.squaredNorm() * g.cell_area_nm2());
  CHECK((jsa.amplitude.cwiseAbs() - env).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("schmidt on synthetic spectra") {
  SpectralGrid g = SpectralGrid::centered(1584.0, 2.0, 32);
  JointSpectrum js;
  js.grid = g;

  SUBCASE("separable rank-1 spectrum has unit purity") {
    Eigen::VectorXcd a(32), b(32);
    for (int i = 0; i < 32; ++i) {
      a(i) = std::exp(-0.01 * (i - 16) * (i - 16));
      b(i) = std::exp(-0.03 * (i - 10) * (i - 10));
    }
    js.amplitude = a * b.transpose();
    const auto res = schmidt(js);
    CHECK(res.purity == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(res.schmidt_number == doctest::Approx(1.0).epsilon(1e-12));

    // marginal of a separable product equals each factor's intensity
    js.amplitude /= std::sqrt(js.amplitude.squaredNorm() * g.cell_area_nm2());
    js.normalized = true;
    const auto [ms, mi] = marginals(js);
    Eigen::VectorXd ia = a.cwiseAbs2().real();
    ia /= ia.sum();
    for (int i = 0; i < 32; ++i) {
      CHECK(ms.intensity[i] == doctest::Approx(ia(i)).epsilon(1e-10));
    }
  }

  SUBCASE("two equal Schmidt modes give purity 1/2") {
    js.amplitude = Eigen::MatrixXcd::Zero(32, 32);
    js.amplitude(0, 0) = 1.0;
    js.amplitude(1, 1) = 1.0;
    const auto res = schmidt(js);
    CHECK(res.purity == doctest::Approx(0.5).epsilon(1e-12));
  }

  SUBCASE("all-zero spectrum is rejected") {
    js.amplitude = Eigen::MatrixXcd::Zero(32, 32);
    CHECK_THROWS_AS(schmidt(js), std::invalid_argument);
  }
}

TEST_CASE("purity is invariant under global phase and transposition") {
  const auto& p = telecom();
  const auto g = SpectralGrid::centered(1584.0, 4.0, 96);
  auto jsa = compute_jsa(p.crystal, p.pump, g);
  const double base = schmidt(jsa).purity;

  JointSpectrum phased = jsa;
  phased.amplitude *= std::exp(std::complex<double>(0.0, 1.2345));
  CHECK(schmidt(phased).purity == doctest::Approx(base).epsilon(1e-12));

  JointSpectrum transposed = jsa;
  transposed.amplitude = jsa.amplitude.transpose().eval();
  CHECK(schmidt(transposed).purity == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("telecom marginals: bandwidth pin, normalization") {
  const auto& p = telecom();
  const auto jsa = compute_jsa(p.crystal, p.pump, p.grid);
  const auto [sig, idl] = marginals(jsa);
  CHECK(sig.fwhm_nm == doctest::Approx(kTelecomMarginalFwhm).epsilon(0.02));
  CHECK(idl.fwhm_nm == doctest::Approx(kTelecomMarginalFwhm).epsilon(0.02));
  CHECK(std::abs(sig.fwhm_nm - 1.2) < 0.3);
  CHECK(std::abs(idl.fwhm_nm - 1.2) < 0.3);
  double s = 0.0;
  for (double v : sig.intensity) s += v;
  CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("inconsistent pump/grid combination is rejected, no partial result") {
  // a 775 nm pump has its degenerate pair at 1550 nm; on a grid around
  // 1584 nm the envelope underflows to zero everywhere
  PumpConfig p{775.0, 0.4};
  CHECK_THROWS_AS(compute_jsa(telecom().crystal, p, telecom().grid), std::runtime_error);
}

TEST_CASE("purity scan: telecom ladder is unimodal with the pinned optimum") {
  const auto& p = telecom();
  const auto res = purity_scan(p.crystal, p.pump, 0.2, 0.7, 9, p.grid);
  CHECK(res.curve.size() == 9);
  CHECK(res.curve.front().fwhm_nm == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(res.curve.back().fwhm_nm == doctest::Approx(0.7).epsilon(1e-12));
  for (std::size_t i = 1; i < res.curve.size(); ++i) {
    CHECK(res.curve[i].fwhm_nm > res.curve[i - 1].fwhm_nm);
  }
  // single interior peak within sampling resolution
  int maxima = 0;
  for (std::size_t i = 1; i + 1 < res.curve.size(); ++i) {
    if (res.curve[i].purity > res.curve[i - 1].purity &&
        res.curve[i].purity > res.curve[i + 1].purity) {
      ++maxima;
    }
  }
  CHECK(maxima <= 1);
  CHECK(res.best_purity == doctest::Approx(0.829).epsilon(5e-3));
  CHECK(res.best_fwhm_nm > 0.2);
  CHECK(res.best_fwhm_nm < 0.7);

  // deterministic aggregation: identical rerun
  const auto res2 = purity_scan(p.crystal, p.pump, 0.2, 0.7, 9, p.grid);
  for (std::size_t i = 0; i < res.curve.size(); ++i) {
    CHECK(res.curve[i].purity == res2.curve[i].purity);
  }
}

TEST_CASE("purity scan input validation") {
  const auto& p = telecom();
  CHECK_THROWS_AS(purity_scan(p.crystal, p.pump, 0.5, 0.1, 9, p.grid), std::invalid_argument);
  CHECK_THROWS_AS(purity_scan(p.crystal, p.pump, 0.1, 0.5, 2, p.grid), std::invalid_argument);
}
