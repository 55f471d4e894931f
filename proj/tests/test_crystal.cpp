#include "sagnacsim/crystal.hpp"

#include "sagnacsim/units.hpp"
#include "helpers.hpp"

#include <doctest.h>

#include <cmath>

using namespace sagnacsim;
using test::band800;
using test::telecom;

namespace {
// golden constants from the independent evaluation script
constexpr double kGvmPumpRootUm = 0.7910903;
constexpr double kTelecomPolingUm = 46.1460;
constexpr double kBand800PolingUm = 9.2682;
constexpr double kQpmAtDegenerate = 1.359068e-4;  // rad/um with Lambda = 46.1
}  // namespace

TEST_CASE("crystal config validation") {
  CrystalConfig c = telecom().crystal;
  CHECK_NOTHROW(c.validate());
  c.length_mm = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = telecom().crystal;
  c.poling_period_um = -1.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = telecom().crystal;
  c.idler_axis = Axis::Y;  // same as signal: not type-II
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("GVM residual changes sign across the telecom bracket") {
  const auto& c = telecom().crystal;
  const double r_lo = gvm_residual(c, 0.76);
  const double r_hi = gvm_residual(c, 0.82);
  CHECK(r_lo > 0.0);
  CHECK(r_hi < 0.0);
}

TEST_CASE("GVM residual is continuous") {
  const auto& c = telecom().crystal;
  const double lam = 0.79;
  double prev = std::abs(gvm_residual(c, lam + 1e-3) - gvm_residual(c, lam));
  for (double delta = 1e-4; delta >= 1e-7; delta /= 10.0) {
    const double diff = std::abs(gvm_residual(c, lam + delta) - gvm_residual(c, lam));
    CHECK(diff < prev);
    prev = diff;
  }
  CHECK(prev < 1e-15);
}

TEST_CASE("find_gvm_pump locates the telecom root") {
  const auto& c = telecom().crystal;
  const double root = find_gvm_pump(c, 0.75, 0.85);
  CHECK(root == doctest::Approx(kGvmPumpRootUm).epsilon(2e-4));
  CHECK(root > 0.782);
  CHECK(root < 0.802);
  CHECK(std::abs(gvm_residual(c, root)) < 1e-18);
}

TEST_CASE("find_gvm_pump on a symmetric bracket returns the same root") {
  const auto& c = telecom().crystal;
  const double root = find_gvm_pump(c, 0.75, 0.85);
  const double again = find_gvm_pump(c, root - 0.01, root + 0.01);
  CHECK(again == doctest::Approx(root).epsilon(1e-9));
}

TEST_CASE("find_gvm_pump rejects same-sign brackets") {
  const auto& c = telecom().crystal;
  CHECK_THROWS_AS(find_gvm_pump(c, 0.75, 0.76), std::invalid_argument);
  CHECK_THROWS_AS(find_gvm_pump(c, 0.85, 0.75), std::invalid_argument);
}

TEST_CASE("QPM mismatch at the degenerate telecom point") {
  const auto& c = telecom().crystal;
  const double dk = qpm_mismatch(c, 1.584, 1.584);
  CHECK(std::abs(dk) < 0.02);
  CHECK(dk == doctest::Approx(kQpmAtDegenerate).epsilon(1e-4));
}

TEST_CASE("infinite poling period reduces to the unpoled mismatch") {
  CrystalConfig c = telecom().crystal;
  c.poling_period_um = 1e18;
  const double dk = qpm_mismatch(c, 1.58, 1.59);
  const double dk0 = birefringent_mismatch(c, 1.58, 1.59);
  CHECK(dk == doctest::Approx(dk0).epsilon(1e-12));
}

TEST_CASE("swapping signal and idler changes the mismatch through the axis terms only") {
  const auto& c = telecom().crystal;
  const double a = 1.580, b = 1.589;
  const double diff = qpm_mismatch(c, a, b) - qpm_mismatch(c, b, a);
  // direct re-evaluation of the axis-dependent terms
  const double expected =
      kTwoPi * (-(refractive_index(c.signal_set(), a) / a +
                  refractive_index(c.idler_set(), b) / b) +
                (refractive_index(c.signal_set(), b) / b +
                 refractive_index(c.idler_set(), a) / a));
  CHECK(diff == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("poling period pins") {
  const double lp_tele = poling_period_for(telecom().crystal, 1.584, 1.584);
  CHECK(lp_tele == doctest::Approx(kTelecomPolingUm).epsilon(1e-4));
  CHECK(std::abs(lp_tele - 46.1) < 2.0);

  const double lp_800 = poling_period_for(band800().crystal, 0.8, 0.8);
  CHECK(lp_800 == doctest::Approx(kBand800PolingUm).epsilon(1e-4));
}

TEST_CASE("poling_period_for round-trips through qpm_mismatch") {
  for (const auto& [ls, li] : {std::pair{1.584, 1.584}, {1.58, 1.591}, {1.579, 1.586}}) {
    CrystalConfig c = telecom().crystal;
    c.poling_period_um = poling_period_for(c, ls, li);
    CHECK(std::abs(qpm_mismatch(c, ls, li)) < 1e-12);
  }
  CrystalConfig c8 = band800().crystal;
  c8.poling_period_um = poling_period_for(c8, 0.8, 0.8);
  CHECK(std::abs(qpm_mismatch(c8, 0.8, 0.8)) < 1e-12);
}

TEST_CASE("poling period is finite and positive over the default telecom grid") {
  const auto& preset = telecom();
  const auto& g = preset.grid;
  for (int i = 0; i < g.signal_points; ++i) {
    for (int j = 0; j < g.idler_points; ++j) {
      const double lp = poling_period_for(preset.crystal, g.signal_nm(i) * 1e-3,
                                          g.idler_nm(j) * 1e-3);
      REQUIRE(std::isfinite(lp));
      REQUIRE(lp > 0.0);
    }
  }
}

TEST_CASE("zero birefringent mismatch has no finite poling period") {
  CrystalConfig c;
  c.sellmeier_y = test::constant_index_set(1.8, Axis::Y);
  c.sellmeier_z = test::constant_index_set(1.8, Axis::Z);
  // identical constant indices: k_p - k_s - k_i vanishes by energy conservation
  CHECK_THROWS_AS(poling_period_for(c, 1.584, 1.584), std::invalid_argument);
}

TEST_CASE("window violations propagate from dispersion to crystal ops") {
  const auto& c = telecom().crystal;
  CHECK_THROWS_AS(gvm_residual(c, 0.2), std::domain_error);
  CHECK_THROWS_AS(qpm_mismatch(c, 0.3, 0.3), std::domain_error);
}
