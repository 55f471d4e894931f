#include "sagnacsim/sellmeier.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <fstream>

using namespace sagnacsim;
using test::catalog;

// Golden values: the published formulas evaluated by an independent script
// (sympy/numpy), frozen here.
namespace {
constexpr double kFanY04 = 1.844348189;
constexpr double kFanY08 = 1.757193091;
constexpr double kKonigY1584 = 1.733430532;
constexpr double kKonigNg1584 = 1.763766899;
constexpr double kKonigY0792 = 1.757168244;
constexpr double kKonigNg0792 = 1.807823772;
constexpr double kFradkinZ1584 = 1.815231780;
constexpr double kFradkinNg1584 = 1.852181544;
}  // namespace

TEST_CASE("catalog loads the three published sets") {
  CHECK(catalog().size() == 3);
  CHECK(find_sellmeier(catalog(), "fan-y").axis == Axis::Y);
  CHECK(find_sellmeier(catalog(), "konig-y").axis == Axis::Y);
  CHECK(find_sellmeier(catalog(), "fradkin-z").axis == Axis::Z);
  CHECK(find_sellmeier(catalog(), "fradkin-z").poles.size() == 2);
  CHECK_THROWS_AS(find_sellmeier(catalog(), "nope"), std::runtime_error);
}

TEST_CASE("refractive index matches golden constants") {
  const auto& fan = find_sellmeier(catalog(), "fan-y");
  const auto& konig = find_sellmeier(catalog(), "konig-y");
  const auto& fradkin = find_sellmeier(catalog(), "fradkin-z");

  CHECK(refractive_index(fan, 0.4) == doctest::Approx(kFanY04).epsilon(1e-8));
  CHECK(refractive_index(fan, 0.8) == doctest::Approx(kFanY08).epsilon(1e-8));
  CHECK(refractive_index(konig, 1.584) == doctest::Approx(kKonigY1584).epsilon(1e-8));
  CHECK(refractive_index(konig, 0.792) == doctest::Approx(kKonigY0792).epsilon(1e-8));
  CHECK(refractive_index(fradkin, 1.584) == doctest::Approx(kFradkinZ1584).epsilon(1e-8));

  // coarse sanity ranges
  CHECK(refractive_index(fradkin, 1.584) == doctest::Approx(1.81).epsilon(0.02 / 1.81));
  CHECK(refractive_index(konig, 1.584) == doctest::Approx(1.73).epsilon(0.02 / 1.73));
}

TEST_CASE("out-of-window evaluation is a domain error naming the window") {
  const auto& konig = find_sellmeier(catalog(), "konig-y");
  CHECK_THROWS_AS(refractive_index(konig, 0.2), std::domain_error);
  CHECK_THROWS_AS(refractive_index(konig, 5.0), std::domain_error);
  try {
    refractive_index(konig, 0.2);
    FAIL("expected a domain error");
  } catch (const std::domain_error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("0.43") != std::string::npos);
    CHECK(msg.find("3.54") != std::string::npos);
  }
}

TEST_CASE("group index of a constant-index stub equals the index") {
  const auto stub = test::constant_index_set(1.5, Axis::Y);
  CHECK(refractive_index(stub, 1.0) == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(group_index(stub, 1.0) == doctest::Approx(1.5).epsilon(1e-14));
}

TEST_CASE("group index golden values and normal dispersion") {
  const auto& konig = find_sellmeier(catalog(), "konig-y");
  const auto& fradkin = find_sellmeier(catalog(), "fradkin-z");
  CHECK(group_index(konig, 1.584) == doctest::Approx(kKonigNg1584).epsilon(1e-7));
  CHECK(group_index(konig, 0.792) == doctest::Approx(kKonigNg0792).epsilon(1e-7));
  CHECK(group_index(fradkin, 1.584) == doctest::Approx(kFradkinNg1584).epsilon(1e-7));
  // normal dispersion: n_g > n
  CHECK(group_index(fradkin, 1.584) > refractive_index(fradkin, 1.584));
}

TEST_CASE("group index finite difference is stable under step halving") {
  const auto& fradkin = find_sellmeier(catalog(), "fradkin-z");
  const double lam = 1.584;
  auto ng_with_step = [&](double h) {
    const double dn = (refractive_index(fradkin, lam + h) -
                       refractive_index(fradkin, lam - h)) / (2.0 * h);
    return refractive_index(fradkin, lam) - lam * dn;
  };
  const double ng_h = ng_with_step(kGroupIndexStepUm);
  const double ng_h2 = ng_with_step(kGroupIndexStepUm / 2.0);
  CHECK(ng_h == doctest::Approx(group_index(fradkin, lam)).epsilon(1e-14));
  CHECK(std::abs(ng_h - ng_h2) / ng_h < 1e-9);
}

TEST_CASE("group index requires the derivative stencil inside the window") {
  const auto& konig = find_sellmeier(catalog(), "konig-y");
  CHECK_THROWS_AS(group_index(konig, 0.43), std::domain_error);  // edge: 0.43 - h leaves window
  CHECK_NOTHROW(group_index(konig, 0.431));
}

TEST_CASE("index is smooth and above 1 across each window") {
  for (const auto& set : catalog()) {
    const double lo = set.window_lo_um + 2 * kGroupIndexStepUm;
    const double hi = set.window_hi_um - 2 * kGroupIndexStepUm;
    const double h = 1e-3;
    for (int i = 0; i <= 200; ++i) {
      const double lam = lo + (hi - lo) * i / 200.0;
      const double n = refractive_index(set, lam);
      CHECK(n > 1.0);
      CHECK(std::isfinite(n));
      if (lam - h > lo && lam + h < hi) {
        const double d2 = (refractive_index(set, lam + h) - 2.0 * n +
                           refractive_index(set, lam - h)) / (h * h);
        CHECK(std::abs(d2) < 1e3);  // bounded curvature away from the poles
      }
    }
  }
}

TEST_CASE("malformed table files are rejected") {
  const auto dir = std::filesystem::temp_directory_path();
  auto write = [&](const std::string& name, const std::string& content) {
    const auto p = dir / name;
    std::ofstream(p) << content;
    return p;
  };
  CHECK_THROWS_AS(load_sellmeier_file(dir / "does_not_exist.txt"), std::runtime_error);
  CHECK_THROWS_AS(load_sellmeier_file(write("empty.txt", "# just a comment\n")),
                  std::runtime_error);
  CHECK_THROWS_AS(load_sellmeier_file(write("dangling.txt", "x y 0.4 1.0 2.0 0.01 0.8\n")),
                  std::runtime_error);
  CHECK_THROWS_AS(load_sellmeier_file(write("nopole.txt", "x y 0.4 1.0 2.0 0.01\n")),
                  std::runtime_error);
  CHECK_THROWS_AS(load_sellmeier_file(write("badwin.txt", "x y 1.0 0.4 2.0 0.01 0.8 0.05\n")),
                  std::runtime_error);
}
