#include "sagnacsim/io.hpp"

#include "helpers.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

using namespace sagnacsim;

TEST_CASE("atomic writes land complete or not at all") {
  const auto dir = std::filesystem::temp_directory_path() / "sagnacsim_io_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "out.csv";
  write_text_atomic(path, "a,b\n1,2\n");
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == "a,b\n1,2\n");
  CHECK(!std::filesystem::exists(path.string() + ".tmp"));

  const auto bad = dir / "missing_subdir" / "out.csv";
  CHECK_THROWS(write_text_atomic(bad, "x"));
  CHECK(!std::filesystem::exists(bad));
}

TEST_CASE("jsa csv layout: idler header row, signal-major rows") {
  JointSpectrum js;
  js.grid.signal_lo_nm = 100.0;
  js.grid.signal_hi_nm = 102.0;
  js.grid.signal_points = 3;
  js.grid.idler_lo_nm = 200.0;
  js.grid.idler_hi_nm = 203.0;
  js.grid.idler_points = 4;
  js.amplitude = Eigen::MatrixXcd::Zero(3, 4);
  js.amplitude(1, 2) = std::complex<double>(0.6, -0.8);

  const std::string csv = jsa_csv(js, JsaComponent::Intensity);
  std::istringstream lines(csv);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "signal_nm\\idler_nm,200,201,202,203");
  std::string row0, row1;
  std::getline(lines, row0);
  std::getline(lines, row1);
  CHECK(row0 == "100,0,0,0,0");
  CHECK(row1.substr(0, 4) == "101,");
  CHECK(row1.find(",1,") != std::string::npos);  // |0.6 - 0.8i|^2 = 1

  const std::string re = jsa_csv(js, JsaComponent::Real);
  CHECK(re.find("0.6") != std::string::npos);
  const std::string im = jsa_csv(js, JsaComponent::Imag);
  CHECK(im.find("-0.8") != std::string::npos);
}

TEST_CASE("count records round-trip through CSV, including circular settings") {
  std::vector<CountRecord> records;
  records.push_back({{"ab:++", 0.0, 22.5}, 1.0, 9876, 9900.0});
  const double nan = std::numeric_limits<double>::quiet_NaN();
  records.push_back({{"RL", nan, nan}, 10.0, 123, 12.0});

  const std::string csv = count_records_csv(records);
  CHECK(csv.find("setting_id,theta1_deg,theta2_deg,accumulation_s,count") == 0);
  CHECK(csv.find("RL,,,10,123") != std::string::npos);

  const auto parsed = count_records_from_csv(csv);
  REQUIRE(parsed.size() == 2);
  CHECK(parsed[0].setting.id == "ab:++");
  CHECK(parsed[0].setting.theta2_deg == doctest::Approx(22.5));
  CHECK(parsed[0].count == 9876);
  CHECK(parsed[1].setting.id == "RL");
  CHECK(std::isnan(parsed[1].setting.theta1_deg));
  CHECK(parsed[1].count == 123);

  CHECK_THROWS_AS(count_records_from_csv(""), std::runtime_error);
  CHECK_THROWS_AS(count_records_from_csv("header\nonly,three,fields\n"),
                  std::runtime_error);
}

TEST_CASE("count records JSON carries the diagnostic rate") {
  std::vector<CountRecord> records;
  records.push_back({{"max", 45.0, 135.0}, 2.0, 42, 21.5});
  const auto j = count_records_json(records);
  REQUIRE(j.is_array());
  CHECK(j[0]["setting_id"] == "max");
  CHECK(j[0]["expected_rate_cps"] == doctest::Approx(21.5));
  CHECK(j[0]["count"] == 42);
}

TEST_CASE("state JSON round trip") {
  std::mt19937_64 rng(3);
  const TwoQubitState state{test::random_density_matrix(rng)};
  const auto j = state_json(state);
  CHECK(j["basis"][0] == "HH");
  const auto back = state_from_json(j);
  CHECK((back.matrix() - state.matrix()).cwiseAbs().maxCoeff() < 1e-15);

  nlohmann::json bad = j;
  bad["rho"].erase(3);
  CHECK_THROWS(state_from_json(bad));
}

TEST_CASE("state CSV has the basis header") {
  const TwoQubitState state{Eigen::Matrix4cd::Identity() / 4.0};
  const auto re = state_csv(state, false);
  CHECK(re.find("basis,HH,HV,VH,VV") == 0);
  CHECK(re.find("HH,0.25,0,0,0") != std::string::npos);
}

TEST_CASE("fringe CSV basics") {
  CHECK(fringe_csv({0.0, 5.0}, {0.1, 0.2}) == "theta2_deg,probability\n0,0.1\n5,0.2\n");
  CHECK_THROWS_AS(fringe_csv({0.0}, {0.1, 0.2}), std::invalid_argument);
}
