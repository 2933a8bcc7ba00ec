#include <doctest.h>

#include <cmath>
#include <sstream>

#include "entangler/constants.hpp"
#include "entangler/measures.hpp"
#include "entangler/sweep.hpp"

using namespace entangler;

TEST_CASE("axis parsing and values") {
  SweepAxis axis = parse_axis("temperature:log:1:295:64");
  CHECK(axis.parameter == SweepParameter::Temperature);
  CHECK(axis.scale == AxisScale::Log);
  CHECK(axis.points == 64);
  auto values = axis.values();
  CHECK(values.front() == doctest::Approx(1.0));
  CHECK(values.back() == doctest::Approx(295.0));

  SweepAxis lin = parse_axis("frequency:linear:1000:2000:3");
  auto lv = lin.values();
  CHECK(lv[1] == doctest::Approx(1500.0));

  CHECK_THROWS_AS(parse_axis("temperature:log:1:295"), ConfigError);
  CHECK_THROWS_AS(parse_axis("bogus:log:1:295:8"), ConfigError);
  CHECK_THROWS_AS(parse_axis("temperature:cubic:1:295:8"), ConfigError);
  CHECK_THROWS_AS(parse_axis("temperature:log:295:1:8"), ConfigError);
  CHECK_THROWS_AS(parse_axis("temperature:log:0:295:8"), ConfigError);
  CHECK_THROWS_AS(parse_axis("temperature:log:1:295:x"), ConfigError);
}

TEST_CASE("degenerate 1-point axis equals a direct point evaluation") {
  SimConfig cfg;
  SweepAxis axis;
  axis.parameter = SweepParameter::Frequency;
  axis.scale = AxisScale::Linear;
  axis.start = axis.stop = 20000.0;
  axis.points = 1;
  SweepResult result = run_sweep(cfg, {axis}, 20000.0, 1);
  REQUIRE(result.cells.size() == 1);

  double direct = log_negativity(
                      output_covariance(cfg, 2.0 * constants::pi * 20000.0))
                      .value;
  CHECK(result.at(0, 0).e_n == direct);
  CHECK(result.at(0, 0).stable);
}

TEST_CASE("worker count does not change the result") {
  SimConfig cfg;
  std::vector<SweepAxis> axes = {parse_axis("temperature:log:4:295:4"),
                                 parse_axis("frequency:log:5e3:5e4:6")};
  SweepResult serial = run_sweep(cfg, axes, 20000.0, 1);
  SweepResult parallel = run_sweep(cfg, axes, 20000.0, 4);
  REQUIRE(serial.cells.size() == parallel.cells.size());
  for (size_t i = 0; i < serial.cells.size(); ++i) {
    CHECK(serial.cells[i].e_n == parallel.cells[i].e_n);
    bool both_nan = std::isnan(serial.cells[i].duan_R) &&
                    std::isnan(parallel.cells[i].duan_R);
    CHECK((both_nan || serial.cells[i].duan_R == parallel.cells[i].duan_R));
    CHECK(serial.cells[i].stable == parallel.cells[i].stable);
  }
  CHECK(sweep_to_csv(serial) == sweep_to_csv(parallel));
}

TEST_CASE("loss axis is monotone at fixed frequency") {
  SimConfig cfg;
  SweepResult result =
      run_sweep(cfg, {parse_axis("loss_ppm:log:10:10000:12")}, 20000.0, 0);
  for (int i = 1; i < result.rows; ++i)
    CHECK(result.at(i, 0).e_n <= result.at(i - 1, 0).e_n + 1e-12);
  CHECK(result.at(0, 0).e_n > 0.0);
}

TEST_CASE("axes must be distinct and 1-2 in number") {
  SimConfig cfg;
  auto axis = parse_axis("temperature:log:1:295:4");
  CHECK_THROWS_AS(run_sweep(cfg, {}, 20000.0, 1), ConfigError);
  CHECK_THROWS_AS(run_sweep(cfg, {axis, axis}, 20000.0, 1), ConfigError);
}

TEST_CASE("find_peak: argmax with low-value tie break") {
  SweepResult result;
  result.axes = {parse_axis("frequency:linear:1:5:5")};
  result.rows = 5;
  result.cols = 1;
  result.cells.resize(5);
  for (auto& cell : result.cells) cell.e_n = 0.25;
  PeakResult flat = find_peak(result);
  CHECK(flat.row == 0);  // first cell wins ties
  CHECK_FALSE(flat.all_zero);

  result.cells[3].e_n = 0.9;
  PeakResult peak = find_peak(result);
  CHECK(peak.row == 3);
  CHECK(peak.value == doctest::Approx(0.9));
  CHECK(peak.location[0] == doctest::Approx(4.0));

  for (auto& cell : result.cells) cell.e_n = 0.0;
  CHECK(find_peak(result).all_zero);
}

TEST_CASE("csv shape and headers") {
  SimConfig cfg;
  std::vector<SweepAxis> axes = {parse_axis("temperature:log:4:295:3"),
                                 parse_axis("frequency:log:1e4:3e4:2")};
  SweepResult result = run_sweep(cfg, axes, 20000.0, 0);
  std::string csv = sweep_to_csv(result);
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "axis1,axis2,E_N,duan_R,qt_ratio,stable");
  int rows = 0;
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == 6);

  std::string json = sweep_to_json(result);
  CHECK(json.find("\"parameter\": \"temperature\"") != std::string::npos);
  CHECK(json.find("\"shape\"") != std::string::npos);
}

TEST_CASE("cavity_length_profile matches point evaluations") {
  SimConfig cfg;
  auto table = cavity_length_profile(cfg, {0.01}, {4.0});
  REQUIRE(table.size() == 1);
  SimConfig cold = cfg;
  cold.temperature = 4.0;
  double direct =
      log_negativity(output_covariance(cold, 2.0 * constants::pi * 20000.0))
          .value;
  CHECK(table[0].e_n == direct);
  CHECK(table[0].temperature == 4.0);
}
