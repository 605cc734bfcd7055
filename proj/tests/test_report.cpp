#include "doctest.h"

#include <sstream>
#include <string>
#include <vector>

#include "twoaxis/report.hpp"

using namespace twoaxis;

namespace {

std::vector<std::string> data_rows(const std::string& csv)
{
  std::vector<std::string> rows;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') {
      rows.push_back(line);
    }
  }
  return rows;
}

std::vector<std::string> split(const std::string& row)
{
  std::vector<std::string> out;
  std::stringstream ss(row);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    out.push_back(cell);
  }
  return out;
}

Scenario quiet()
{
  Scenario s;
  s.exchange = 0.4;
  s.gradient = 0.3;
  s.time.stop = 100.0;
  s.time.auto_stop = false;
  s.time.points = 6;
  return s;
}

}  // namespace

TEST_CASE("zero noise gives a constant W column")
{
  std::ostringstream out;
  run_coherence(quiet(), out);
  const auto rows = data_rows(out.str());
  REQUIRE(rows.size() == 7);
  CHECK(rows[0] ==
        "t_ns,t_natural,W,phase,c_z,c_x,even_linked,even_semilinked_exp,odd_phase,axis_re,axis_im");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(split(rows[i])[2] == "1");
  }
}

TEST_CASE("output is deterministic")
{
  std::ostringstream a;
  std::ostringstream b;
  run_preset("fig3", a);
  run_preset("fig3", b);
  CHECK(a.str() == b.str());
  const auto rows = data_rows(a.str());
  std::vector<std::string> labels;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto label = split(rows[i])[0];
    if (labels.empty() || labels.back() != label) {
      labels.push_back(label);
    }
  }
  CHECK(labels.size() == 6);
}

TEST_CASE("fig1a yields two curve pairs")
{
  std::ostringstream out;
  run_preset("fig1a", out);
  const auto rows = data_rows(out.str());
  std::vector<std::string> seen;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto cells = split(rows[i]);
    const auto key = cells[0] + "/" + cells[1];
    if (seen.empty() || seen.back() != key) {
      seen.push_back(key);
    }
  }
  CHECK(seen == std::vector<std::string>{"sigmaJ=1neV/first_order", "sigmaJ=1neV/resummed",
                                         "sigmaJ=5neV/first_order", "sigmaJ=5neV/resummed"});
}

TEST_CASE("single-point sweep gives one row")
{
  Scenario s = make_preset("fig2a").curves[0].scenario;
  s.sweep->points = 1;
  std::ostringstream out;
  run_t2_sweep(s, out);
  const auto rows = data_rows(out.str());
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == "value_ueV,T2_first_order_ns,T2_resummed_ns");
  CHECK(split(rows[1]).size() == 3);
}

TEST_CASE("Monte Carlo columns")
{
  Scenario s = quiet();
  s.mc.emplace();
  s.mc->config.n_traj = 20;
  std::ostringstream out;
  auto summary = run_mc(s, out);
  CHECK(summary.breaches == 0);
  CHECK(summary.max_deviation < 1e-12);

  Scenario echo = quiet();
  echo.sequence = PulseSequence::spin_echo();
  echo.charge.spectrum.sigma_qs = 0.01;
  echo.magnetic.spectrum.sigma_qs = 0.02;
  echo.mc.emplace();
  echo.mc->config.n_traj = 200;
  std::ostringstream out2;
  summary = run_mc(echo, out2);
  CHECK(summary.breaches == 0);
  const auto rows = data_rows(out2.str());
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto cells = split(rows[i]);
    REQUIRE(cells.size() == 13);
    CHECK(std::stod(cells[2]) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::stod(cells[11]) == doctest::Approx(1.0).epsilon(1e-3));
  }
}

TEST_CASE("psd check agrees with quadrature")
{
  Scenario s = quiet();
  s.charge.spectrum.amplitude = 1e-3;
  s.magnetic.spectrum.amplitude = 5e-4;
  s.magnetic.spectrum.exponent = 1.3;
  std::ostringstream out;
  CHECK(run_psd_check(s, out) < 1e-8);
}

TEST_CASE("automatic time range needs a decay")
{
  Scenario s = quiet();
  s.time.auto_stop = true;
  std::ostringstream out;
  CHECK_THROWS_AS(run_coherence(s, out), NumericalError);
}
