// SPDX-License-Identifier: Apache-2.0
//
// nearswipt - link-level simulator for simultaneous wireless information and
// power transfer with gigantic planar antenna arrays
// Copyright (C) 2026 the nearswipt developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <cmath>
#include <sstream>

#include "doctest.h"
#include "nearswipt/harvesting.hpp"

using namespace nearswipt;

TEST_CASE("rectifier curve: zero input, monotonicity, saturation") {
  const EhModelParams params;  // 24 mW saturation, 150/W steepness, 14 mW knee

  CHECK(std::abs(nonlinear_dc(0.0, params)) < 1e-18);

  // Strictly increasing over the operating range; the curve flattens into
  // the ceiling once the logistic term underflows double precision, so the
  // strict check stops at ten knees and only nondecreasing holds beyond.
  const std::size_t n = 1000;
  double prev = nonlinear_dc(0.0, params);
  for (std::size_t i = 1; i <= n; ++i) {
    const double rf = 10.0 * params.inflection_w * double(i) / double(n);
    const double dc = nonlinear_dc(rf, params);
    CHECK(dc > prev);
    CHECK(dc < params.saturation_w);
    prev = dc;
  }
  for (std::size_t i = 1; i <= n; ++i) {
    const double rf =
        params.inflection_w * (10.0 + 90.0 * double(i) / double(n));
    const double dc = nonlinear_dc(rf, params);
    CHECK(dc >= prev);
    CHECK(dc <= params.saturation_w);
    prev = dc;
  }

  // Deep saturation: within 1e-6 of the ceiling at 100x the knee.
  const double deep = nonlinear_dc(100.0 * params.inflection_w, params);
  CHECK(std::abs(params.saturation_w - deep) < 1e-6 * params.saturation_w);
}

TEST_CASE("rectifier parameters are validated") {
  EhModelParams params;
  params.saturation_w = 0.0;
  CHECK_THROWS_AS(params.validate(), std::invalid_argument);
  params = EhModelParams{};
  params.steepness_per_w = -3.0;
  CHECK_THROWS_AS(params.validate(), std::invalid_argument);
  params = EhModelParams{};
  params.inflection_w = -1e-3;
  CHECK_THROWS_AS(params.validate(), std::invalid_argument);
}

TEST_CASE("linear ablation curve ignores the sigmoid parameters") {
  EhModel model;
  model.curve = EhCurve::linear;
  model.linear_efficiency = 0.5;
  CHECK(model.dc_output_w(0.0) == 0.0);
  CHECK(model.dc_output_w(10e-3) == doctest::Approx(5e-3).epsilon(1e-12));

  model.params.saturation_w = 1e-9;  // must not matter in linear mode
  CHECK(model.dc_output_w(10e-3) == doctest::Approx(5e-3).epsilon(1e-12));
}

TEST_CASE("net harvested subtracts the circuit draw and clips") {
  const auto [net, clipped] = net_harvested(5e-3, 3e-3);
  CHECK(net == doctest::Approx(2e-3).epsilon(1e-12));
  CHECK(clipped == doctest::Approx(2e-3).epsilon(1e-12));

  const auto [neg, zero] = net_harvested(1e-3, 3e-3);
  CHECK(neg == doctest::Approx(-2e-3).epsilon(1e-12));
  CHECK(zero == 0.0);

  const EhModel model;
  const HarvestResult r = harvest(20e-3, model, 3e-3);
  CHECK(r.rf_input_w == 20e-3);
  CHECK(r.dc_w == doctest::Approx(nonlinear_dc(20e-3, model.params)).epsilon(1e-12));
  CHECK(r.net_w == doctest::Approx(r.dc_w - 3e-3).epsilon(1e-12));
  CHECK(r.clipped_net_w == std::max(r.net_w, 0.0));
}

TEST_CASE("rf input accumulates data and energy beams") {
  arma::cx_vec h(6, arma::fill::zeros);
  h(0) = std::complex<double>(2.0, 0.0);
  h(2) = std::complex<double>(0.0, 1.0);

  arma::cx_mat w(6, 2, arma::fill::zeros);
  w(0, 0) = 1.0;  // aligned with the strong entry
  w(1, 1) = 1.0;  // orthogonal to h
  const arma::vec p = {0.5, 3.0};

  EnergyBeamSet beams;
  beams.beams = arma::cx_mat(6, 1, arma::fill::zeros);
  beams.beams(2, 0) = 1.0;
  beams.powers = arma::vec{2.0};

  // 0.5 * |2|^2 + 3 * 0 + 2 * |i|^2 = 2 + 2.
  const double rf = rf_input_power(h, w, p, beams);
  CHECK(rf == doctest::Approx(4.0).epsilon(1e-12));

  // The ZfSolution overload agrees with the explicit one.
  ZfSolution sol;
  sol.precoders = w;
  sol.powers = p;
  CHECK(rf_input_power(h, sol, beams) == doctest::Approx(rf).epsilon(1e-15));
}

TEST_CASE("eh curve csv export") {
  std::ostringstream os;
  EhModel model;
  write_eh_curve_csv(os, model, 70e-3, 50);
  std::istringstream is(os.str());
  std::string header;
  std::getline(is, header);
  CHECK(header == "rf_w,dc_w");

  std::size_t rows = 0;
  double prev_rf = -1.0, prev_dc = -1.0;
  std::string line;
  while (std::getline(is, line)) {
    const auto comma = line.find(',');
    REQUIRE(comma != std::string::npos);
    const double rf = std::stod(line.substr(0, comma));
    const double dc = std::stod(line.substr(comma + 1));
    CHECK(rf > prev_rf);
    CHECK(dc >= prev_dc);
    prev_rf = rf;
    prev_dc = dc;
    ++rows;
  }
  CHECK(rows == 50);
}
