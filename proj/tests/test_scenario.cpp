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

#include "doctest.h"
#include "nearswipt/scenario.hpp"

using namespace nearswipt;

TEST_CASE("noise power matches the link budget") {
  SystemConfig cfg;  // -204 dBW/Hz + 7 dB NF over 100 MHz
  const double p = noise_power_w(cfg);
  const double dbw = 10.0 * std::log10(p);
  CHECK(std::abs(dbw + 117.0) < 1e-9);

  cfg.bandwidth_hz = 10e6;  // 10x less bandwidth: 10 dB quieter
  CHECK(10.0 * std::log10(noise_power_w(cfg)) == doctest::Approx(-127.0));
}

TEST_CASE("array geometry is centered with column-major element order") {
  const ArrayGeometry geom = build_array_geometry(4, 3, 7.5e9);
  CHECK(geom.rows == 4);
  CHECK(geom.cols == 3);
  CHECK(geom.size() == 12);
  CHECK(geom.wavelength_m == doctest::Approx(kSpeedOfLight / 7.5e9).epsilon(1e-15));
  CHECK(geom.spacing_m == doctest::Approx(geom.wavelength_m / 2).epsilon(1e-15));
  CHECK(geom.element_positions.n_rows == 3);
  CHECK(geom.element_positions.n_cols == 12);

  // Centered: the element centroid sits at the origin.
  CHECK(arma::norm(arma::mean(geom.element_positions, 1)) < 1e-12);

  // m = row + col*rows: one row step moves along x by one spacing,
  // one column step along y.
  const arma::vec d_row = geom.element_positions.col(1) - geom.element_positions.col(0);
  const arma::vec d_col = geom.element_positions.col(4) - geom.element_positions.col(0);
  CHECK(d_row(0) == doctest::Approx(geom.spacing_m).epsilon(1e-12));
  CHECK(std::abs(d_row(1)) < 1e-15);
  CHECK(d_col(1) == doctest::Approx(geom.spacing_m).epsilon(1e-12));
  CHECK(std::abs(d_col(0)) < 1e-15);
  // Planar: everything at z = 0.
  CHECK(arma::abs(geom.element_positions.row(2)).max() < 1e-15);
}

TEST_CASE("aperture diagonal counts occupied spans") {
  const ArrayGeometry geom = build_array_geometry(40, 10, 7.5e9);
  const double expect =
      std::hypot(40 * geom.spacing_m, 10 * geom.spacing_m);
  CHECK(geom.aperture_diagonal_m() == doctest::Approx(expect).epsilon(1e-12));

  // A single element has no extent on either axis.
  const ArrayGeometry one = build_array_geometry(1, 1, 7.5e9);
  CHECK(one.aperture_diagonal_m() == 0.0);

  // A line array only stretches along its own axis.
  const ArrayGeometry line = build_array_geometry(8, 1, 7.5e9);
  CHECK(line.aperture_diagonal_m() == doctest::Approx(8 * line.spacing_m).epsilon(1e-12));
}

TEST_CASE("fraunhofer distance spot values") {
  // 2 D^2 / lambda with half-wavelength spacing collapses to
  // (rows^2 + cols^2) * lambda / 2; frozen spot values below.
  const ArrayGeometry a = build_array_geometry(40, 10, 7.5e9);
  const double da = fraunhofer_distance_m(a);
  CHECK(da == doctest::Approx(33.976478573333333).epsilon(1e-12));
  CHECK(std::abs(da - 34.0) / 34.0 < 0.005);

  const ArrayGeometry b = build_array_geometry(80, 20, 15e9);
  const double db = fraunhofer_distance_m(b);
  CHECK(db == doctest::Approx(67.952957146666666).epsilon(1e-12));
  CHECK(std::abs(db - 68.1) / 68.1 < 0.005);

  // Same panel at twice the frequency has half the wavelength, half the
  // spacing, so the boundary halves as well.
  const ArrayGeometry c = build_array_geometry(80, 20, 30e9);
  CHECK(fraunhofer_distance_m(c) == doctest::Approx(db / 2).epsilon(1e-12));
}

TEST_CASE("polar to cartesian follows the broadside convention") {
  const double d = 7.0;
  const arma::vec broad = to_cartesian({d, 0.0, 0.0});
  CHECK(broad(0) == doctest::Approx(0.0).scale(1.0));
  CHECK(broad(1) == doctest::Approx(0.0).scale(1.0));
  CHECK(broad(2) == doctest::Approx(d));

  const arma::vec right = to_cartesian({d, arma::datum::pi / 2, 0.0});
  CHECK(right(0) == doctest::Approx(d));
  CHECK(std::abs(right(1)) < 1e-12);
  CHECK(std::abs(right(2)) < 1e-12);

  const arma::vec up = to_cartesian({d, 0.0, arma::datum::pi / 2});
  CHECK(std::abs(up(0)) < 1e-12);
  CHECK(up(1) == doctest::Approx(d));
  CHECK(std::abs(up(2)) < 1e-12);

  const arma::vec p = to_cartesian({d, 0.3, -0.7});
  CHECK(arma::norm(p) == doctest::Approx(d).epsilon(1e-12));
}

TEST_CASE("user placement sampling respects bounds and draw budget") {
  UserPlacement placement;
  placement.distance_min_m = 2.0;
  placement.distance_max_m = 9.0;

  RngStream rng(11, 3, "placement");
  const auto users = sample_user_polar(placement, 200, rng);
  REQUIRE(users.size() == 200);
  for (const auto& u : users) {
    CHECK(u.distance_m >= 2.0);
    CHECK(u.distance_m <= 9.0);
    CHECK(u.azimuth_rad >= placement.azimuth_lo());
    CHECK(u.azimuth_rad <= placement.azimuth_hi());
    CHECK(u.elevation_rad >= placement.elevation_lo());
    CHECK(u.elevation_rad <= placement.elevation_hi());
  }

  // Exactly three uniforms per user: the first k drops never depend on how
  // many more users an arm asks for.
  RngStream rng_a(5, 0, "placement");
  RngStream rng_b(5, 0, "placement");
  const auto few = sample_user_polar(placement, 3, rng_a);
  const auto many = sample_user_polar(placement, 10, rng_b);
  for (std::size_t i = 0; i < few.size(); ++i) {
    CHECK(few[i].distance_m == many[i].distance_m);
    CHECK(few[i].azimuth_rad == many[i].azimuth_rad);
    CHECK(few[i].elevation_rad == many[i].elevation_rad);
  }
}

TEST_CASE("cone placement narrows both angle ranges") {
  UserPlacement placement;
  placement.cone_half_angle_rad = 0.1;
  CHECK(placement.azimuth_lo() == doctest::Approx(-0.1));
  CHECK(placement.azimuth_hi() == doctest::Approx(0.1));
  CHECK(placement.elevation_lo() == doctest::Approx(-0.1));
  CHECK(placement.elevation_hi() == doctest::Approx(0.1));

  RngStream rng(1, 0, "placement");
  for (const auto& u : sample_user_polar(placement, 50, rng)) {
    CHECK(std::abs(u.azimuth_rad) <= 0.1);
    CHECK(std::abs(u.elevation_rad) <= 0.1);
  }
}

TEST_CASE("invalid configurations are rejected") {
  UserPlacement placement;
  placement.distance_min_m = 0.0;
  CHECK_THROWS_AS(placement.validate(), std::invalid_argument);

  placement = UserPlacement{};
  placement.distance_max_m = placement.distance_min_m - 1.0;
  CHECK_THROWS_AS(placement.validate(), std::invalid_argument);

  SystemConfig cfg;
  cfg.tx_power_total_w = -1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

  CHECK_THROWS_AS(build_array_geometry(0, 4, 7.5e9), std::invalid_argument);
}

TEST_CASE("rng streams are keyed by purpose and reproducible") {
  RngStream a(9, 2, "fading");
  RngStream b(9, 2, "fading");
  RngStream c(9, 2, "pilot");
  const double xa = a.uniform();
  CHECK(xa == b.uniform());
  CHECK(xa != c.uniform());

  CHECK(derive_stream_seed(1, 0, "placement") != derive_stream_seed(1, 1, "placement"));
  CHECK(derive_stream_seed(1, 0, "placement") != derive_stream_seed(2, 0, "placement"));

  // Complex normals have unit total variance split across re/im.
  RngStream d(4, 4, "fading");
  const arma::cx_vec z = d.cnormal_vec(20000);
  CHECK(arma::mean(arma::square(arma::abs(z))) == doctest::Approx(1.0).epsilon(0.05));
}
