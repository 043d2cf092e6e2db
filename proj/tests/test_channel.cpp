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
#include <limits>

#include "doctest.h"
#include "nearswipt/channel.hpp"

using namespace nearswipt;

TEST_CASE("indoor factory path loss spot values") {
  // 31.84 + 21.5 log10(d) + 19 log10(f_GHz); frozen at two design points.
  CHECK(pathloss_indoor_factory_db(25.0, 7.5e9) ==
        doctest::Approx(78.521874190891116).epsilon(1e-12));
  CHECK(std::abs(pathloss_indoor_factory_db(25.0, 7.5e9) - 78.52) < 0.01);
  CHECK(pathloss_indoor_factory_db(1.0, 1e9) == doctest::Approx(31.84).epsilon(1e-12));

  // Monotone in both arguments.
  CHECK(pathloss_indoor_factory_db(10.0, 7.5e9) < pathloss_indoor_factory_db(20.0, 7.5e9));
  CHECK(pathloss_indoor_factory_db(10.0, 3e9) < pathloss_indoor_factory_db(10.0, 30e9));

  CHECK_THROWS_AS(pathloss_indoor_factory_db(0.5, 7.5e9), std::domain_error);
  CHECK_THROWS_AS(pathloss_indoor_factory_db(10.0, 0.2e9), std::domain_error);
}

TEST_CASE("near-field response is unit modulus and matches far field at range") {
  const ArrayGeometry geom = build_array_geometry(16, 4, 7.5e9);
  const PolarPosition polar{6.0, 0.35, -0.2};
  const arma::cx_vec a = nearfield_response(geom, to_cartesian(polar));
  REQUIRE(a.n_elem == geom.size());
  for (arma::uword m = 0; m < a.n_elem; ++m)
    CHECK(std::abs(a(m)) == doctest::Approx(1.0).epsilon(1e-12));

  // At 100 km the spherical wavefront flattens: the two models agree up to
  // a common phase, so the normalized inner product approaches one.
  const PolarPosition far_polar{1e5, 0.35, -0.2};
  const arma::cx_vec a_near = nearfield_response(geom, to_cartesian(far_polar));
  const arma::cx_vec a_far = farfield_response(geom, 0.35, -0.2);
  const double align = std::abs(arma::cdot(a_far, a_near)) / double(geom.size());
  CHECK(align > 1.0 - 1e-6);

  // The taper scales each element by center distance over element distance,
  // leaving the phases untouched.
  const arma::cx_vec tapered = nearfield_response(geom, to_cartesian(polar), true);
  const arma::vec::fixed<3> pos = to_cartesian(polar);
  for (arma::uword m = 0; m < tapered.n_elem; ++m) {
    const double dist = arma::norm(geom.element_positions.col(m) - arma::vec(pos));
    CHECK(std::abs(tapered(m)) == doctest::Approx(polar.distance_m / dist).epsilon(1e-12));
    CHECK(std::abs(tapered(m) / a(m) - polar.distance_m / dist) < 1e-12);
  }
}

TEST_CASE("isotropic correlation: diagonal, half-wavelength zero, factor consistency") {
  const ArrayGeometry geom = build_array_geometry(8, 4, 7.5e9);
  const CorrelationMatrix corr = spatial_correlation_isotropic(geom);
  REQUIRE(corr.matrix.n_rows == geom.size());

  for (arma::uword m = 0; m < corr.matrix.n_rows; ++m)
    CHECK(corr.matrix(m, m) == doctest::Approx(1.0).epsilon(1e-14));

  // Adjacent elements sit half a wavelength apart: sinc(1) = 0.
  CHECK(std::abs(corr.matrix(0, 1)) < 1e-14);

  // Factor reproduces the (clipped) kernel and is positive semidefinite by
  // construction.
  const arma::mat rebuilt = corr.sampling_factor * corr.sampling_factor.t();
  CHECK(arma::abs(rebuilt - corr.matrix).max() < 1e-8);
  arma::vec eig = arma::eig_sym(rebuilt);
  CHECK(eig.min() > -1e-10);
}

TEST_CASE("isotropic correlation matches the sphere integral on a small array") {
  // Independent oracle: under isotropic scattering the correlation is the
  // average of a(omega) a(omega)^H over the sphere. Sample uniformly via
  // (azimuth, sin(elevation)) and compare entrywise.
  const ArrayGeometry geom = build_array_geometry(2, 2, 7.5e9);
  const CorrelationMatrix corr = spatial_correlation_isotropic(geom);

  // The phases of a planar array only see the in-plane direction
  // components, so the front-hemisphere average equals the full-sphere
  // average; (azimuth, sin(elevation)) uniform is the uniform measure.
  const std::size_t n_az = 256, n_u = 129;
  arma::cx_mat acc(geom.size(), geom.size(), arma::fill::zeros);
  std::size_t count = 0;
  for (std::size_t iu = 0; iu < n_u; ++iu) {
    const double u = -1.0 + 2.0 * (iu + 0.5) / n_u;  // sin(elevation)
    const double el = std::asin(u);
    for (std::size_t ia = 0; ia < n_az; ++ia) {
      const double az = -arma::datum::pi / 2 + arma::datum::pi * (ia + 0.5) / n_az;
      const arma::cx_vec a = farfield_response(geom, az, el);
      acc += a * a.t();
      ++count;
    }
  }
  const arma::mat integral = arma::real(acc) / double(count);
  CHECK(arma::abs(integral - corr.matrix).max() < 1e-2);
}

TEST_CASE("large-scale draws have the configured statistics") {
  FadingProfile profile;  // 4 dB shadowing, kappa ~ LN(7, 8) dB
  const double pl = pathloss_indoor_factory_db(10.0, 7.5e9);

  const std::size_t n = 20000;
  arma::vec shadow(n), kappa(n);
  RngStream rng(3, 0, "largescale");
  for (std::size_t i = 0; i < n; ++i) {
    const LargeScaleState ls = draw_large_scale(pl, profile, rng);
    CHECK(ls.pathloss_db == pl);
    shadow(i) = ls.shadowing_db;
    kappa(i) = ls.kappa_db;
  }
  CHECK(std::abs(arma::mean(shadow)) < 0.15);
  CHECK(arma::stddev(shadow) == doctest::Approx(4.0).epsilon(0.05));
  CHECK(arma::mean(kappa) == doctest::Approx(7.0).epsilon(0.05));
  CHECK(arma::stddev(kappa) == doctest::Approx(8.0).epsilon(0.05));

  // Exactly two normals per draw, so consumers stay aligned.
  RngStream a(6, 1, "largescale"), b(6, 1, "largescale");
  draw_large_scale(pl, profile, a);
  const LargeScaleState second = draw_large_scale(pl, profile, a);
  b.normal();
  b.normal();
  const LargeScaleState aligned = draw_large_scale(pl, profile, b);
  CHECK(second.shadowing_db == aligned.shadowing_db);
  CHECK(second.kappa_db == aligned.kappa_db);

  const LargeScaleState ls{78.52, -2.0, 13.0};
  CHECK(ls.beta() == doctest::Approx(std::pow(10.0, -76.52 / 10.0)).epsilon(1e-12));
  CHECK(ls.kappa_linear() == doctest::Approx(std::pow(10.0, 1.3)).epsilon(1e-12));
}

TEST_CASE("rician channel power and limits") {
  const ArrayGeometry geom = build_array_geometry(16, 4, 7.5e9);
  const arma::cx_vec los = nearfield_response(geom, to_cartesian({8.0, 0.2, -0.1}));
  const CorrelationMatrix corr = spatial_correlation_isotropic(geom);

  // Infinite kappa collapses to the deterministic LOS channel.
  LargeScaleState pure{70.0, 0.0, std::numeric_limits<double>::infinity()};
  RngStream rng(2, 5, "fading");
  const ChannelMatrix h_pure = draw_rician_channel(los, &corr, pure, rng);
  const arma::cx_vec expected = std::sqrt(pure.beta()) * los;
  CHECK(arma::abs(h_pure.entries - expected).max() < 1e-15);

  // Average power per element equals beta for any kappa: the LOS part is
  // unit modulus and the scattered part has unit diagonal correlation.
  LargeScaleState mixed{70.0, 0.0, 3.0};
  const std::size_t n = 4000;
  double acc = 0.0;
  RngStream rng2(2, 6, "fading");
  for (std::size_t i = 0; i < n; ++i) {
    const ChannelMatrix h = draw_rician_channel(los, &corr, mixed, rng2);
    acc += arma::accu(arma::square(arma::abs(h.entries))) / double(geom.size());
  }
  CHECK(acc / n == doctest::Approx(mixed.beta()).epsilon(0.05));

  // Null correlation (spatially white scattering) is accepted.
  RngStream rng3(2, 7, "fading");
  const ChannelMatrix h_white = draw_rician_channel(los, nullptr, mixed, rng3);
  CHECK(h_white.entries.n_rows == geom.size());
}

TEST_CASE("reference path loss rescaling") {
  const ArrayGeometry geom = build_array_geometry(8, 2, 7.5e9);
  ChannelMatrix ch;
  ch.entries = 3.0 * nearfield_response(geom, to_cartesian({4.0, 0.0, 0.0}));
  const ChannelMatrix scaled = scale_to_reference_pathloss(ch, 25.0, 7.5e9);
  const double gain =
      arma::accu(arma::square(arma::abs(scaled.entries))) / double(geom.size());
  const double beta_ref = std::pow(10.0, -pathloss_indoor_factory_db(25.0, 7.5e9) / 10.0);
  CHECK(gain == doctest::Approx(beta_ref).epsilon(1e-12));
}

TEST_CASE("user-side planar offsets") {
  const double lambda = 0.04;
  const arma::mat o1 = ue_planar_offsets(1, lambda);
  CHECK(o1.n_cols == 1);
  CHECK(arma::norm(o1.col(0)) < 1e-15);

  const arma::mat o4 = ue_planar_offsets(4, lambda);  // 2 x 2 panel
  REQUIRE(o4.n_cols == 4);
  CHECK(arma::norm(arma::mean(o4, 1)) < 1e-12);
  // Nearest-neighbor spacing is half a wavelength.
  double dmin = 1e9;
  for (arma::uword i = 0; i < 4; ++i)
    for (arma::uword j = i + 1; j < 4; ++j)
      dmin = std::min(dmin, arma::norm(o4.col(i) - o4.col(j)));
  CHECK(dmin == doctest::Approx(lambda / 2).epsilon(1e-12));

  const arma::mat o8 = ue_planar_offsets(8, lambda);  // 4 x 2 panel
  CHECK(o8.n_cols == 8);
  CHECK(arma::norm(arma::mean(o8, 1)) < 1e-12);
}

TEST_CASE("planar-wave MIMO channel is rank one, spherical-wave is not") {
  const ArrayGeometry geom = build_array_geometry(40, 10, 7.5e9);
  const arma::mat offsets = ue_planar_offsets(4, geom.wavelength_m);

  const arma::cx_mat far = farfield_mimo_los(geom, 0.25, -0.15, offsets);
  REQUIRE(far.n_rows == geom.size());
  REQUIRE(far.n_cols == 4);
  const arma::vec s_far = arma::svd(far);
  CHECK(s_far(1) / s_far(0) < 1e-12);

  const arma::vec::fixed<3> center = {0.0, 0.0, 25.0};
  const arma::cx_mat near = nearfield_mimo_los(geom, center, offsets);
  const arma::vec s_near = arma::svd(near);
  // Frozen value for the default panel at 25 m broadside.
  CHECK(s_near(1) / s_near(0) == doctest::Approx(1.449528e-2).epsilon(1e-4));
  for (arma::uword i = 0; i < near.n_elem; ++i)
    CHECK(std::abs(near(i)) == doctest::Approx(1.0).epsilon(1e-12));
}
