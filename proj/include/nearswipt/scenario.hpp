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

#pragma once

#include <armadillo>
#include <cstdint>
#include <optional>
#include <vector>

#include "nearswipt/rng.hpp"

namespace nearswipt {

inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s

// System-level parameters. Defaults describe an indoor factory downlink:
// 10 W transmit power over 100 MHz in the upper mid-band, thermal noise
// floor -204 dBW/Hz with a 7 dB receiver noise figure, 100 uW uplink
// pilots, 10'000-symbol coherence blocks, 3 mW rectifier circuit draw.
struct SystemConfig {
  double carrier_frequency_hz = 7.5e9;
  double bandwidth_hz = 100e6;
  double noise_psd_dbw_hz = -204.0;
  double noise_figure_db = 7.0;
  double tx_power_total_w = 10.0;
  double pilot_power_w = 100e-6;
  std::size_t coherence_block_len = 10'000;
  double eh_circuit_power_w = 3e-3;
  std::size_t num_id_users = 10;
  std::size_t num_eh_users = 10;
  std::size_t id_user_antennas = 1;
  std::size_t trials = 200;
  std::uint64_t master_seed = 1;

  // Throws std::invalid_argument on nonsensical values.
  void validate() const;
};

// Receiver noise power in watts over the configured bandwidth.
double noise_power_w(const SystemConfig& config);

// Uniform planar array centered at the origin in the x-y plane, broadside
// along +z. Rows step along x, columns along y. Element order is
// column-major in (row, col): index m = row + col*rows.
struct ArrayGeometry {
  std::size_t rows = 0;
  std::size_t cols = 0;
  double spacing_m = 0.0;
  double wavelength_m = 0.0;
  arma::mat element_positions;  // 3 x (rows*cols)

  std::size_t size() const { return rows * cols; }

  // Physical aperture diagonal: per-axis extent counts the full occupied
  // span (n elements cover n*spacing), a single element contributes zero.
  double aperture_diagonal_m() const;
};

ArrayGeometry build_array_geometry(std::size_t rows, std::size_t cols,
                                   double carrier_frequency_hz,
                                   double spacing_factor = 0.5);

// Classical 2*D^2/lambda boundary between the radiative near field and the
// far field, for aperture diagonal D.
double fraunhofer_distance_m(const ArrayGeometry& geometry);

// Position in array-centric spherical coordinates. Azimuth rotates from
// broadside (+z) toward +x; elevation tilts toward +y:
//   direction = (cos(el)*sin(az), sin(el), cos(el)*cos(az)).
// Both angles zero means broadside.
struct PolarPosition {
  double distance_m = 0.0;
  double azimuth_rad = 0.0;
  double elevation_rad = 0.0;
};

arma::vec::fixed<3> to_cartesian(const PolarPosition& polar);

// Sampling region for user drops. Angles are drawn uniformly and
// independently, which covers the front half-space at the default ranges.
// cone_half_angle, when set, narrows both angle ranges to [-c, +c] for
// clustered broadside placement.
struct UserPlacement {
  double distance_min_m = 1.5;
  double distance_max_m = 25.0;
  double azimuth_min_rad = -arma::datum::pi / 2;
  double azimuth_max_rad = arma::datum::pi / 2;
  double elevation_min_rad = -arma::datum::pi / 2;
  double elevation_max_rad = arma::datum::pi / 2;
  std::optional<double> cone_half_angle_rad;

  void validate() const;

  // Effective angle bounds after applying the cone override.
  double azimuth_lo() const;
  double azimuth_hi() const;
  double elevation_lo() const;
  double elevation_hi() const;
};

// Draws (distance, azimuth, elevation) triples, one per user. Each user
// consumes exactly three uniforms, so paired experiment arms that share a
// stream see identical drops regardless of what happens downstream.
std::vector<PolarPosition> sample_user_polar(const UserPlacement& placement,
                                             std::size_t count, RngStream& rng);

// Cartesian positions (3 x count), same draws as sample_user_polar.
arma::mat sample_user_positions(const UserPlacement& placement, std::size_t count,
                                RngStream& rng);

}  // namespace nearswipt
