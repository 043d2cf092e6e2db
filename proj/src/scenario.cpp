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

#include "nearswipt/scenario.hpp"

#include <cmath>
#include <stdexcept>

namespace nearswipt {

void SystemConfig::validate() const {
  if (!(carrier_frequency_hz > 0.0))
    throw std::invalid_argument("scenario: carrier frequency must be positive");
  if (!(bandwidth_hz > 0.0))
    throw std::invalid_argument("scenario: bandwidth must be positive");
  if (!(tx_power_total_w > 0.0))
    throw std::invalid_argument("scenario: total transmit power must be positive");
  if (!(pilot_power_w > 0.0))
    throw std::invalid_argument("scenario: pilot power must be positive");
  if (coherence_block_len == 0)
    throw std::invalid_argument("scenario: coherence block length must be positive");
  if (!(eh_circuit_power_w >= 0.0))
    throw std::invalid_argument("scenario: circuit power must be nonnegative");
  if (!std::isfinite(noise_psd_dbw_hz) || !std::isfinite(noise_figure_db))
    throw std::invalid_argument("scenario: noise parameters must be finite");
  if (id_user_antennas == 0)
    throw std::invalid_argument("scenario: ID users need at least one antenna");
}

double noise_power_w(const SystemConfig& config) {
  const double total_db =
      config.noise_psd_dbw_hz + 10.0 * std::log10(config.bandwidth_hz) + config.noise_figure_db;
  return std::pow(10.0, total_db / 10.0);
}

double ArrayGeometry::aperture_diagonal_m() const {
  const double ext_x = rows > 1 ? static_cast<double>(rows) * spacing_m : 0.0;
  const double ext_y = cols > 1 ? static_cast<double>(cols) * spacing_m : 0.0;
  return std::hypot(ext_x, ext_y);
}

ArrayGeometry build_array_geometry(std::size_t rows, std::size_t cols,
                                   double carrier_frequency_hz, double spacing_factor) {
  if (rows < 1 || cols < 1)
    throw std::invalid_argument("scenario: array needs at least one element per axis");
  if (!(carrier_frequency_hz > 0.0))
    throw std::invalid_argument("scenario: carrier frequency must be positive");
  if (!(spacing_factor > 0.0))
    throw std::invalid_argument("scenario: element spacing must be positive");

  ArrayGeometry g;
  g.rows = rows;
  g.cols = cols;
  g.wavelength_m = kSpeedOfLight / carrier_frequency_hz;
  g.spacing_m = spacing_factor * g.wavelength_m;
  g.element_positions.zeros(3, rows * cols);

  const double x0 = -0.5 * static_cast<double>(rows - 1) * g.spacing_m;
  const double y0 = -0.5 * static_cast<double>(cols - 1) * g.spacing_m;
  for (std::size_t c = 0; c < cols; ++c) {
    for (std::size_t r = 0; r < rows; ++r) {
      const std::size_t m = r + c * rows;
      g.element_positions(0, m) = x0 + static_cast<double>(r) * g.spacing_m;
      g.element_positions(1, m) = y0 + static_cast<double>(c) * g.spacing_m;
    }
  }
  return g;
}

double fraunhofer_distance_m(const ArrayGeometry& geometry) {
  const double d = geometry.aperture_diagonal_m();
  return 2.0 * d * d / geometry.wavelength_m;
}

arma::vec::fixed<3> to_cartesian(const PolarPosition& polar) {
  arma::vec::fixed<3> p;
  const double ce = std::cos(polar.elevation_rad);
  p[0] = polar.distance_m * ce * std::sin(polar.azimuth_rad);
  p[1] = polar.distance_m * std::sin(polar.elevation_rad);
  p[2] = polar.distance_m * ce * std::cos(polar.azimuth_rad);
  return p;
}

void UserPlacement::validate() const {
  if (!(distance_min_m > 0.0) || !(distance_max_m >= distance_min_m))
    throw std::invalid_argument("scenario: invalid distance range");
  if (!(azimuth_max_rad >= azimuth_min_rad) || !(elevation_max_rad >= elevation_min_rad))
    throw std::invalid_argument("scenario: invalid angle range");
  const double half_pi = arma::datum::pi / 2;
  if (azimuth_min_rad < -half_pi - 1e-12 || azimuth_max_rad > half_pi + 1e-12 ||
      elevation_min_rad < -half_pi - 1e-12 || elevation_max_rad > half_pi + 1e-12)
    throw std::invalid_argument("scenario: angle ranges must stay within the front half-space");
  if (cone_half_angle_rad && (*cone_half_angle_rad < 0.0 || *cone_half_angle_rad > half_pi))
    throw std::invalid_argument("scenario: cone half-angle out of range");
}

double UserPlacement::azimuth_lo() const {
  return cone_half_angle_rad ? -*cone_half_angle_rad : azimuth_min_rad;
}
double UserPlacement::azimuth_hi() const {
  return cone_half_angle_rad ? *cone_half_angle_rad : azimuth_max_rad;
}
double UserPlacement::elevation_lo() const {
  return cone_half_angle_rad ? -*cone_half_angle_rad : elevation_min_rad;
}
double UserPlacement::elevation_hi() const {
  return cone_half_angle_rad ? *cone_half_angle_rad : elevation_max_rad;
}

std::vector<PolarPosition> sample_user_polar(const UserPlacement& placement, std::size_t count,
                                             RngStream& rng) {
  placement.validate();
  std::vector<PolarPosition> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i].distance_m = rng.uniform(placement.distance_min_m, placement.distance_max_m);
    out[i].azimuth_rad = rng.uniform(placement.azimuth_lo(), placement.azimuth_hi());
    out[i].elevation_rad = rng.uniform(placement.elevation_lo(), placement.elevation_hi());
  }
  return out;
}

arma::mat sample_user_positions(const UserPlacement& placement, std::size_t count,
                                RngStream& rng) {
  const auto polar = sample_user_polar(placement, count, rng);
  arma::mat positions(3, count);
  for (std::size_t i = 0; i < count; ++i) positions.col(i) = to_cartesian(polar[i]);
  return positions;
}

}  // namespace nearswipt
