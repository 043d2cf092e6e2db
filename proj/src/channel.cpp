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

#include "nearswipt/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace nearswipt {

namespace {

const double kTwoPi = 2.0 * arma::datum::pi;

double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = arma::datum::pi * x;
  return std::sin(px) / px;
}

arma::vec::fixed<3> direction_unit(double azimuth_rad, double elevation_rad) {
  arma::vec::fixed<3> u;
  const double ce = std::cos(elevation_rad);
  u[0] = ce * std::sin(azimuth_rad);
  u[1] = std::sin(elevation_rad);
  u[2] = ce * std::cos(azimuth_rad);
  return u;
}

arma::cx_vec unit_phasor(const arma::vec& phase) {
  return arma::cx_vec(arma::cos(phase), arma::sin(phase));
}

}  // namespace

double LargeScaleState::beta() const {
  return std::pow(10.0, -(pathloss_db + shadowing_db) / 10.0);
}

double LargeScaleState::kappa_linear() const { return std::pow(10.0, kappa_db / 10.0); }

arma::cx_vec nearfield_response(const ArrayGeometry& geometry,
                                const arma::vec::fixed<3>& position, bool amplitude_taper) {
  const arma::mat diff = geometry.element_positions.each_col() - arma::vec(position);
  const arma::vec dist = arma::sqrt(arma::sum(arma::square(diff), 0)).t();
  if (dist.min() < 1e-3)
    throw std::domain_error("channel: position coincides with an array element");

  arma::cx_vec a = unit_phasor(-kTwoPi / geometry.wavelength_m * dist);
  if (amplitude_taper) {
    const double d_center = arma::norm(arma::vec(position));
    a %= arma::conv_to<arma::cx_vec>::from(d_center / dist);
  }
  return a;
}

arma::cx_vec farfield_response(const ArrayGeometry& geometry, double azimuth_rad,
                               double elevation_rad) {
  const arma::vec::fixed<3> u = direction_unit(azimuth_rad, elevation_rad);
  const arma::vec proj = geometry.element_positions.t() * u;
  return unit_phasor(kTwoPi / geometry.wavelength_m * proj);
}

double pathloss_indoor_factory_db(double distance_m, double carrier_frequency_hz) {
  const double f_ghz = carrier_frequency_hz / 1e9;
  if (!(distance_m >= 1.0))
    throw std::domain_error("channel: path-loss model needs distance >= 1 m");
  if (!(f_ghz >= 0.5 && f_ghz <= 100.0))
    throw std::domain_error("channel: path-loss model covers 0.5-100 GHz");
  return 31.84 + 21.50 * std::log10(distance_m) + 19.00 * std::log10(f_ghz);
}

CorrelationMatrix spatial_correlation_isotropic(const ArrayGeometry& geometry) {
  const std::size_t m = geometry.size();
  CorrelationMatrix out;
  out.matrix.set_size(m, m);

  const arma::mat& p = geometry.element_positions;
  for (std::size_t j = 0; j < m; ++j) {
    out.matrix(j, j) = 1.0;
    for (std::size_t i = j + 1; i < m; ++i) {
      const double d = arma::norm(p.col(i) - p.col(j));
      const double r = sinc(2.0 * d / geometry.wavelength_m);
      out.matrix(i, j) = r;
      out.matrix(j, i) = r;
    }
  }

  arma::vec eigval;
  arma::mat eigvec;
  if (!arma::eig_sym(eigval, eigvec, out.matrix))
    throw std::runtime_error("channel: correlation eigendecomposition failed");

  // The sinc kernel is PSD analytically; anything below a small negative
  // tolerance would mean the construction itself is broken.
  const double tol = 1e-9 * std::abs(eigval.max());
  if (eigval.min() < -tol)
    throw std::runtime_error("channel: correlation matrix is not PSD");
  eigval.clamp(0.0, arma::datum::inf);

  out.sampling_factor = eigvec * arma::diagmat(arma::sqrt(eigval));
  return out;
}

LargeScaleState draw_large_scale(double pathloss_db, const FadingProfile& profile,
                                 RngStream& rng) {
  LargeScaleState state;
  state.pathloss_db = pathloss_db;
  state.shadowing_db = profile.shadowing_std_db * rng.normal();
  state.kappa_db = profile.kappa_mean_db + profile.kappa_std_db * rng.normal();
  return state;
}

ChannelMatrix draw_rician_channel(const arma::cx_mat& los_response,
                                  const CorrelationMatrix* correlation,
                                  const LargeScaleState& large_scale, RngStream& rng,
                                  FieldModel field_model, std::size_t user_id) {
  const double kappa = large_scale.kappa_linear();
  if (!(kappa >= 0.0)) throw std::invalid_argument("channel: kappa must be nonnegative");
  const double sqrt_beta = std::sqrt(large_scale.beta());

  ChannelMatrix out;
  out.user_id = user_id;
  out.field_model = field_model;

  if (std::isinf(kappa)) {
    out.entries = sqrt_beta * los_response;
    return out;
  }

  const double los_w = std::sqrt(kappa / (kappa + 1.0));
  const double nlos_w = std::sqrt(1.0 / (kappa + 1.0));

  arma::cx_mat w = rng.cnormal_mat(los_response.n_rows, los_response.n_cols);
  if (correlation != nullptr) {
    // F is real; two real GEMMs beat one complex one.
    w = arma::cx_mat(correlation->sampling_factor * arma::real(w),
                     correlation->sampling_factor * arma::imag(w));
  }

  out.entries = sqrt_beta * (los_w * los_response + nlos_w * w);
  return out;
}

ChannelMatrix scale_to_reference_pathloss(const ChannelMatrix& channel,
                                          double reference_distance_m,
                                          double carrier_frequency_hz) {
  const double fro = arma::norm(channel.entries, "fro");
  if (!(fro > 0.0))
    throw std::invalid_argument("channel: cannot rescale an all-zero channel");

  const double target_beta = std::pow(
      10.0, -pathloss_indoor_factory_db(reference_distance_m, carrier_frequency_hz) / 10.0);
  const double n_entries = static_cast<double>(channel.entries.n_elem);

  ChannelMatrix out = channel;
  out.entries *= std::sqrt(target_beta * n_entries) / fro;
  return out;
}

arma::mat ue_planar_offsets(std::size_t n_antennas, double wavelength_m) {
  if (n_antennas == 0)
    throw std::invalid_argument("channel: user array needs at least one antenna");

  std::size_t c = static_cast<std::size_t>(std::sqrt(static_cast<double>(n_antennas)));
  while (c > 1 && n_antennas % c != 0) --c;
  const std::size_t r = n_antennas / c;

  const double s = 0.5 * wavelength_m;
  const double x0 = -0.5 * static_cast<double>(r - 1) * s;
  const double y0 = -0.5 * static_cast<double>(c - 1) * s;

  arma::mat offsets(3, n_antennas, arma::fill::zeros);
  for (std::size_t j = 0; j < c; ++j) {
    for (std::size_t i = 0; i < r; ++i) {
      const std::size_t n = i + j * r;
      offsets(0, n) = x0 + static_cast<double>(i) * s;
      offsets(1, n) = y0 + static_cast<double>(j) * s;
    }
  }
  return offsets;
}

arma::cx_mat nearfield_mimo_los(const ArrayGeometry& geometry,
                                const arma::vec::fixed<3>& center,
                                const arma::mat& ue_offsets) {
  arma::cx_mat h(geometry.size(), ue_offsets.n_cols);
  for (arma::uword n = 0; n < ue_offsets.n_cols; ++n) {
    const arma::vec::fixed<3> antenna = arma::vec(center) + ue_offsets.col(n);
    h.col(n) = nearfield_response(geometry, antenna);
  }
  return h;
}

arma::cx_mat farfield_mimo_los(const ArrayGeometry& geometry, double azimuth_rad,
                               double elevation_rad, const arma::mat& ue_offsets) {
  const arma::vec::fixed<3> u = direction_unit(azimuth_rad, elevation_rad);
  const arma::cx_vec a_bs = farfield_response(geometry, azimuth_rad, elevation_rad);
  const arma::vec proj = ue_offsets.t() * u;
  const arma::cx_vec a_ue = unit_phasor(kTwoPi / geometry.wavelength_m * proj);
  return a_bs * a_ue.t();  // .t() on complex is the conjugate transpose
}

}  // namespace nearswipt
