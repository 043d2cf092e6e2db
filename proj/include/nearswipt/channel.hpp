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
#include <cstddef>
#include <limits>

#include "nearswipt/rng.hpp"
#include "nearswipt/scenario.hpp"

namespace nearswipt {

enum class FieldModel { near, far };

// Statistical profile of the large-scale fading draws: lognormal shadowing
// and a lognormal Rician kappa-factor, both parameterized in dB.
struct FadingProfile {
  double shadowing_std_db = 4.0;
  double kappa_mean_db = 7.0;
  double kappa_std_db = 8.0;
};

struct LargeScaleState {
  double pathloss_db = 0.0;
  double shadowing_db = 0.0;
  double kappa_db = 0.0;

  double beta() const;          // linear gain 10^(-(pathloss+shadowing)/10)
  double kappa_linear() const;  // 10^(kappa_db/10)
};

// One user's channel between the base station (M rows) and its antennas
// (N columns), tagged with the wavefront model that produced the LOS part.
struct ChannelMatrix {
  arma::cx_mat entries;
  std::size_t user_id = std::numeric_limits<std::size_t>::max();
  FieldModel field_model = FieldModel::near;
};

// Spatial correlation of the scattered component across the base-station
// array. The kernel is real for isotropic scattering, so everything stays
// in double precision. sampling_factor F satisfies F*F^T = matrix after
// eigenvalue clipping and is what draw_rician_channel multiplies with.
struct CorrelationMatrix {
  arma::mat matrix;
  arma::mat sampling_factor;
};

// Spherical-wavefront array response: element m carries
// exp(-i*2*pi*||position - p_m||/lambda). Entries are unit modulus unless
// amplitude_taper is set, which additionally weights each element by
// (distance to array center)/(distance to element).
arma::cx_vec nearfield_response(const ArrayGeometry& geometry,
                                const arma::vec::fixed<3>& position,
                                bool amplitude_taper = false);

// Planar-wavefront response for a source direction (azimuth, elevation):
// element m carries exp(+i*2*pi*(p_m . u)/lambda) with u the unit vector
// toward the source. Agrees with nearfield_response up to a common phase
// as distance grows at fixed angle.
arma::cx_vec farfield_response(const ArrayGeometry& geometry, double azimuth_rad,
                               double elevation_rad);

// 3GPP TR 38.901 indoor-factory LOS path loss:
//   PL = 31.84 + 21.50*log10(d_m) + 19.00*log10(f_GHz)  [dB]
// Valid for d >= 1 m and f in [0.5, 100] GHz.
double pathloss_indoor_factory_db(double distance_m, double carrier_frequency_hz);

// Correlation under 3-D isotropic scattering: [R]_mn = sinc(2*d_mn/lambda)
// with sinc(x) = sin(pi*x)/(pi*x). Unit diagonal; eigenvalues clipped at
// zero before factoring (tolerance 1e-9 * ||R||).
CorrelationMatrix spatial_correlation_isotropic(const ArrayGeometry& geometry);

// Draws shadowing and kappa for one link. Two normals per call, in a fixed
// order, so paired arms stay aligned.
LargeScaleState draw_large_scale(double pathloss_db, const FadingProfile& profile,
                                 RngStream& rng);

// Correlated Rician channel around the given LOS response (M x N; one
// column per user antenna, each with its own LOS column):
//   h = sqrt(beta) * ( sqrt(k/(k+1))*los + sqrt(1/(k+1))*F*w )
// correlation = nullptr means spatially white scattering. An infinite
// kappa collapses to the pure LOS channel.
ChannelMatrix draw_rician_channel(const arma::cx_mat& los_response,
                                  const CorrelationMatrix* correlation,
                                  const LargeScaleState& large_scale, RngStream& rng,
                                  FieldModel field_model = FieldModel::near,
                                  std::size_t user_id = std::numeric_limits<std::size_t>::max());

// Rescales so the average per-element power gain equals the shadowing-free
// path loss at reference_distance; used for controlled comparisons where
// only the wavefront structure should differ between arms.
ChannelMatrix scale_to_reference_pathloss(const ChannelMatrix& channel,
                                          double reference_distance_m,
                                          double carrier_frequency_hz);

// Antenna offsets for a small user-side planar array: n antennas arranged
// r x c with r >= c and r*c = n (1 -> 1x1, 2 -> 2x1, 4 -> 2x2, 8 -> 4x2),
// half-wavelength spacing, parallel to the base-station array, centered at
// the origin. Returned as 3 x n offsets in meters.
arma::mat ue_planar_offsets(std::size_t n_antennas, double wavelength_m);

// Element-to-element spherical-wave LOS MIMO channel for a user array
// centered at `center` with the given offsets. Unit-modulus entries.
arma::cx_mat nearfield_mimo_los(const ArrayGeometry& geometry,
                                const arma::vec::fixed<3>& center,
                                const arma::mat& ue_offsets);

// Planar-wave LOS MIMO channel: outer product of the base-station response
// and the user-array response for the same direction. Rank one by
// construction.
arma::cx_mat farfield_mimo_los(const ArrayGeometry& geometry, double azimuth_rad,
                               double elevation_rad, const arma::mat& ue_offsets);

}  // namespace nearswipt
