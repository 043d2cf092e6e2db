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
#include <complex>
#include <limits>
#include <optional>
#include <vector>

#include "nearswipt/channel.hpp"
#include "nearswipt/rng.hpp"
#include "nearswipt/scenario.hpp"

namespace nearswipt {

enum class EstimatorKind { perfect, ml, ls };

// Uplink pilot budget for one user. Sequences are mutually orthogonal with
// ||phi||^2 = pilot_length, so despreading removes other users entirely;
// the sequence index only matters for bookkeeping.
struct PilotConfig {
  std::size_t pilot_length = 5;
  double pilot_power_w = 100e-6;
  std::size_t sequence_index = 0;

  void validate() const;
};

struct MlParams {
  double distance_m = 0.0;
  double azimuth_rad = 0.0;
  double elevation_rad = 0.0;
  std::complex<double> gain{0.0, 0.0};
};

struct ChannelEstimate {
  arma::cx_mat estimate;
  EstimatorKind estimator = EstimatorKind::ls;
  std::optional<MlParams> ml_params;
  double error_variance_w = std::numeric_limits<double>::quiet_NaN();
};

// Search grid for the parametric (distance, azimuth, elevation) estimator.
// Distances are log-spaced, angles linear. A dimension may collapse to a
// single point only when its range is degenerate.
struct MlGridSpec {
  std::size_t distance_points = 50;
  double distance_min_m = 1.5;
  double distance_max_m = 25.0;
  std::size_t azimuth_points = 64;
  double azimuth_min_rad = -arma::datum::pi / 2;
  double azimuth_max_rad = arma::datum::pi / 2;
  std::size_t elevation_points = 64;
  double elevation_min_rad = -arma::datum::pi / 2;
  double elevation_max_rad = arma::datum::pi / 2;
  bool refine = true;

  void validate() const;
  std::size_t total_points() const {
    return distance_points * azimuth_points * elevation_points;
  }
};

// Despread pilot observation for one user:
//   y = sqrt(pilot_power) * pilot_length * h + n,   n_m ~ CN(0, noise * tau)
// Orthogonality across users is exploited analytically, so the observation
// never depends on other users' channels.
arma::cx_vec simulate_uplink_pilot(const arma::cx_vec& true_channel, const PilotConfig& pilot,
                                   double noise_power_w, RngStream& rng);

// Least-squares: estimate = y / (sqrt(p)*tau). The analytic per-entry error
// variance sigma^2/(p*tau) is filled in when the caller supplies the noise
// power; it is not needed for the estimate itself.
ChannelEstimate ls_estimate(const arma::cx_vec& observation, const PilotConfig& pilot,
                            double noise_power_w = std::numeric_limits<double>::quiet_NaN());

// Reusable grid for the ML estimator. Atom generation is the expensive part
// (one spherical-wave response per grid point); the constructor can cache
// the whole atom matrix when it fits, and search() falls back to streaming
// chunk evaluation otherwise. Results are identical either way: per
// observation the metric |a^H y|^2 / ||a||^2 is maximized with ties broken
// by the lowest flat grid index (distance fastest, then azimuth, then
// elevation).
class MlSearchGrid {
 public:
  enum class CachePolicy { automatic, always, never };

  MlSearchGrid(const ArrayGeometry& geometry, const MlGridSpec& spec,
               CachePolicy policy = CachePolicy::automatic);

  // Best flat grid index per observation column.
  arma::uvec search(const arma::cx_mat& observations) const;

  const MlGridSpec& spec() const { return spec_; }
  const ArrayGeometry& geometry() const { return geometry_; }
  bool cached() const { return !atoms_.is_empty(); }
  std::size_t total_points() const { return spec_.total_points(); }

  PolarPosition grid_point(std::size_t flat_index) const;
  arma::cx_vec atom(const PolarPosition& point) const;

  // One golden-section pass per dimension (distance, elevation, azimuth, in
  // that order) inside the winning cell's neighborhood.
  PolarPosition refine_point(const arma::cx_vec& observation, std::size_t flat_index) const;

 private:
  arma::cx_mat atoms_chunk(std::size_t first, std::size_t count) const;

  ArrayGeometry geometry_;
  MlGridSpec spec_;
  arma::vec distances_;
  arma::vec azimuths_;
  arma::vec elevations_;
  arma::cx_mat atoms_;  // M x total_points when cached, empty otherwise
};

// Parametric ML estimate: grid search for (d, az, el), optional refinement,
// then the scalar gain a^H y / (sqrt(p) * tau * ||a||^2) along the fitted
// response. The channel model is LOS-only; scattered energy shows up as
// model error.
ChannelEstimate ml_estimate(const arma::cx_vec& observation, const PilotConfig& pilot,
                            const MlSearchGrid& grid);

// Batched variant: one search over all observation columns (shared grid
// sweep), then per-user gain and refinement. pilots.size() must equal the
// number of columns.
std::vector<ChannelEstimate> ml_estimate(const arma::cx_mat& observations,
                                         const std::vector<PilotConfig>& pilots,
                                         const MlSearchGrid& grid);

// One-shot convenience; builds a streaming grid internally.
ChannelEstimate ml_estimate(const arma::cx_vec& observation, const PilotConfig& pilot,
                            const MlGridSpec& spec, const ArrayGeometry& geometry);

// Squared Frobenius error ||estimate - truth||^2.
double estimate_mse(const ChannelEstimate& estimate, const arma::cx_mat& true_channel);

}  // namespace nearswipt
