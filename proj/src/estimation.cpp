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

#include "nearswipt/estimation.hpp"

#include <cmath>
#include <stdexcept>

namespace nearswipt {

namespace {

constexpr std::size_t kSearchChunk = 4096;        // atoms per streamed GEMM
constexpr std::size_t kCacheLimitBytes = 1024u << 20;

arma::vec log_spaced(double lo, double hi, std::size_t n) {
  if (n == 1) return arma::vec{lo};
  return arma::exp(arma::linspace(std::log(lo), std::log(hi), n));
}

arma::vec lin_spaced(double lo, double hi, std::size_t n) {
  if (n == 1) return arma::vec{lo};
  return arma::linspace(lo, hi, n);
}

void check_axis(std::size_t points, double lo, double hi, const char* name) {
  if (points == 0) throw std::invalid_argument(std::string("estimation: ") + name +
                                               " grid needs at least one point");
  if (hi < lo) throw std::invalid_argument(std::string("estimation: ") + name +
                                           " grid range is inverted");
  if (points == 1 && hi != lo)
    throw std::invalid_argument(std::string("estimation: ") + name +
                                " grid needs >= 2 points over a non-degenerate range");
}

// Golden-section maximization that also considers the incumbent point. A
// candidate must clear the incumbent by a relative margin well above the
// rounding noise of the metric sum, so an exact on-grid optimum survives
// refinement bit-for-bit instead of drifting on float noise.
template <typename F>
void golden_improve(F&& f, double lo, double hi, double& best_x, double& best_val) {
  if (!(hi > lo)) return;
  constexpr double inv_phi = 0.6180339887498949;
  constexpr double rel_margin = 1e-12;
  constexpr int iters = 25;

  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  auto consider = [&](double x, double val) {
    if (val > best_val * (1.0 + rel_margin)) {
      best_val = val;
      best_x = x;
    }
  };
  consider(x1, f1);
  consider(x2, f2);

  for (int i = 0; i < iters; ++i) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
      consider(x2, f2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
      consider(x1, f1);
    }
  }
}

}  // namespace

void PilotConfig::validate() const {
  if (pilot_length == 0)
    throw std::invalid_argument("estimation: pilot length must be positive");
  if (!(pilot_power_w > 0.0))
    throw std::invalid_argument("estimation: pilot power must be positive");
}

void MlGridSpec::validate() const {
  check_axis(distance_points, distance_min_m, distance_max_m, "distance");
  check_axis(azimuth_points, azimuth_min_rad, azimuth_max_rad, "azimuth");
  check_axis(elevation_points, elevation_min_rad, elevation_max_rad, "elevation");
  if (!(distance_min_m > 0.0))
    throw std::invalid_argument("estimation: distance grid must be positive");
}

arma::cx_vec simulate_uplink_pilot(const arma::cx_vec& true_channel, const PilotConfig& pilot,
                                   double noise_power_w, RngStream& rng) {
  pilot.validate();
  if (!(noise_power_w >= 0.0))
    throw std::invalid_argument("estimation: noise power must be nonnegative");

  const double tau = static_cast<double>(pilot.pilot_length);
  arma::cx_vec y = std::sqrt(pilot.pilot_power_w) * tau * true_channel;
  if (noise_power_w > 0.0)
    y += std::sqrt(noise_power_w * tau) * rng.cnormal_vec(true_channel.n_elem);
  return y;
}

ChannelEstimate ls_estimate(const arma::cx_vec& observation, const PilotConfig& pilot,
                            double noise_power_w) {
  pilot.validate();
  const double tau = static_cast<double>(pilot.pilot_length);
  const double scale = std::sqrt(pilot.pilot_power_w) * tau;

  ChannelEstimate est;
  est.estimator = EstimatorKind::ls;
  est.estimate = observation / scale;
  est.error_variance_w = noise_power_w / (pilot.pilot_power_w * tau);
  return est;
}

MlSearchGrid::MlSearchGrid(const ArrayGeometry& geometry, const MlGridSpec& spec,
                           CachePolicy policy)
    : geometry_(geometry), spec_(spec) {
  spec_.validate();
  distances_ = log_spaced(spec_.distance_min_m, spec_.distance_max_m, spec_.distance_points);
  azimuths_ = lin_spaced(spec_.azimuth_min_rad, spec_.azimuth_max_rad, spec_.azimuth_points);
  elevations_ =
      lin_spaced(spec_.elevation_min_rad, spec_.elevation_max_rad, spec_.elevation_points);

  const std::size_t bytes = total_points() * geometry_.size() * sizeof(arma::cx_double);
  const bool cache = policy == CachePolicy::always ||
                     (policy == CachePolicy::automatic && bytes <= kCacheLimitBytes);
  if (cache) atoms_ = atoms_chunk(0, total_points());
}

PolarPosition MlSearchGrid::grid_point(std::size_t flat_index) const {
  const std::size_t nd = spec_.distance_points;
  const std::size_t na = spec_.azimuth_points;
  PolarPosition p;
  p.distance_m = distances_[flat_index % nd];
  p.azimuth_rad = azimuths_[(flat_index / nd) % na];
  p.elevation_rad = elevations_[flat_index / (nd * na)];
  return p;
}

arma::cx_vec MlSearchGrid::atom(const PolarPosition& point) const {
  return nearfield_response(geometry_, to_cartesian(point));
}

arma::cx_mat MlSearchGrid::atoms_chunk(std::size_t first, std::size_t count) const {
  arma::cx_mat chunk(geometry_.size(), count);
  for (std::size_t i = 0; i < count; ++i) chunk.col(i) = atom(grid_point(first + i));
  return chunk;
}

arma::uvec MlSearchGrid::search(const arma::cx_mat& observations) const {
  if (observations.n_rows != geometry_.size())
    throw std::invalid_argument("estimation: observation size does not match the array");

  const std::size_t total = total_points();
  const std::size_t n_obs = observations.n_cols;
  arma::uvec best_idx(n_obs, arma::fill::zeros);
  arma::vec best_val(n_obs);
  best_val.fill(-1.0);

  // Atoms are unit modulus, so ||a||^2 = M for every grid point and the
  // metric reduces to |a^H y|^2 up to a common factor.
  for (std::size_t first = 0; first < total; first += kSearchChunk) {
    const std::size_t count = std::min(kSearchChunk, total - first);
    arma::mat metric;
    if (cached())
      metric = arma::square(arma::abs(atoms_.cols(first, first + count - 1).t() * observations));
    else
      metric = arma::square(arma::abs(atoms_chunk(first, count).t() * observations));

    for (std::size_t j = 0; j < n_obs; ++j) {
      for (std::size_t i = 0; i < count; ++i) {
        if (metric(i, j) > best_val[j]) {  // strict: first index wins ties
          best_val[j] = metric(i, j);
          best_idx[j] = first + i;
        }
      }
    }
  }
  return best_idx;
}

PolarPosition MlSearchGrid::refine_point(const arma::cx_vec& observation,
                                         std::size_t flat_index) const {
  PolarPosition point = grid_point(flat_index);

  const auto metric = [&](const PolarPosition& p) {
    const std::complex<double> z = arma::cdot(atom(p), observation);
    return std::norm(z);
  };

  const std::size_t nd = spec_.distance_points;
  const std::size_t na = spec_.azimuth_points;
  const std::size_t id = flat_index % nd;
  const std::size_t ia = (flat_index / nd) % na;
  const std::size_t ie = flat_index / (nd * na);

  double best_val = metric(point);

  // Coordinate descent, one golden pass per dimension, bracketed by the
  // neighboring grid cells. Wide dimensions go first: the azimuth peak is
  // the sharpest for wide rows, so it is refined last, once the smoother
  // distance and elevation coordinates no longer sit on cell centers.
  if (nd > 1) {
    const double lo = distances_[id > 0 ? id - 1 : 0];
    const double hi = distances_[std::min(id + 1, nd - 1)];
    golden_improve([&](double d) { PolarPosition q = point; q.distance_m = d; return metric(q); },
                   lo, hi, point.distance_m, best_val);
  }
  const std::size_t ne = spec_.elevation_points;
  if (ne > 1) {
    const double lo = elevations_[ie > 0 ? ie - 1 : 0];
    const double hi = elevations_[std::min(ie + 1, ne - 1)];
    golden_improve(
        [&](double e) { PolarPosition q = point; q.elevation_rad = e; return metric(q); }, lo,
        hi, point.elevation_rad, best_val);
  }
  if (na > 1) {
    const double lo = azimuths_[ia > 0 ? ia - 1 : 0];
    const double hi = azimuths_[std::min(ia + 1, na - 1)];
    golden_improve(
        [&](double a) { PolarPosition q = point; q.azimuth_rad = a; return metric(q); }, lo, hi,
        point.azimuth_rad, best_val);
  }
  return point;
}

namespace {

ChannelEstimate finish_ml(const arma::cx_vec& observation, const PilotConfig& pilot,
                          const MlSearchGrid& grid, std::size_t flat_index) {
  const PolarPosition point = grid.spec().refine
                                  ? grid.refine_point(observation, flat_index)
                                  : grid.grid_point(flat_index);
  const arma::cx_vec a = grid.atom(point);
  const double tau = static_cast<double>(pilot.pilot_length);
  const double norm_sq = static_cast<double>(a.n_elem);  // unit-modulus atoms
  const std::complex<double> gain =
      arma::cdot(a, observation) / (std::sqrt(pilot.pilot_power_w) * tau * norm_sq);

  ChannelEstimate est;
  est.estimator = EstimatorKind::ml;
  est.estimate = gain * a;
  est.ml_params = MlParams{point.distance_m, point.azimuth_rad, point.elevation_rad, gain};
  return est;
}

}  // namespace

ChannelEstimate ml_estimate(const arma::cx_vec& observation, const PilotConfig& pilot,
                            const MlSearchGrid& grid) {
  pilot.validate();
  const arma::uvec idx = grid.search(observation);
  return finish_ml(observation, pilot, grid, idx[0]);
}

std::vector<ChannelEstimate> ml_estimate(const arma::cx_mat& observations,
                                         const std::vector<PilotConfig>& pilots,
                                         const MlSearchGrid& grid) {
  if (pilots.size() != observations.n_cols)
    throw std::invalid_argument("estimation: one pilot config per observation column");
  for (const auto& p : pilots) p.validate();

  const arma::uvec idx = grid.search(observations);
  std::vector<ChannelEstimate> out;
  out.reserve(pilots.size());
  for (std::size_t j = 0; j < pilots.size(); ++j)
    out.push_back(finish_ml(observations.col(j), pilots[j], grid, idx[j]));
  return out;
}

ChannelEstimate ml_estimate(const arma::cx_vec& observation, const PilotConfig& pilot,
                            const MlGridSpec& spec, const ArrayGeometry& geometry) {
  const MlSearchGrid grid(geometry, spec, MlSearchGrid::CachePolicy::never);
  return ml_estimate(observation, pilot, grid);
}

double estimate_mse(const ChannelEstimate& estimate, const arma::cx_mat& true_channel) {
  if (estimate.estimate.n_rows != true_channel.n_rows ||
      estimate.estimate.n_cols != true_channel.n_cols)
    throw std::invalid_argument("estimation: estimate/truth shape mismatch");
  const double err = arma::norm(estimate.estimate - true_channel, "fro");
  return err * err;
}

}  // namespace nearswipt
