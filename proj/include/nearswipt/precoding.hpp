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
#include <stdexcept>
#include <vector>

#include "nearswipt/estimation.hpp"

namespace nearswipt {

// Raised when a user channel matrix is rank deficient beyond tolerance;
// the harness records the trial as an outage instead of aborting the run.
struct singular_channel_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class BeamPowerSplit { equal, proportional };

struct ZfPrecoders {
  arma::cx_mat precoders;     // M x K, unit-norm columns
  arma::vec effective_gains;  // g_k = 1 / [(H^H H)^-1]_kk
};

struct PowerAllocation {
  arma::vec powers;  // W per user
  bool feasible = true;
  double residual_power_w = 0.0;
};

struct ZfSolution {
  arma::cx_mat precoders;
  arma::vec powers;
  arma::vec effective_gains;
  bool feasible = true;
  double residual_power_w = 0.0;
};

// Dedicated power-carrying beams. Powered columns are unit norm and lie in
// the null space of whatever the set was built against; a beam whose
// projected channel was degenerate keeps a zero column and zero power, its
// share redistributed over the rest. Power that could not be assigned at
// all (every beam degenerate) is reported, never silently dropped.
struct EnergyBeamSet {
  arma::cx_mat beams;  // M x E
  arma::vec powers;    // W per beam
  double unassigned_power_w = 0.0;
};

struct WaterfillingSolution {
  arma::vec mode_powers;
  double water_level_w = 0.0;
  double sum_se = 0.0;  // bit/s/Hz, prelog 1
  std::size_t active_modes = 0;
};

struct TradeoffDesign {
  arma::cx_mat id_precoders;  // M x active_modes, orthonormal columns
  arma::vec id_powers;
  WaterfillingSolution waterfill;
  EnergyBeamSet beams;
  double sum_se = 0.0;
};

// Column-stacks per-user single-antenna estimates into an M x K matrix.
arma::cx_mat estimates_matrix(const std::vector<ChannelEstimate>& estimates);

// Zero-forcing directions: W_raw = H (H^H H)^-1, columns normalized.
// Throws singular_channel_error when the smallest singular value of H is
// below 1e-10 times the largest.
ZfPrecoders zf_precoders(const arma::cx_mat& estimates);

// Minimum-rate allocation: p_k = (2^(target/prelog) - 1) * noise / g_k.
// Infeasible when the sum exceeds p_total; powers are still reported so the
// caller can see by how much.
PowerAllocation min_se_power_allocation(const arma::vec& effective_gains,
                                        double target_se_bps_hz, double prelog,
                                        double noise_power_w, double p_total_w);

// Convenience composition of the two steps above.
ZfSolution zf_solution(const arma::cx_mat& estimates, double target_se_bps_hz, double prelog,
                       double noise_power_w, double p_total_w);

// Energy beams in the null space of the ID estimates: each EH estimate is
// projected onto the orthogonal complement of span(id_estimates) and
// normalized. residual_power is split equally by default, or proportionally
// to the projected channel power. With no ID users the projector is the
// identity and the beams are matched to the EH estimates.
EnergyBeamSet nullspace_energy_beams(const arma::cx_mat& id_estimates,
                                     const arma::cx_mat& eh_estimates, double residual_power_w,
                                     BeamPowerSplit split = BeamPowerSplit::equal);

// Genie-aided spectral efficiency against the true channels:
//   SE_k = prelog * log2(1 + p_k|h_k^H w_k|^2 /
//          (sum_{j != k} p_j|h_k^H w_j|^2 + sum_e q_e|h_k^H b_e|^2 + noise))
arma::vec realized_se(const arma::cx_mat& true_id_channels, const ZfSolution& solution,
                      const EnergyBeamSet& beams, double noise_power_w, double prelog);

// Water-filling over eigenmode gains sigma_i^2 / noise. singular_values
// must be sorted descending. Zero modes never activate; zero power is valid
// and yields zero SE.
WaterfillingSolution waterfill(const arma::vec& singular_values, double allocated_power_w,
                               double noise_power_w);

// Point-to-point MIMO split: waterfill rho*p_total over the ID channel's
// eigenmodes (transmit directions = left singular vectors), then place
// energy beams in the orthogonal complement of the active directions with
// (1-rho)*p_total. rho = 0 degenerates to matched energy beams and zero SE;
// rho = 1 leaves the beams powerless.
TradeoffDesign mimo_tradeoff_design(const arma::cx_mat& id_channel,
                                    const arma::cx_mat& eh_channels, double rho,
                                    double p_total_w, double noise_power_w,
                                    BeamPowerSplit split = BeamPowerSplit::equal);

}  // namespace nearswipt
