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

#include "nearswipt/precoding.hpp"

#include <cmath>

namespace nearswipt {

namespace {

constexpr double kRankTol = 1e-10;       // relative singular-value floor
constexpr double kDegenerateTol = 1e-8;  // projected-channel floor

// Distributes total_power over the non-degenerate beams (weight > 0).
// Degenerate beams keep zero power; if everything is degenerate the power
// stays unassigned.
void split_beam_power(EnergyBeamSet& set, const arma::vec& weights, double total_power,
                      BeamPowerSplit split) {
  set.powers.zeros(weights.n_elem);
  set.unassigned_power_w = 0.0;

  const arma::uvec live = arma::find(weights > 0.0);
  if (live.is_empty()) {
    set.unassigned_power_w = total_power;
    return;
  }

  if (split == BeamPowerSplit::equal) {
    set.powers.elem(live).fill(total_power / static_cast<double>(live.n_elem));
  } else {
    const double wsum = arma::accu(weights.elem(live));
    set.powers.elem(live) = total_power * weights.elem(live) / wsum;
  }
}

}  // namespace

arma::cx_mat estimates_matrix(const std::vector<ChannelEstimate>& estimates) {
  if (estimates.empty()) return {};
  arma::cx_mat out(estimates.front().estimate.n_rows, estimates.size());
  for (std::size_t k = 0; k < estimates.size(); ++k) {
    if (estimates[k].estimate.n_cols != 1)
      throw std::invalid_argument("precoding: expected single-column estimates");
    out.col(k) = estimates[k].estimate;
  }
  return out;
}

ZfPrecoders zf_precoders(const arma::cx_mat& estimates) {
  const std::size_t m = estimates.n_rows;
  const std::size_t k = estimates.n_cols;
  if (k == 0) throw std::invalid_argument("precoding: no estimates given");
  if (k > m) throw singular_channel_error("precoding: more users than antennas");

  const arma::cx_mat gram = estimates.t() * estimates;
  arma::vec gram_eigs;
  if (!arma::eig_sym(gram_eigs, gram))
    throw std::runtime_error("precoding: Gram eigendecomposition failed");
  if (gram_eigs.min() <= 0.0 ||
      std::sqrt(gram_eigs.min()) < kRankTol * std::sqrt(gram_eigs.max()))
    throw singular_channel_error("precoding: estimate matrix is rank deficient");

  arma::cx_mat gram_inv;
  if (!arma::inv_sympd(gram_inv, gram))
    throw singular_channel_error("precoding: Gram inversion failed");

  ZfPrecoders out;
  out.precoders = estimates * gram_inv;
  out.effective_gains.set_size(k);
  for (std::size_t j = 0; j < k; ++j) {
    out.effective_gains[j] = 1.0 / gram_inv(j, j).real();
    out.precoders.col(j) /= arma::norm(out.precoders.col(j));
  }
  return out;
}

PowerAllocation min_se_power_allocation(const arma::vec& effective_gains,
                                        double target_se_bps_hz, double prelog,
                                        double noise_power_w, double p_total_w) {
  if (!(prelog > 0.0 && prelog <= 1.0))
    throw std::invalid_argument("precoding: prelog must be in (0, 1]");
  if (!(target_se_bps_hz >= 0.0))
    throw std::invalid_argument("precoding: target SE must be nonnegative");
  if (effective_gains.n_elem > 0 && effective_gains.min() <= 0.0)
    throw std::invalid_argument("precoding: effective gains must be positive");

  const double snr_needed = std::exp2(target_se_bps_hz / prelog) - 1.0;

  PowerAllocation out;
  out.powers = snr_needed * noise_power_w / effective_gains;
  const double used = arma::accu(out.powers);
  out.feasible = used <= p_total_w * (1.0 + 1e-12);
  out.residual_power_w = out.feasible ? std::max(0.0, p_total_w - used) : 0.0;
  return out;
}

ZfSolution zf_solution(const arma::cx_mat& estimates, double target_se_bps_hz, double prelog,
                       double noise_power_w, double p_total_w) {
  const ZfPrecoders zf = zf_precoders(estimates);
  const PowerAllocation alloc = min_se_power_allocation(zf.effective_gains, target_se_bps_hz,
                                                        prelog, noise_power_w, p_total_w);
  ZfSolution out;
  out.precoders = zf.precoders;
  out.effective_gains = zf.effective_gains;
  out.powers = alloc.powers;
  out.feasible = alloc.feasible;
  out.residual_power_w = alloc.residual_power_w;
  return out;
}

EnergyBeamSet nullspace_energy_beams(const arma::cx_mat& id_estimates,
                                     const arma::cx_mat& eh_estimates, double residual_power_w,
                                     BeamPowerSplit split) {
  if (!(residual_power_w >= 0.0))
    throw std::invalid_argument("precoding: residual power must be nonnegative");
  const std::size_t n_eh = eh_estimates.n_cols;

  EnergyBeamSet out;
  out.beams.zeros(eh_estimates.n_rows, n_eh);

  arma::cx_mat gram;
  if (id_estimates.n_cols > 0) {
    gram = id_estimates.t() * id_estimates;
    arma::vec gram_eigs;
    if (!arma::eig_sym(gram_eigs, gram) || gram_eigs.min() <= 0.0)
      throw singular_channel_error("precoding: ID estimates are rank deficient");
  }

  arma::vec projected_power(n_eh, arma::fill::zeros);
  for (std::size_t e = 0; e < n_eh; ++e) {
    arma::cx_vec residual = eh_estimates.col(e);
    if (id_estimates.n_cols > 0) {
      const arma::cx_vec coeff = arma::solve(gram, id_estimates.t() * residual,
                                             arma::solve_opts::likely_sympd);
      residual -= id_estimates * coeff;
    }
    const double res_norm = arma::norm(residual);
    if (res_norm >= kDegenerateTol * arma::norm(eh_estimates.col(e))) {
      out.beams.col(e) = residual / res_norm;
      projected_power[e] = res_norm * res_norm;
    }
  }

  const arma::vec weights = split == BeamPowerSplit::equal
                                ? arma::conv_to<arma::vec>::from(projected_power > 0.0)
                                : projected_power;
  split_beam_power(out, weights, residual_power_w, split);
  return out;
}

arma::vec realized_se(const arma::cx_mat& true_id_channels, const ZfSolution& solution,
                      const EnergyBeamSet& beams, double noise_power_w, double prelog) {
  const std::size_t k = true_id_channels.n_cols;
  if (solution.precoders.n_cols != k || solution.powers.n_elem != k)
    throw std::invalid_argument("precoding: solution does not match user count");

  // |h_k^H w_j|^2 and |h_k^H b_e|^2 cross-power tables.
  const arma::mat data_xp = arma::square(arma::abs(true_id_channels.t() * solution.precoders));
  arma::vec beam_leak(k, arma::fill::zeros);
  if (beams.beams.n_cols > 0 && arma::accu(beams.powers) > 0.0)
    beam_leak = arma::square(arma::abs(true_id_channels.t() * beams.beams)) * beams.powers;

  arma::vec se(k);
  for (std::size_t u = 0; u < k; ++u) {
    const double signal = solution.powers[u] * data_xp(u, u);
    const double interference =
        arma::dot(solution.powers, data_xp.row(u).t()) - signal + beam_leak[u];
    se[u] = prelog * std::log2(1.0 + signal / (interference + noise_power_w));
  }
  return se;
}

WaterfillingSolution waterfill(const arma::vec& singular_values, double allocated_power_w,
                               double noise_power_w) {
  if (!(allocated_power_w >= 0.0))
    throw std::invalid_argument("precoding: allocated power must be nonnegative");
  if (!(noise_power_w > 0.0))
    throw std::invalid_argument("precoding: noise power must be positive");
  if (!singular_values.is_sorted("descend"))
    throw std::invalid_argument("precoding: singular values must be sorted descending");
  if (singular_values.n_elem > 0 && singular_values.min() < 0.0)
    throw std::invalid_argument("precoding: singular values must be nonnegative");

  WaterfillingSolution out;
  out.mode_powers.zeros(singular_values.n_elem);

  const arma::uvec usable = arma::find(singular_values > 0.0);
  if (usable.is_empty() || allocated_power_w == 0.0) return out;

  // Inverse gains nu_i = noise / sigma_i^2 in ascending order; find the
  // largest active set whose water level clears its worst mode.
  const arma::vec nu =
      noise_power_w / arma::square(singular_values.elem(usable));
  std::size_t active = 0;
  double level = 0.0;
  double nu_sum = 0.0;
  for (std::size_t r = 0; r < nu.n_elem; ++r) {
    nu_sum += nu[r];
    const double candidate = (allocated_power_w + nu_sum) / static_cast<double>(r + 1);
    if (candidate <= nu[r]) break;  // mode r would get nonpositive power
    active = r + 1;
    level = candidate;
  }

  for (std::size_t i = 0; i < active; ++i) {
    out.mode_powers[usable[i]] = level - nu[i];
    out.sum_se += std::log2(level / nu[i]);
  }
  out.water_level_w = level;
  out.active_modes = active;
  return out;
}

TradeoffDesign mimo_tradeoff_design(const arma::cx_mat& id_channel,
                                    const arma::cx_mat& eh_channels, double rho,
                                    double p_total_w, double noise_power_w,
                                    BeamPowerSplit split) {
  if (!(rho >= 0.0 && rho <= 1.0))
    throw std::invalid_argument("precoding: rho must lie in [0, 1]");

  arma::cx_mat u_full, v_full;
  arma::vec s;
  if (!arma::svd_econ(u_full, s, v_full, id_channel))
    throw std::runtime_error("precoding: SVD of the ID channel failed");

  TradeoffDesign out;
  out.waterfill = waterfill(s, rho * p_total_w, noise_power_w);
  out.sum_se = out.waterfill.sum_se;

  const std::size_t r = out.waterfill.active_modes;
  if (r > 0) {
    out.id_precoders = u_full.cols(0, r - 1);
    out.id_powers = out.waterfill.mode_powers.head(r);
  } else {
    out.id_precoders.set_size(id_channel.n_rows, 0);
    out.id_powers.set_size(0);
  }

  // Energy beams live in the complement of the active transmit directions.
  // The basis is orthonormal, so the projector is I - U U^H.
  const std::size_t n_eh = eh_channels.n_cols;
  out.beams.beams.zeros(id_channel.n_rows, n_eh);
  arma::vec projected_power(n_eh, arma::fill::zeros);
  for (std::size_t e = 0; e < n_eh; ++e) {
    arma::cx_vec residual = eh_channels.col(e);
    if (r > 0) residual -= out.id_precoders * (out.id_precoders.t() * residual);
    const double res_norm = arma::norm(residual);
    if (res_norm >= kDegenerateTol * arma::norm(eh_channels.col(e))) {
      out.beams.beams.col(e) = residual / res_norm;
      projected_power[e] = res_norm * res_norm;
    }
  }
  const arma::vec weights = split == BeamPowerSplit::equal
                                ? arma::conv_to<arma::vec>::from(projected_power > 0.0)
                                : projected_power;
  split_beam_power(out.beams, weights, (1.0 - rho) * p_total_w, split);
  return out;
}

}  // namespace nearswipt
